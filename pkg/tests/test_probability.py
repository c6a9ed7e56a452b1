import random
from fractions import Fraction
from itertools import product

import pytest

from corpus import positive_log_concave
from domprob.partitions import cover_pairs, dominates, dual, enumerate_partitions
from domprob.probability import (Distribution, DistributionError, EventQuery, bracket_q_threshold,
                                  check_converse_direction, check_forward_direction, check_hypotheses,
                                  condition_C, condition_C_series, degree_formula, degree_refutation,
                                  event_probability, make_distribution, monte_carlo,
                                  power_step_dominance, q_family, q_gap, scan_q_family,
                                  uniform013, verify_equivalence, verify_finite_family)
from domprob.series import Poly


def brute_probability(X: Distribution, shape, j, t) -> Fraction:
    """Sum the probability of every individual filling of the diagram."""
    pmf = X.as_dict()
    mass = X.total_mass
    rows = [x for x in shape if x]
    cells = sum(rows)
    total = Fraction(0)
    for filling in product(pmf, repeat=cells):
        pos, ok = 0, True
        for r in rows:
            if sum(filling[pos:pos + r]) > t:
                ok = False
                break
            pos += r
        if ok and sum(filling) == j:
            w = Fraction(1)
            for k in filling:
                w *= pmf[k] / mass
            total += w
    return total


def test_make_distribution():
    assert make_distribution("uniform:2").as_dict() == {k: Fraction(1, 3) for k in range(3)}
    assert make_distribution("binomial:2:1/2").as_dict() == {0: Fraction(1, 4), 1: Fraction(1, 2), 2: Fraction(1, 4)}
    y = make_distribution("pmf:0=1/3,1=1/3,3=1/3")
    assert y.support == (0, 1, 3) and not y.has_full_range()
    w = make_distribution("weights:0=1,1=2,2=1")
    assert not w.normalized and w.total_mass == 4


@pytest.mark.parametrize("bad", ["pmf:0=1/2,1=1/3", "pmf:0=3/2,1=-1/2", "binomial:2:3/2",
                                 "binomial:2:0", "uniform:x", "poisson:3", "pmf:0=1,0=0"])
def test_make_distribution_rejects(bad):
    with pytest.raises(DistributionError):
        make_distribution(bad)


def test_section5_values_exact():
    Y = uniform013()
    assert event_probability(Y, EventQuery((4, 2), 12, 6)) == Fraction(10, 729)
    assert event_probability(Y, EventQuery((3, 3), 12, 6)) == Fraction(9, 729)
    assert brute_probability(Y, (4, 2), 12, 6) == Fraction(10, 729)
    assert brute_probability(Y, (3, 3), 12, 6) == Fraction(9, 729)


def test_empty_shape_and_degenerate_distributions():
    X = make_distribution("uniform:3")
    assert event_probability(X, EventQuery((), 0, 0)) == 1
    assert event_probability(X, EventQuery((), 2, 5)) == 0
    zero = make_distribution("pmf:0=1")
    for shape in [(3, 1), (2, 2, 2)]:
        assert event_probability(zero, EventQuery(shape, 0, 0)) == 1
        assert event_probability(zero, EventQuery(shape, 1, 4)) == 0
    # with P(X=0)=1 condition C holds for any pair
    assert condition_C((5,), (1, 1), zero).holds
    assert condition_C((1, 1), (5,), zero).holds


def test_point_mass_at_one():
    # P(X=1)=1: C holds iff equal weight and mu(1) <= lam(1)
    one = make_distribution("pmf:1=1")
    for n in range(1, 6):
        parts = enumerate_partitions(n)
        for lam in parts:
            for mu in parts:
                assert condition_C(lam, mu, one).holds == (mu[0] <= lam[0])
    assert not condition_C((2, 1), (2,), one).holds


@pytest.mark.parametrize("literal", ["uniform:2", "binomial:3:1/3", "pmf:0=1/3,1=1/3,3=1/3", "pmf:0=1/2,2=1/2"])
def test_event_probability_matches_brute_force(literal):
    X = make_distribution(literal)
    rng = random.Random(literal)
    for _ in range(12):
        shape = sorted((rng.randint(0, 3) for _ in range(rng.randint(0, 3))), reverse=True)
        if sum(shape) > 5:
            continue
        t = rng.randint(0, X.max_value * 3)
        j = rng.randint(0, X.max_value * sum(shape) + 1)
        assert event_probability(X, EventQuery(shape, j, t)) == brute_probability(X, shape, j, t)


def test_unnormalized_weights_give_same_probabilities():
    w = make_distribution("weights:0=2,1=4,2=2")
    p = make_distribution("binomial:2:1/2")
    for shape in [(2, 1), (3,), (1, 1, 1)]:
        for t in range(5):
            for j in range(7):
                q = EventQuery(shape, j, t)
                assert event_probability(w, q) == event_probability(p, q)
    assert condition_C((2, 1), (1, 1, 1), w).holds == condition_C((2, 1), (1, 1, 1), p).holds


@pytest.mark.parametrize("literal", ["uniform:2", "pmf:0=1/3,1=1/3,3=1/3", "binomial:3:2/5"])
def test_normalization_and_monotonicity_in_cap(literal):
    X = make_distribution(literal)
    r = X.max_value
    for shape in [(3, 1), (2, 2, 1), (4,)]:
        full = r * shape[0]
        assert sum(event_probability(X, EventQuery(shape, j, full)) for j in range(r * sum(shape) + 1)) == 1
        for j in range(r * sum(shape) + 1):
            values = [event_probability(X, EventQuery(shape, j, t)) for t in range(full + 3)]
            assert values == sorted(values)
            assert values[full:] == [values[full]] * 3


def test_condition_examples():
    Y = uniform013()
    rep = condition_C((4, 2), (3, 3), Y)
    assert not rep.holds
    j, t, lhs, rhs = rep.witness
    assert (j, t, lhs, rhs) == (12, 6, Fraction(10, 729), Fraction(9, 729))
    assert event_probability(Y, EventQuery((4, 2), j, t)) == lhs
    assert condition_C((3, 1), (3, 1), Y).holds
    assert condition_C((2,), (1, 1), make_distribution("binomial:1:1/2")).holds


def test_condition_bounds_are_complete():
    # no new violation appears beyond the scanned totals and caps
    X = make_distribution("pmf:0=1/3,1=1/3,3=1/3")
    for lam, mu in [((4, 2), (3, 3)), ((3, 1), (2, 2)), ((2, 2), (3, 1)), ((5,), (2, 2, 1))]:
        rep = condition_C(lam, mu, X)
        j_max, t_max = rep.bounds_used
        extended = all(
            event_probability(X, EventQuery(lam, j, t)) <= event_probability(X, EventQuery(mu, j, t))
            for j in range(j_max + 4) for t in range(t_max + 4))
        assert extended == rep.holds


def test_series_form_matches_probability_form():
    X = make_distribution("uniform:2")
    p = X.pgf()
    for lam in enumerate_partitions(4):
        for mu in enumerate_partitions(4):
            assert condition_C_series(lam, mu, p, 8) == condition_C(lam, mu, X).holds


def test_verify_equivalence_examples():
    rep = verify_equivalence(4, make_distribution("uniform:2"))
    assert rep.hypotheses_met and len(rep.rows) == 25 and rep.consistent
    rep = verify_equivalence(1, make_distribution("uniform:2"))
    assert len(rep.rows) == 1 and rep.consistent
    rep = verify_equivalence(6, uniform013())
    assert not rep.hypotheses_met
    assert any("missing [2]" in msg for msg in rep.hypothesis_failures)
    bad = [(tuple(r.lam), tuple(r.mu)) for r in rep.discrepancies]
    assert ((4, 2), (3, 3)) in bad


def test_verify_equivalence_parallel_matches_serial():
    X = make_distribution("binomial:2:1/3")
    serial = verify_equivalence(5, X).to_json()
    parallel = verify_equivalence(5, X, threads=2).to_json()
    assert serial == parallel


def test_hypotheses():
    assert check_hypotheses(make_distribution("binomial:3:1/2")) == []
    # full range but not TN_2
    msgs = check_hypotheses(make_distribution("pmf:0=2/5,1=1/10,2=1/2"))
    assert len(msgs) == 1 and "TN_2" in msgs[0]


def test_forward_direction_for_tn2_sequences():
    rng = random.Random(17)
    dists = [make_distribution("uniform:3"), make_distribution("binomial:2:1/4")]
    for _ in range(3):
        dists.append(Distribution.from_weights(positive_log_concave(rng, 4)))
    for X in dists:
        assert check_forward_direction(X, 6) == []


def test_converse_direction_for_full_range():
    for r in (1, 2, 3):
        X = Distribution.uniform(r)
        assert check_converse_direction(X, 6) == []
    # it also holds without TN_2, the converse only needs the range
    assert check_converse_direction(make_distribution("pmf:0=2/5,1=1/10,2=1/2"), 6) == []


def test_power_step_dominance():
    for X in [make_distribution("uniform:2"), make_distribution("binomial:3:1/3")]:
        p = X.pgf()
        for A in range(1, 7):
            for B in range(A):
                for t in range(9):
                    assert power_step_dominance(p, A, B, t)
    # fails for the gap distribution at the counterexample's parameters
    Y = uniform013().pgf()
    assert not all(power_step_dominance(Y, A, B, t)
                   for A in range(1, 5) for B in range(A) for t in range(9))


def test_degree_formula():
    rng = random.Random(2)
    for _ in range(30):
        lam = sorted((rng.randint(1, 5) for _ in range(rng.randint(1, 4))), reverse=True)
        r = rng.choice([1, 2, 3])
        for t in range(1, lam[0] + 1):
            actual, predicted = degree_formula(lam, r, t)
            assert actual == predicted


def test_degree_refutation_witnesses_failures():
    for r in (1, 2):
        X = Distribution.uniform(r)
        for n in range(2, 7):
            parts = enumerate_partitions(n)
            for lam in parts:
                for mu in parts:
                    hit = degree_refutation(lam, mu, r)
                    if dominates(lam, mu):
                        assert hit is None
                        continue
                    j, t = hit
                    assert event_probability(X, EventQuery(lam, j, t)) > 0
                    assert event_probability(X, EventQuery(mu, j, t)) == 0


def test_finite_family():
    family = [make_distribution("binomial:1:1/2"), make_distribution("uniform:2"),
              make_distribution("binomial:3:1/4")]
    for n in range(1, 6):
        assert verify_finite_family(n, family).holds


def test_q_family_matches_brute_force():
    for q in (Fraction(1, 2), Fraction(19, 20), Fraction(99, 100)):
        X = q_family(q)
        row = scan_q_family([q])[0]
        assert row.p_lam == brute_probability(X, (4, 2), 12, 6)
        assert row.p_mu == brute_probability(X, (3, 3), 12, 6)
    assert q_gap(1) == Fraction(1, 729)
    assert q_gap(0) < 0


def test_q_threshold_bracket():
    lo, hi = bracket_q_threshold(Fraction(9, 10), 1, steps=20)
    assert q_gap(lo) <= 0 < q_gap(hi)
    assert hi - lo == Fraction(1, 10) / 2**20
    assert Fraction(97, 100) < lo < Fraction(98, 100)


def test_monte_carlo_examples():
    X = make_distribution("uniform:1")
    impossible = monte_carlo(X, EventQuery((2, 1), 4, 5), 1000, seed=1)
    assert impossible.estimate == 0 and impossible.stderr == 0
    fair = monte_carlo(X, EventQuery((1,), 1, 1), 200_000, seed=7)
    assert abs(fair.estimate - 0.5) <= 4 * fair.stderr
    assert monte_carlo(X, EventQuery((), 0, 0), 10, seed=0).estimate == 1


def test_monte_carlo_deterministic():
    Y = uniform013()
    q = EventQuery((4, 2), 12, 6)
    a = monte_carlo(Y, q, 150_000, seed=42)
    b = monte_carlo(Y, q, 150_000, seed=42)
    c = monte_carlo(Y, q, 150_000, seed=43)
    assert a == b
    assert a.hits != c.hits
    exact = float(event_probability(Y, q))
    assert abs(a.estimate - exact) <= 4 * a.stderr
    with pytest.raises(ValueError):
        monte_carlo(Y, q, 0, seed=1)


def test_monte_carlo_threshold_sampling_is_exact_in_distribution():
    # single-cell draws reproduce the pmf
    X = make_distribution("pmf:0=1/7,2=2/7,5=4/7")
    for k, mass in X.pmf:
        res = monte_carlo(X, EventQuery((1,), k, 5), 100_000, seed=k)
        assert abs(res.estimate - float(mass)) <= 4 * res.stderr
