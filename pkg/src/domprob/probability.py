"""Ball-filling probabilities on Ferrers diagrams and the condition C.

Each cell of the diagram of a partition ``nu`` receives an independent draw
of X balls.  The event E(nu, X, j, t) asks for ``j`` balls in total with at
most ``t`` in every row.  Its probability is read off a product of truncated
powers of the probability generating function of X::

    prod_i truncate(pgf**nu[i], t) = sum_j pgf(1)**|nu| * P(E(nu, X, j, t)) x**j

Everything is exact; only :func:`monte_carlo` produces floats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Iterable, Mapping, Sequence

import numpy as np

from ._parallel import ordered_map
from .partitions import Partition, covers, dominates, dual, enumerate_partitions, format_parts
from .series import (Poly, coeff_dominated_by, format_rational, parse_rational, power,
                     row_product, to_fraction, truncate)
from .tn import SequenceView, tn2_via_char


class DistributionError(ValueError):
    pass


@dataclass(frozen=True)
class Distribution:
    """Finite-support pmf on the non-negative integers.

    ``normalized=False`` marks a non-negative weight sequence that is only
    proportional to a pmf; probabilities are then computed after dividing by
    the total weight.
    """

    pmf: tuple[tuple[int, Fraction], ...]
    normalized: bool = True
    label: str = ""

    def __init__(self, pmf: Mapping[int, object], normalized: bool = True, label: str = ""):
        items = []
        for k, mass in sorted(pmf.items()):
            k, mass = int(k), to_fraction(mass)
            if k < 0:
                raise DistributionError(f"negative support point {k}")
            if mass < 0:
                raise DistributionError(f"negative mass {mass} at {k}")
            if mass:
                items.append((k, mass))
        if not items:
            raise DistributionError("distribution has no mass")
        total = sum(m for _, m in items)
        if normalized and total != 1:
            raise DistributionError(f"masses sum to {total}, not 1")
        object.__setattr__(self, "pmf", tuple(items))
        object.__setattr__(self, "normalized", normalized)
        object.__setattr__(self, "label", label)

    @classmethod
    def uniform(cls, r: int) -> "Distribution":
        if r < 0:
            raise DistributionError("uniform:r needs r >= 0")
        return cls({k: Fraction(1, r + 1) for k in range(r + 1)}, label=f"uniform:{r}")

    @classmethod
    def binomial(cls, m: int, q) -> "Distribution":
        q = to_fraction(q)
        if not 0 < q < 1:
            raise DistributionError(f"binomial parameter {q} outside (0,1)")
        if m < 0:
            raise DistributionError("binomial:m needs m >= 0")
        pmf = {k: comb(m, k) * q**k * (1 - q) ** (m - k) for k in range(m + 1)}
        return cls(pmf, label=f"binomial:{m}:{format_rational(q)}")

    @classmethod
    def from_weights(cls, weights: Sequence, label: str = "") -> "Distribution":
        """Unnormalized non-negative coefficient sequence w_0, w_1, ..."""
        return cls(dict(enumerate(weights)), normalized=False, label=label)

    def as_dict(self) -> dict[int, Fraction]:
        return dict(self.pmf)

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(k for k, _ in self.pmf)

    @property
    def max_value(self) -> int:
        return self.pmf[-1][0]

    @property
    def total_mass(self) -> Fraction:
        return sum((m for _, m in self.pmf), Fraction(0))

    def has_full_range(self) -> bool:
        """True iff the support is exactly {0, 1, ..., r}."""
        return self.support == tuple(range(self.max_value + 1))

    def pgf(self) -> Poly:
        coeffs = [Fraction(0)] * (self.max_value + 1)
        for k, m in self.pmf:
            coeffs[k] = m
        return Poly(coeffs)

    def sequence(self) -> SequenceView:
        return SequenceView(self.pgf().coeffs, finite=True)

    def to_json(self) -> dict:
        return {"label": self.label, "normalized": self.normalized,
                "pmf": {str(k): format_rational(m) for k, m in self.pmf}}


def make_distribution(literal: str) -> Distribution:
    """Parse a distribution literal.

    Accepted forms: ``uniform:r``, ``binomial:m:num/den``, ``pmf:k=mass,...``
    (masses must sum to 1) and ``weights:k=w,...`` (any non-negative weights).
    """
    literal = literal.strip()
    kind, _, rest = literal.partition(":")
    try:
        if kind == "uniform":
            return Distribution.uniform(int(rest))
        if kind == "binomial":
            m, q = rest.split(":")
            return Distribution.binomial(int(m), parse_rational(q))
        if kind in ("pmf", "weights"):
            pmf: dict[int, Fraction] = {}
            for item in rest.split(","):
                k, mass = item.split("=")
                k = int(k)
                if k in pmf:
                    raise DistributionError(f"duplicate support point {k}")
                pmf[k] = parse_rational(mass)
            return Distribution(pmf, normalized=(kind == "pmf"), label=literal)
    except DistributionError:
        raise
    except ValueError as exc:
        raise DistributionError(f"malformed distribution literal {literal!r}: {exc}") from None
    raise DistributionError(f"unknown distribution kind {kind!r} in {literal!r}")


@dataclass(frozen=True)
class EventQuery:
    shape: tuple[int, ...]
    total: int
    cap: int

    def __init__(self, shape: Iterable[int], total: int, cap: int):
        object.__setattr__(self, "shape", tuple(shape))
        object.__setattr__(self, "total", int(total))
        object.__setattr__(self, "cap", int(cap))

    def to_json(self) -> dict:
        return {"shape": list(self.shape), "total": self.total, "cap": self.cap}


def filling_polynomial(X: Distribution, shape: Sequence[int], t: int) -> Poly:
    """``prod_i truncate(pgf**shape[i], t)`` (unnormalized when X is)."""
    return _filling_polynomial(X.pgf(), tuple(sorted(shape, reverse=True)), t)


@lru_cache(maxsize=65536)
def _filling_polynomial(pgf: Poly, shape: tuple[int, ...], t: int) -> Poly:
    return row_product(shape, pgf, t)


def event_probability(X: Distribution, q: EventQuery) -> Fraction:
    """Exact P(E(shape, X, total, cap))."""
    poly = filling_polynomial(X, q.shape, q.cap)
    return poly[q.total] / X.total_mass ** sum(q.shape)


@dataclass
class ConditionReport:
    holds: bool
    witness: tuple[int, int, Fraction, Fraction] | None = None
    bounds_used: tuple[int, int] = (0, 0)

    def __bool__(self):
        return self.holds

    def to_json(self) -> dict:
        w = None
        if self.witness is not None:
            j, t, lhs, rhs = self.witness
            w = {"j": j, "t": t, "P_lhs": format_rational(lhs), "P_rhs": format_rational(rhs)}
        return {"holds": self.holds, "witness": w,
                "bounds_used": {"j_max": self.bounds_used[0], "t_max": self.bounds_used[1]}}


def condition_bounds(lam: Sequence[int], mu: Sequence[int], X: Distribution) -> tuple[int, int]:
    """(j_max, t_max) outside of which no new inequality can appear.

    Totals above ``r * weight`` have probability zero for both shapes, and caps
    at or above ``r * largest_part`` no longer bind.
    """
    r = X.max_value
    j_max = r * max(sum(lam), sum(mu))
    t_max = r * max(max(lam, default=0), max(mu, default=0))
    return j_max, t_max


def condition_C(lam: Sequence[int], mu: Sequence[int], X: Distribution) -> ConditionReport:
    """Decide P(E(lam, X, j, t)) <= P(E(mu, X, j, t)) for every j and t.

    Caps are scanned in increasing order and, for each cap, totals in
    increasing order; the first failing pair (j, t) is the witness.
    """
    j_max, t_max = condition_bounds(lam, mu, X)
    mass = X.total_mass
    scale_l = mass ** sum(lam)
    scale_m = mass ** sum(mu)
    for t in range(t_max + 1):
        fl = filling_polynomial(X, lam, t)
        fm = filling_polynomial(X, mu, t)
        for j in range(j_max + 1):
            pl, pm = fl[j] / scale_l, fm[j] / scale_m
            if pl > pm:
                return ConditionReport(False, (j, t, pl, pm), (j_max, t_max))
    return ConditionReport(True, None, (j_max, t_max))


def condition_C_series(lam: Sequence[int], mu: Sequence[int], p: Poly, t_max: int) -> bool:
    """Coefficient-wise form: filling(lam, t) ⊑ filling(mu, t) for all t <= t_max."""
    return all(coeff_dominated_by(row_product(lam, p, t), row_product(mu, p, t))
               for t in range(t_max + 1))


# ---------------------------------------------------------------------------
# exhaustive sweeps


def check_hypotheses(X: Distribution) -> list[str]:
    """Reasons why X falls outside 'TN_2 with range {0..r}', empty if none."""
    problems = []
    if not X.has_full_range():
        missing = sorted(set(range(X.max_value + 1)) - set(X.support))
        problems.append(f"range is not an initial segment {{0..{X.max_value}}}: missing {missing}")
    if X.max_value < 1:
        problems.append("range must contain some r >= 1")
    tn2 = tn2_via_char(X.sequence())
    if not tn2.holds:
        problems.append(f"not TN_2: {tn2.witness.to_json()}")
    return problems


@dataclass
class EquivalenceRow:
    lam: Partition
    mu: Partition
    dominates: bool
    condition: ConditionReport

    @property
    def consistent(self) -> bool:
        return self.dominates == self.condition.holds

    def to_json(self) -> dict:
        return {"lam": format_parts(self.lam), "mu": format_parts(self.mu),
                "dominates": self.dominates, "condition": self.condition.holds,
                "consistent": self.consistent,
                "witness": self.condition.to_json()["witness"]}


@dataclass
class EquivalenceReport:
    n: int
    distribution: Distribution
    hypothesis_failures: list[str]
    rows: list[EquivalenceRow] = field(default_factory=list)

    @property
    def hypotheses_met(self) -> bool:
        return not self.hypothesis_failures

    @property
    def discrepancies(self) -> list[EquivalenceRow]:
        return [row for row in self.rows if not row.consistent]

    @property
    def consistent(self) -> bool:
        return not self.discrepancies

    def to_json(self) -> dict:
        return {"n": self.n, "distribution": self.distribution.to_json(),
                "hypotheses_met": self.hypotheses_met,
                "hypothesis_failures": self.hypothesis_failures,
                "pairs": len(self.rows), "discrepancies": len(self.discrepancies),
                "consistent": self.consistent,
                "table": [row.to_json() for row in self.rows]}


def _equivalence_row(job: tuple[Partition, Partition, Distribution]) -> EquivalenceRow:
    lam, mu, X = job
    return EquivalenceRow(lam, mu, dominates(lam, mu), condition_C(lam, mu, X))


def verify_equivalence(n: int, X: Distribution, threads: int | None = 1) -> EquivalenceReport:
    """Compare ``lam ⊵ mu`` with C(lam, mu, X) over all ordered pairs of partitions of n.

    Hypothesis failures are recorded but the sweep always runs, so the
    behaviour of distributions without the hypotheses can be explored.
    """
    report = EquivalenceReport(n, X, check_hypotheses(X))
    parts = enumerate_partitions(n)
    jobs = [(lam, mu, X) for lam in parts for mu in parts]
    report.rows = ordered_map(_equivalence_row, jobs, threads)
    return report


def check_forward_direction(X: Distribution, max_weight: int) -> list[tuple[Partition, Partition, ConditionReport]]:
    """C(lam, mu, X) for every cover pair lam ·> mu with |lam| <= max_weight.

    Returns the failures (none are expected when X is TN_2).  Cover pairs
    suffice since C is transitive along chains.
    """
    failures = []
    for n in range(1, max_weight + 1):
        parts = enumerate_partitions(n)
        for lam in parts:
            for mu in parts:
                if covers(lam, mu):
                    rep = condition_C(lam, mu, X)
                    if not rep.holds:
                        failures.append((lam, mu, rep))
    return failures


def check_converse_direction(X: Distribution, max_weight: int) -> list[tuple[Partition, Partition]]:
    """Pairs of equal weight <= max_weight where C holds but lam does not dominate mu."""
    failures = []
    for n in range(max_weight + 1):
        parts = enumerate_partitions(n)
        for lam in parts:
            for mu in parts:
                if not dominates(lam, mu) and condition_C(lam, mu, X).holds:
                    failures.append((lam, mu))
    return failures


def power_step_dominance(p: Poly, A: int, B: int, t: int) -> bool:
    """``trunc(p^(A+1), t) * trunc(p^B, t)`` ⊑ ``trunc(p^A, t) * trunc(p^(B+1), t)``."""
    left = power(p, A + 1, t) * power(p, B, t)
    right = power(p, A, t) * power(p, B + 1, t)
    return coeff_dominated_by(left, right)


def degree_formula(parts: Sequence[int], r: int, t: int) -> tuple[int | None, int]:
    """(actual degree, predicted degree) of ``prod trunc(p^parts[i], r t)``.

    ``p`` is the uniform pgf on {0..r}; any pgf with that support has the same
    degree profile.  The prediction is ``r * (lam'(1) + ... + lam'(t))``.
    """
    pgf = Distribution.uniform(r).pgf()
    actual = row_product(parts, pgf, r * t).degree()
    conj = dual(parts)
    return actual, r * sum(conj[:t])


def degree_refutation(lam: Sequence[int], mu: Sequence[int], r: int) -> tuple[int, int] | None:
    """A (j, t) at which C(lam, mu, X) fails for every X with range {0..r}.

    When lam does not dominate mu (equal weights), some prefix of the dual of
    lam exceeds that of mu; the product for lam then has a positive
    coefficient at a degree where the one for mu vanishes.  None when lam
    dominates mu.
    """
    if dominates(lam, mu):
        return None
    dl, dm = dual(lam), dual(mu)
    for s in range(1, max(len(dl), len(dm)) + 1):
        left, right = sum(dl[:s]), sum(dm[:s])
        if left > right:
            return r * left, r * s
    return None


@dataclass
class FamilyReport:
    """Finite-family form of 'lam ⊵ mu iff C holds for every TN_2 X'."""

    n: int
    family: list[Distribution]
    forward_failures: list[tuple] = field(default_factory=list)
    unrefuted: list[tuple] = field(default_factory=list)

    @property
    def holds(self) -> bool:
        return not self.forward_failures and not self.unrefuted

    def to_json(self) -> dict:
        return {"n": self.n, "family": [X.label or X.to_json() for X in self.family],
                "holds": self.holds,
                "forward_failures": [{"lam": format_parts(l), "mu": format_parts(m), "X": x}
                                     for l, m, x in self.forward_failures],
                "unrefuted": [{"lam": format_parts(l), "mu": format_parts(m)} for l, m in self.unrefuted]}


def verify_finite_family(n: int, family: Sequence[Distribution]) -> FamilyReport:
    """Every dominating pair satisfies C for all members, every other pair is refuted by one.

    A refutation is either an exact failure of C for some family member or,
    failing that, the degree argument applied to a full-range member.
    """
    report = FamilyReport(n, list(family))
    parts = enumerate_partitions(n)
    full_range = [X for X in family if X.has_full_range() and X.max_value >= 1]
    for lam in parts:
        for mu in parts:
            if dominates(lam, mu):
                for X in family:
                    if not condition_C(lam, mu, X).holds:
                        report.forward_failures.append((lam, mu, X.label))
                continue
            refuted = any(not condition_C(lam, mu, X).holds for X in family)
            if not refuted:
                for X in full_range:
                    hit = degree_refutation(lam, mu, X.max_value)
                    if hit is not None:
                        j, t = hit
                        if event_probability(X, EventQuery(lam, j, t)) > event_probability(X, EventQuery(mu, j, t)):
                            refuted = True
                            break
            if not refuted:
                report.unrefuted.append((lam, mu))
    return report


# ---------------------------------------------------------------------------
# the {0,1,3} counterexample and its perturbation


GAP_LAM = (4, 2)
GAP_MU = (3, 3)
GAP_QUERY_TOTAL = 12
GAP_QUERY_CAP = 6


def uniform013() -> Distribution:
    return make_distribution("pmf:0=1/3,1=1/3,3=1/3")


def q_family(q) -> Distribution:
    """P(X=k) = q/3 for k in {0,1,3} and P(X=2) = 1 - q."""
    q = to_fraction(q)
    if not 0 <= q <= 1:
        raise DistributionError("q must lie in [0, 1]")
    return Distribution({0: q / 3, 1: q / 3, 2: 1 - q, 3: q / 3}, label=f"qfamily:{format_rational(q)}")


@dataclass
class QScanRow:
    q: Fraction
    p_lam: Fraction
    p_mu: Fraction

    @property
    def violated(self) -> bool:
        return self.p_lam > self.p_mu

    def to_json(self) -> dict:
        return {"q": format_rational(self.q), "P_lam": format_rational(self.p_lam),
                "P_mu": format_rational(self.p_mu), "violated": self.violated}


def scan_q_family(qs: Iterable) -> list[QScanRow]:
    rows = []
    for q in qs:
        X = q_family(q)
        rows.append(QScanRow(to_fraction(q),
                             event_probability(X, EventQuery(GAP_LAM, GAP_QUERY_TOTAL, GAP_QUERY_CAP)),
                             event_probability(X, EventQuery(GAP_MU, GAP_QUERY_TOTAL, GAP_QUERY_CAP))))
    return rows


def q_gap(q) -> Fraction:
    """P(E((4,2), X_q, 12, 6)) - P(E((3,3), X_q, 12, 6)); positive means C fails there."""
    row = scan_q_family([q])[0]
    return row.p_lam - row.p_mu


def bracket_q_threshold(lo=0, hi=1, steps: int = 40) -> tuple[Fraction, Fraction]:
    """Exact bisection for a sign change of :func:`q_gap` on [lo, hi].

    Needs ``q_gap(lo) <= 0 < q_gap(hi)``; returns an interval of width
    ``(hi - lo) / 2**steps`` containing the crossing.
    """
    lo, hi = to_fraction(lo), to_fraction(hi)
    if not (q_gap(lo) <= 0 < q_gap(hi)):
        raise ValueError("no sign change of the gap on the given interval")
    for _ in range(steps):
        mid = (lo + hi) / 2
        if q_gap(mid) > 0:
            hi = mid
        else:
            lo = mid
    return lo, hi


def q_threshold(rows: Sequence[QScanRow]) -> Fraction | None:
    """Smallest scanned q from which every larger scanned q shows the violation (exploratory)."""
    threshold = None
    for row in sorted(rows, key=lambda r: r.q, reverse=True):
        if not row.violated:
            break
        threshold = row.q
    return threshold


# ---------------------------------------------------------------------------
# Monte Carlo cross-check


MC_BLOCK = 1 << 16


@dataclass(frozen=True)
class MonteCarloResult:
    estimate: float
    stderr: float
    trials: int
    hits: int
    seed: int

    def to_json(self) -> dict:
        return {"estimate": self.estimate, "stderr": self.stderr, "trials": self.trials,
                "hits": self.hits, "seed": self.seed}


def _integer_thresholds(X: Distribution) -> tuple[np.ndarray, np.ndarray]:
    """Cumulative masses scaled to 53-bit integers, rounded up.

    A uniform integer U in [0, 2**53) falls in cell k iff
    ``U < ceil(F(k) * 2**53)``, which is exactly ``U / 2**53 < F(k)``.
    """
    scale = 1 << 53
    values, cuts = [], []
    acc = Fraction(0)
    mass = X.total_mass
    for k, m in X.pmf:
        acc += m / mass
        values.append(k)
        cuts.append(math.ceil(acc * scale))
    return np.array(values, dtype=np.int64), np.array(cuts, dtype=np.int64)


def monte_carlo(X: Distribution, q: EventQuery, trials: int, seed: int) -> MonteCarloResult:
    """Estimate P(E) by filling the diagram at random.

    Trials are split into fixed blocks of ``MC_BLOCK``; block ``i`` draws
    from the i-th child of ``numpy.random.SeedSequence(seed)`` (PCG64), so
    the estimate depends only on ``seed`` and ``trials``.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    shape = [x for x in q.shape if x > 0]
    cells = sum(shape)
    if cells == 0:
        hits = trials if q.total == 0 else 0
        return _mc_result(hits, trials, seed)
    if q.total > X.max_value * cells:
        return _mc_result(0, trials, seed)
    values, cuts = _integer_thresholds(X)
    row_starts = np.cumsum([0] + shape[:-1])
    blocks = -(-trials // MC_BLOCK)
    children = np.random.SeedSequence(seed).spawn(blocks)
    hits = 0
    for b, child in enumerate(children):
        size = min(MC_BLOCK, trials - b * MC_BLOCK)
        rng = np.random.Generator(np.random.PCG64(child))
        u = rng.integers(0, 1 << 53, size=(size, cells), dtype=np.int64)
        balls = values[np.searchsorted(cuts, u, side="right")]
        rows = np.add.reduceat(balls, row_starts, axis=1)
        ok = (rows.sum(axis=1) == q.total) & (rows.max(axis=1) <= q.cap)
        hits += int(ok.sum())
    return _mc_result(hits, trials, seed)


def _mc_result(hits: int, trials: int, seed: int) -> MonteCarloResult:
    est = hits / trials
    return MonteCarloResult(est, math.sqrt(est * (1 - est) / trials), trials, hits, seed)
