import random
from fractions import Fraction
from math import comb

import networkx as nx
import pytest

from corpus import positive_log_concave
from domprob.injection import (HopcroftKarp, InjectionProblem, compatible, find_injection, sweep,
                               sweep_cells)
from domprob.tn import SequenceView, power_pair_inequality


def test_compatible_examples():
    assert compatible(((0,), (1,)), ((1,), (0,)))
    assert compatible(((0, 0), (2,)), ((1, 1), (0,)))
    assert not compatible(((1, 1), (0,)), ((0, 0), (2,)))
    pair = ((2, 0, 1), (3,))
    assert compatible(pair, pair)


def _random_graph(rng, n_left, n_right, density):
    return [sorted(v for v in range(n_right) if rng.random() < density) for _ in range(n_left)]


@pytest.mark.parametrize("seed", range(40))
def test_hopcroft_karp_against_networkx(seed):
    rng = random.Random(seed)
    n_left, n_right = rng.randint(1, 25), rng.randint(1, 25)
    adj = _random_graph(rng, n_left, n_right, rng.choice([0.05, 0.1, 0.2, 0.4]))
    hk = HopcroftKarp(adj, n_right)
    size = hk.run()

    g = nx.Graph()
    left = [("L", u) for u in range(n_left)]
    g.add_nodes_from(left, bipartite=0)
    g.add_nodes_from((("R", v) for v in range(n_right)), bipartite=1)
    g.add_edges_from((("L", u), ("R", v)) for u, nbrs in enumerate(adj) for v in nbrs)
    expected = len(nx.bipartite.hopcroft_karp_matching(g, top_nodes=left)) // 2
    assert size == expected

    # matching is valid
    used = [v for v in hk.match_left if v != -1]
    assert len(used) == len(set(used))
    assert all(v in adj[u] for u, v in enumerate(hk.match_left) if v != -1)

    violator = hk.hall_violator()
    if size < n_left:
        nbhd = {v for u in violator for v in adj[u]}
        assert len(nbhd) < len(violator)
        assert len(violator) - len(nbhd) == n_left - size
    else:
        assert violator == []


def test_greedy_trap_is_repaired():
    # greedy matches 0-0 first; the augmenting phase must reroute it
    adj = [[0, 1], [0]]
    hk = HopcroftKarp(adj, 2)
    assert hk.run() == 2
    assert hk.match_left == [1, 0]


def test_find_injection_identity_cases():
    for A, a in [(1, 1), (2, 2), (3, 1), (2, 3)]:
        res = find_injection(A, a, A, a)
        assert res.found and res.verify()
        assert len(res.problem.left) == len(res.problem.right)


def test_find_injection_degenerate():
    for A, a, B, b in [(1, 1, 0, 0), (1, 1, 1, 0), (1, 0, 0, 0), (0, 0, 0, 0), (2, 1, 0, 0)]:
        res = find_injection(A, a, B, b)
        assert res.found and res.verify()


def test_find_injection_main_example():
    res = find_injection(4, 5, 2, 3)
    assert res.found and res.verify()
    assert len(res.mapping) == len(res.problem.left) == comb(3 + 3, 3) * comb(5 + 1, 1)


def test_find_injection_rejects_bad_parameters():
    with pytest.raises(ValueError):
        find_injection(1, 2, 2, 1)
    with pytest.raises(ValueError):
        find_injection(2, 1, 1, 2)


def test_verify_catches_broken_mapping():
    res = find_injection(2, 2, 1, 1)
    assert res.verify()
    (l0, r0), (l1, r1) = res.mapping[0], res.mapping[1]
    res.mapping[1] = (l1, r0)
    assert not res.verify()


def test_hall_violator_on_hand_built_problem():
    # neither left pair is compatible with the lone right pair, so the violator has an empty neighbourhood
    prob = InjectionProblem(1, 2, 2, 0, left=[((2,), (0, 0)), ((1,), (1, 0))], right=[((0,), (0, 0))])
    hk = HopcroftKarp(prob.adjacency(), len(prob.right))
    assert hk.run() < len(prob.left)
    violator = hk.hall_violator()
    assert len(prob.neighborhood(violator)) < len(violator)


def test_sizes_match_binomials():
    for A, a, B, b in sweep_cells(3, 4):
        prob = InjectionProblem.build(A, a, B, b)
        left, right = prob.expected_sizes()
        assert (len(prob.left), len(prob.right)) == (left, right)
        assert left <= right


def test_sweep_small():
    rep = sweep(2, 2)
    assert rep.all_found
    assert len(rep.cells) == len(sweep_cells(2, 2)) == 6 * 6
    for cell in rep.cells:
        p = cell.result.problem
        if p.a == p.b:
            assert cell.result.found


def test_sweep_parallel_matches_serial():
    a = [c.result.to_json() for c in sweep(2, 3).cells]
    b = [c.result.to_json() for c in sweep(2, 3, threads=2).cells]
    assert a == b


def test_injections_imply_power_inequality():
    # each found injection gives (p^A)_b (p^B)_a <= (p^A)_a (p^B)_b for TN_2 p
    rng = random.Random(8)
    seqs = [SequenceView(positive_log_concave(rng, 4)) for _ in range(6)]
    seqs.append(SequenceView([Fraction(1, 4), Fraction(1, 2), Fraction(1, 4)]))
    for A, a, B, b in sweep_cells(3, 4):
        assert find_injection(A, a, B, b).found
        for p in seqs:
            left, right = power_pair_inequality(p, A, a, B, b)
            assert left <= right
