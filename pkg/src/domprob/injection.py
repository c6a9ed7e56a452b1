"""Search for dominance-compatible injections between composition pairs.

For A >= B >= 0 and a >= b >= 0 we look for an injection

    U(A, b) x U(B, a)  ->  U(A, a) x U(B, b)

(U(m, n) = compositions of n into m non-negative parts) that sends every
(lam1, mu1) to some (lam2, mu2) with concat(lam1, mu1) ⊵ concat(lam2, mu2).
Existence is decided by a maximum bipartite matching; when none saturates
the left side, a Hall violator certifies it.
"""

from __future__ import annotations

import time
from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

from ._parallel import ordered_map
from .partitions import concat, count_compositions, dominates, enumerate_compositions

INF = float("inf")

Pair = tuple[tuple[int, ...], tuple[int, ...]]


@lru_cache(maxsize=None)
def _shape_dominates(lhs: tuple[int, ...], rhs: tuple[int, ...]) -> bool:
    return dominates(lhs, rhs)


def _shape(pair: Pair) -> tuple[int, ...]:
    return tuple(sorted((x for x in concat(*pair) if x), reverse=True))


def compatible(left_elem: Pair, right_elem: Pair) -> bool:
    """concat(lam1, mu1) ⊵ concat(lam2, mu2), comparing rearrangements."""
    return _shape_dominates(_shape(left_elem), _shape(right_elem))


class HopcroftKarp:
    """Maximum matching in a bipartite graph given as left adjacency lists.

    Left vertices are ``0..len(adj)-1``; right vertices are ``0..n_right-1``.
    Adjacency lists may be shared between vertices.
    """

    def __init__(self, adj: Sequence[Sequence[int]], n_right: int):
        self.adj = adj
        self.n_left = len(adj)
        self.n_right = n_right
        self.match_left = [-1] * self.n_left
        self.match_right = [-1] * n_right
        self._dist = [INF] * self.n_left

    def run(self) -> int:
        self._greedy()
        while self._bfs():
            for u in range(self.n_left):
                if self.match_left[u] == -1:
                    self._dfs(u)
        return self.size

    @property
    def size(self) -> int:
        return sum(1 for v in self.match_left if v != -1)

    def _greedy(self) -> None:
        for u, nbrs in enumerate(self.adj):
            for v in nbrs:
                if self.match_right[v] == -1:
                    self.match_left[u] = v
                    self.match_right[v] = u
                    break

    def _bfs(self) -> bool:
        dist, match_left, match_right = self._dist, self.match_left, self.match_right
        queue = deque()
        for u in range(self.n_left):
            if match_left[u] == -1:
                dist[u] = 0
                queue.append(u)
            else:
                dist[u] = INF
        found = False
        while queue:
            u = queue.popleft()
            for v in self.adj[u]:
                w = match_right[v]
                if w == -1:
                    found = True
                elif dist[w] == INF:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        return found

    def _dfs(self, root: int) -> bool:
        # iterative layered DFS; ``pos`` remembers how far each adjacency list was scanned
        dist, match_left, match_right, adj = self._dist, self.match_left, self.match_right, self.adj
        stack = [root]
        pos = {root: 0}
        path_right: list[int] = []
        while stack:
            u = stack[-1]
            nbrs = adj[u]
            i = pos[u]
            advanced = False
            while i < len(nbrs):
                v = nbrs[i]
                i += 1
                w = match_right[v]
                if w == -1:
                    pos[u] = i
                    path_right.append(v)
                    # augment along the stack
                    for x, y in zip(stack, path_right):
                        match_left[x] = y
                        match_right[y] = x
                    return True
                if dist[w] == dist[u] + 1 and w not in pos:
                    pos[u] = i
                    path_right.append(v)
                    stack.append(w)
                    pos[w] = 0
                    advanced = True
                    break
            if not advanced:
                dist[u] = INF
                stack.pop()
                if path_right:
                    path_right.pop()
        return False

    def hall_violator(self) -> list[int]:
        """Left vertices reachable by alternating paths from unmatched left vertices.

        After a maximum matching every right vertex reached is matched, so the
        returned set S has |N(S)| = |S| - (number of unmatched left vertices).
        """
        seen_left = {u for u in range(self.n_left) if self.match_left[u] == -1}
        if not seen_left:
            return []
        seen_right = set()
        queue = deque(sorted(seen_left))
        while queue:
            u = queue.popleft()
            for v in self.adj[u]:
                if v in seen_right:
                    continue
                seen_right.add(v)
                w = self.match_right[v]
                if w != -1 and w not in seen_left:
                    seen_left.add(w)
                    queue.append(w)
        return sorted(seen_left)


@dataclass
class InjectionProblem:
    A: int
    a: int
    B: int
    b: int
    left: list[Pair] = field(default_factory=list)
    right: list[Pair] = field(default_factory=list)

    @classmethod
    def build(cls, A: int, a: int, B: int, b: int) -> "InjectionProblem":
        if not (A >= B >= 0 and a >= b >= 0):
            raise ValueError(f"need A >= B >= 0 and a >= b >= 0, got A={A} B={B} a={a} b={b}")
        left = [(x, y) for x in enumerate_compositions(A, b) for y in enumerate_compositions(B, a)]
        right = [(x, y) for x in enumerate_compositions(A, a) for y in enumerate_compositions(B, b)]
        return cls(A, a, B, b, left, right)

    def expected_sizes(self) -> tuple[int, int]:
        return (count_compositions(self.A, self.b) * count_compositions(self.B, self.a),
                count_compositions(self.A, self.a) * count_compositions(self.B, self.b))

    def adjacency(self) -> list[list[int]]:
        """Left adjacency lists, shared between left vertices of the same shape.

        Right vertices of equal shape are listed first (they make the greedy
        start close to the identity when the two sides overlap).
        """
        right_by_shape: dict[tuple[int, ...], list[int]] = {}
        for idx, pair in enumerate(self.right):
            right_by_shape.setdefault(_shape(pair), []).append(idx)
        cache: dict[tuple[int, ...], list[int]] = {}
        adj = []
        for pair in self.left:
            s = _shape(pair)
            nbrs = cache.get(s)
            if nbrs is None:
                nbrs = list(right_by_shape.get(s, []))
                for rs, idxs in right_by_shape.items():
                    if rs != s and _shape_dominates(s, rs):
                        nbrs.extend(idxs)
                cache[s] = nbrs
            adj.append(nbrs)
        return adj

    def neighborhood(self, subset: Sequence[int]) -> set[int]:
        """Right vertices compatible with some left vertex in ``subset`` (recomputed from scratch)."""
        return {v for u in subset for v, r in enumerate(self.right) if compatible(self.left[u], r)}


@dataclass
class InjectionResult:
    problem: InjectionProblem
    found: bool
    mapping: list[tuple[Pair, Pair]] = field(default_factory=list)
    violator: list[Pair] = field(default_factory=list)
    violator_neighborhood: int = 0
    matching_size: int = 0

    def verify(self) -> bool:
        """Re-check the certificate independently of the matching code."""
        if self.found:
            targets = [r for _, r in self.mapping]
            lefts = [l for l, _ in self.mapping]
            right = set(self.problem.right)
            return (len(set(targets)) == len(targets)
                    and sorted(lefts) == sorted(self.problem.left)
                    and all(r in right for r in targets)
                    and all(compatible(l, r) for l, r in self.mapping))
        idx = {pair: i for i, pair in enumerate(self.problem.left)}
        nbhd = self.problem.neighborhood([idx[pair] for pair in self.violator])
        return len(nbhd) < len(self.violator)

    def to_json(self, include_mapping: bool = True) -> dict:
        p = self.problem
        out = {"A": p.A, "B": p.B, "a": p.a, "b": p.b, "left_size": len(p.left),
               "right_size": len(p.right), "found": self.found, "matching_size": self.matching_size}
        if self.found and include_mapping:
            out["mapping"] = [[_pair_json(l), _pair_json(r)] for l, r in self.mapping]
        if not self.found:
            out["violator"] = [_pair_json(l) for l in self.violator]
            out["violator_neighborhood_size"] = self.violator_neighborhood
        return out


def _pair_json(pair: Pair) -> list[list[int]]:
    return [list(pair[0]), list(pair[1])]


def find_injection(A: int, a: int, B: int, b: int) -> InjectionResult:
    problem = InjectionProblem.build(A, a, B, b)
    hk = HopcroftKarp(problem.adjacency(), len(problem.right))
    size = hk.run()
    if size == len(problem.left):
        mapping = [(problem.left[u], problem.right[v]) for u, v in enumerate(hk.match_left)]
        return InjectionResult(problem, True, mapping=mapping, matching_size=size)
    violator = hk.hall_violator()
    nbhd = {v for u in violator for v in hk.adj[u]}
    return InjectionResult(problem, False, violator=[problem.left[u] for u in violator],
                           violator_neighborhood=len(nbhd), matching_size=size)


@dataclass
class SweepCell:
    result: InjectionResult
    verified: bool
    runtime: float

    def to_json(self, include_mapping: bool = False) -> dict:
        out = self.result.to_json(include_mapping=include_mapping)
        out["verified"] = self.verified
        out["runtime"] = round(self.runtime, 6)
        return out


@dataclass
class SweepReport:
    A_max: int
    a_max: int
    cells: list[SweepCell] = field(default_factory=list)

    @property
    def all_found(self) -> bool:
        return all(c.result.found and c.verified for c in self.cells)

    @property
    def counterexamples(self) -> list[SweepCell]:
        return [c for c in self.cells if not c.result.found]

    def to_json(self) -> dict:
        return {"A_max": self.A_max, "a_max": self.a_max, "cells": [c.to_json() for c in self.cells],
                "all_found": self.all_found,
                "counterexamples": [c.result.to_json() for c in self.counterexamples]}


def sweep_cells(A_max: int, a_max: int) -> list[tuple[int, int, int, int]]:
    """All (A, a, B, b) with A_max >= A >= B >= 0 and a_max >= a >= b >= 0."""
    return [(A, a, B, b)
            for A in range(A_max + 1) for B in range(A + 1)
            for a in range(a_max + 1) for b in range(a + 1)]


def run_cell(A: int, a: int, B: int, b: int) -> SweepCell:
    start = time.perf_counter()
    result = find_injection(A, a, B, b)
    verified = result.verify()
    left, right = result.problem.expected_sizes()
    if (left, right) != (len(result.problem.left), len(result.problem.right)):
        verified = False
    return SweepCell(result, verified, time.perf_counter() - start)


def _run_cell(cell: tuple[int, int, int, int]) -> SweepCell:
    return run_cell(*cell)


def sweep(A_max: int, a_max: int, progress=None, threads: int | None = 1) -> SweepReport:
    """Run :func:`find_injection` on every cell of the grid.

    ``progress(done, total, cell)`` is called after each cell when running
    single-threaded.
    """
    report = SweepReport(A_max, a_max)
    cells = sweep_cells(A_max, a_max)
    if threads is not None and threads > 1:
        report.cells = ordered_map(_run_cell, cells, threads)
        return report
    for n, cell in enumerate(cells):
        report.cells.append(_run_cell(cell))
        if progress is not None:
            progress(n + 1, len(cells), report.cells[-1])
    return report
