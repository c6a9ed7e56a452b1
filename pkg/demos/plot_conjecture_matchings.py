"""
Matchings behind a power inequality
===================================

(p^A)_b (p^B)_a <= (p^A)_a (p^B)_b should follow from an injection
between pairs of compositions that respects dominance.  Search for one
with Hopcroft-Karp and look at what a failure would have looked like.
"""

from domprob.injection import HopcroftKarp, InjectionProblem, find_injection, sweep

res = find_injection(4, 5, 2, 3)
print("sizes:", len(res.problem.left), "->", len(res.problem.right), "found:", res.found, res.verify())
for left, right in res.mapping[:5]:
    print(left, "->", right)

# the whole desk-scale grid
rep = sweep(3, 4)
print(len(rep.cells), "cells, all found:", rep.all_found)

# a toy problem without a left-saturating matching: Hall's condition fails
toy = InjectionProblem(1, 2, 2, 0, left=[((2,), (0, 0)), ((1,), (1, 0))], right=[((0,), (0, 0))])
hk = HopcroftKarp(toy.adjacency(), len(toy.right))
print("matched", hk.run(), "of", len(toy.left))
S = hk.hall_violator()
print("violator", S, "neighbourhood", toy.neighborhood(S))
