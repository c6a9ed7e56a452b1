"""
Dominance order and conjugate partitions
========================================

Walk the cover relations of the partitions of 6 and watch conjugation
turn the Hasse diagram upside down.
"""

from domprob import partitions as P

# the partitions of 6, largest first in lexicographic order
parts = P.enumerate_partitions(6)
print(len(parts), "partitions of 6")

# (3,1,1,1) and (2,2,2) are incomparable: neither prefix-sum vector wins
print(P.dominates((3, 1, 1, 1), (2, 2, 2)), P.dominates((2, 2, 2), (3, 1, 1, 1)))

# each cover moves a single unit from a lower row to a higher one
for upper, lower in P.cover_pairs(6):
    print(f"{P.format_parts(upper):>12} covers {P.format_parts(lower)}")

# conjugation reverses every comparison
for upper, lower in P.cover_pairs(6):
    assert P.covers(P.dual(lower), P.dual(upper))
print("conjugate of (4,2):", P.format_parts(P.dual((4, 2))))
