"""
Minors of Toeplitz and power matrices
=====================================

Small windows of T[i,j] = p_(j-i) and S[i,j] = [x^j] p(x)^i, checked
for non-negative minors with exact rational arithmetic.
"""

from fractions import Fraction

from domprob.tn import (MinorIndex, PowerMatrix, SequenceView, ToeplitzMatrix, check_tn,
                        complete_toeplitz_window, shape, tn2_via_char, transfer_identity_check)

p = SequenceView([Fraction(1, 4), Fraction(1, 2), Fraction(1, 4)])   # Bin(2, 1/2)
T, S = ToeplitzMatrix(p), PowerMatrix(p)
for i in range(4):
    print(" ".join(f"{str(S[i, j]):>6}" for j in range(7)))

# finite support: this window settles TN_2 for the whole infinite matrix
rows, cols = complete_toeplitz_window(3, 2)
print("T window", (rows, cols), check_tn(p, 2, rows, cols).holds)
print("S is TN_3 on rows<5, cols<15:", check_tn(p, 3, 5, 15, matrix="S").holds)

# log-concave is not enough once zeros sit inside the support
bad = SequenceView([1, 0, 0, 1, 1])
print("(1,0,0,1,1) log-concave:", shape(bad).log_concave)
rep = tn2_via_char(bad)
print("quadruple witness:", rep.witness, "-> minor", ToeplitzMatrix(bad).minor(rep.witness.index))

# a minor of S expands into minors of S one row up times minors of T
res = transfer_identity_check(SequenceView([1, -2, Fraction(1, 3)]), MinorIndex((1, 3), (2, 4)))
print("transfer identity:", res.lhs, "=", res.rhs, res.equal)
