"""
A distribution that breaks the ball-filling order
=================================================

Fill each cell of a diagram with an independent copy of X and ask for
total j with no row above t.  For X uniform on {0,1,2} the larger shape
in dominance is always at least as likely.  For X uniform on {0,1,3}
that fails.
"""

from fractions import Fraction

from domprob.probability import (Distribution, EventQuery, bracket_q_threshold, condition_C,
                                 check_hypotheses, event_probability, scan_q_family)

lam, mu = (4, 2), (3, 3)

# a well-behaved distribution: full range, log-concave pmf
U2 = Distribution.uniform(2)
print("uniform {0,1,2}:", check_hypotheses(U2) or "hypotheses met", condition_C(lam, mu, U2).holds)

# the gap at 2 is what goes wrong
Y = Distribution({0: Fraction(1, 3), 1: Fraction(1, 3), 3: Fraction(1, 3)})
print("uniform {0,1,3}:", check_hypotheses(Y))
q = EventQuery
print("P(E(4,2)) =", event_probability(Y, q(lam, 12, 6)))   # 10/729
print("P(E(3,3)) =", event_probability(Y, q(mu, 12, 6)))    # 9/729 = 1/81
print("witness (j, t, P_lam, P_mu):", condition_C(lam, mu, Y).witness)

# mixing a point mass at 2 back in: violations only show up for q near 1
for row in scan_q_family(Fraction(k, 100) for k in (50, 90, 95, 97, 98, 99)):
    print(f"q={float(row.q):.2f}  gap={float(row.p_lam - row.p_mu):+.3e}  violated={row.violated}")
lo, hi = bracket_q_threshold(Fraction(9, 10), 1, steps=30)
print(f"crossing lies in [{float(lo):.7f}, {float(hi):.7f}]")
