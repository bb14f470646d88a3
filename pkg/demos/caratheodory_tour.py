"""
The Caratheodory distance d_K: monotone growth in the truncation level, the
row-difference lower bound, and a Cauchy sequence that leaves the ball.
"""

from ncball import Spectral, compressed_shift_tuple, dk, dk_interval, random_tuple, row_norm
from ncball import OperatorTuple, omega

A = random_tuple(5, 2, 2, Spectral(0.6))
B = random_tuple(6, 2, 2, Spectral(0.4))

## d_K grows with the level
for m in range(1, 8):
    lo, hi = dk_interval(A, B, m)
    print(f"m={m}: dk={lo:.6f}  tail-corrected={hi:.6f}")

## Lower bound by the row difference
print("||A - B||:", row_norm(OperatorTuple(A.mats - B.mats)), "dk(level 1):", dk(A, B, 1))

## Scaling towards a boundary point
rho, c = 2.0, 0.5
X = compressed_shift_tuple(2).scaled(rho)
print("omega_rho(X):", omega(X, rho, 8, 1e-8))
for k in (1, 2, 4, 8, 16, 32):
    Y = X.scaled(c ** (1 / k))
    print(f"k={k:2}: dk(Y_k, X)={dk(Y, X, 8):.5f}  2||X||(1-c^(1/k))={2 * rho * (1 - c ** (1 / k)):.5f}")
