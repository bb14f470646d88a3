"""
Harnack domination and the hyperbolic distance delta_rho between tuples of
the open ball. Shows the certificate, the distance, its level trace and its
behaviour in rho.
"""

import math

from ncball import InsideBall, OperatorTuple, compressed_shift_tuple, random_tuple
from ncball import harnack as hk

rho, m = 1.0, 6
A = random_tuple(11, 2, 2, InsideBall(rho, 0.5, 8))
B = random_tuple(12, 2, 2, InsideBall(rho, 0.6, 8))

## Distance and the constant it buys
d = hk.delta(A, B, rho, m)
print(f"delta_rho(A, B) at level {m}: {d:.6f}")
print("symmetric:", d == hk.delta(B, A, rho, m))
c = math.exp(d)
print("A dominated by B with c = e^delta (+1e-6):", hk.dominates(A, B, rho, c + 1e-6, m).label)
print("... and with c slightly smaller:", hk.dominates(A, B, rho, 0.98 * c, m).label)

## Level trace
for level, value in hk.delta_trace(A, B, rho, 8):
    print(f"  m={level}: {value:.6f}")

## Decreasing in rho
for r, v in hk.delta_rho_curve(A, B, (1.0, 2.0, 4.0, 8.0), m):
    print(f"  rho={r}: {v}")

## Everything in the open ball is equivalent to 0
Z = OperatorTuple.zeros(2, 2)
print("delta(A, 0):", hk.delta(A, Z, rho, m))

## The boundary is a different part
# rho * compressed shift has omega_rho = 1. Its kernel is singular, so it
# dominates 0 for no constant c.
X = compressed_shift_tuple(2).scaled(rho)
for c in (1.0, 10.0, 1e3):
    cert = hk.dominates(OperatorTuple.zeros(2, 3), X, rho, c, 3)
    print(f"c={c:g}: {cert.label}  min eig={cert.min_eigs[0]:.3g}")
