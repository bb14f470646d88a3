"""
A walk through joint operator radii: the compressed-shift tuple, the row
norm at rho = 1, and how omega_rho falls as rho grows.

Run with ``python demos/radii_tour.py``.
"""

import numpy as np

from ncball import (
    InsideBall,
    compressed_shift_tuple,
    in_class,
    joint_spectral_radius,
    omega,
    omega_report,
    random_tuple,
    rho_min,
    row_norm,
)

## The compressed shifts on words of length <= 1
# Two 3x3 matrices, nilpotent of order two, with row norm one.
T = compressed_shift_tuple(2)
print("shape:", T.mats.shape)
print("row norm:", row_norm(T))
print("joint spectral radius:", joint_spectral_radius(T))

## omega_rho(T) = 1/rho for every rho
for rho in (0.5, 1.0, 2.0, 4.0):
    rep = omega_report(T, rho, m_max=8, tol=1e-8)
    print(f"rho={rho:4}: omega={rep.value:.8f}  1/rho={1 / rho:.8f}  bisection steps={rep.iterations}")

## Membership certificates are per level
# Slightly inside the class at rho = 2 passes every section; slightly outside
# fails at the first level.
for s in (0.99, 1.01):
    cert = in_class(T.scaled(2 * s), 2.0, 6)
    print(f"scale {s}: verdict={cert.verdict} min eigs={np.round(cert.min_eigs, 5)}")

## At rho = 1 the radius is the row norm
X = random_tuple(3, 2, 3, InsideBall(1.0, 0.4, 6))
print("omega_1:", omega(X, 1.0, 8, 1e-10), "row norm:", row_norm(X))

## rho -> omega_rho(X) decreases towards the spectral radius
for rho in (1, 2, 4, 16, 64):
    print(f"rho={rho:3}: omega={omega(X, rho, 8, 1e-8):.6f}")
print("spectral radius:", joint_spectral_radius(X))

## A finite level only sees necessary conditions
# The value at level m is a lower bound that creeps up with m; for rho > 1
# the spectral radius is a floor that low levels cannot lift.
for m in (2, 4, 8, 12):
    print(f"m={m:2}: omega_2={omega(X, 2.0, m, 1e-8):.6f}")

## The smallest class containing X
print("rho_min:", rho_min(X, 6, 1e-6))
