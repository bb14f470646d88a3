"""
A single operator: the closed-form kernel on the disc against the Fock
truncation, and how slowly the truncation closes the gap.
"""

import math

import numpy as np

from ncball import OperatorTuple
from ncball import harnack as hk
from ncball import singlevar as sv

## The kernel is the Poisson kernel for scalars
a, z = 0.4 + 0.2j, 0.5 - 0.3j
print("K(z, a):", sv.kernel_K(z, np.array([[a]]), 1.0)[0, 0].real)
print("Poisson:", (1 - abs(z * a) ** 2) / abs(1 - np.conj(z) * a) ** 2)

## Distance from 0 is the Poincare distance
a = 0.3
exact = 0.5 * math.log((1 + a) / (1 - a))
print("closed form:", sv.delta_1d(np.array([[a]]), np.array([[0.0]]), 1.0), "exact:", exact)

## Fock truncation converges like 1/m^2
prev = None
for m in (8, 16, 32, 64, 128):
    err = exact - hk.delta(OperatorTuple.scalars([a]), OperatorTuple.scalars([0.0]), 1.0, m)
    ratio = "" if prev is None else f"  ratio {prev / err:.2f}"
    print(f"m={m:3}: error {err:.3e}{ratio}")
    prev = err

## Matrices: a Jordan block against a scaled copy
J = np.array([[0.0, 0.0], [1.0, 0.0]])
res = sv.L_norm_1d(0.9 * J, 0.3 * J, 2.0)
print("||L|| =", res.value, "at", res.argmax, "converged:", res.converged)
print("delta_2:", sv.delta_1d(0.9 * J, 0.3 * J, 2.0))
