"""The Carathéodory-type metric ``d_K(A, B) = ||P_1(A, R) - P_1(B, R)||``.

At level ``m`` the compressed kernel difference gives a lower bound that
increases with ``m``. :func:`dk_tail_bound` bounds the norm carried by
words longer than ``m``.
"""

from __future__ import annotations

import math

import numpy as np
import scipy.linalg as sla

from .errors import PreconditionError
from .optuple import (
    OperatorTuple,
    _check_same_shape,
    cp_power_norms,
    joint_spectral_radius,
    kernel_P,
    resolvent,
)

TAIL_REMAINDER = 1e-12
TAIL_MAX_TERMS = 20000


def _require_spectral(*tuples: OperatorTuple) -> None:
    for T in tuples:
        r = joint_spectral_radius(T)
        if r >= 1:
            raise PreconditionError(f"joint spectral radius {r:.6g} >= 1")


def _hermitian_norm(H: np.ndarray) -> float:
    w = sla.eigvalsh(0.5 * (H + H.conj().T))
    return float(max(abs(w[0]), abs(w[-1])))


def dk(A: OperatorTuple, B: OperatorTuple, m: int) -> float:
    """``||P_1(A, R) - P_1(B, R)||`` compressed to level ``m``."""
    _check_same_shape(A, B)
    _require_spectral(A, B)
    if np.array_equal(A.mats, B.mats):
        return 0.0
    if B.mats.tobytes() < A.mats.tobytes():
        A, B = B, A
    return _hermitian_norm(kernel_P(A, 1.0, m).matrix - kernel_P(B, 1.0, m).matrix)


def resolvent_difference_bound(A: OperatorTuple, B: OperatorTuple, m: int) -> float:
    """``2 ||(I - R_A^{(m)})^{-1} - (I - R_B^{(m)})^{-1}||``, an upper bound for ``dk``."""
    _check_same_shape(A, B)
    return 2.0 * float(sla.svdvals(resolvent(A, m) - resolvent(B, m))[0])


def _word_tail(T: OperatorTuple, m: int) -> float:
    """Majorant of ``sum_{k>m} ||sum_{|w|=k} T_w T_w^*||^{1/2}``.

    The sequence ``a_k = ||Phi^k(I)||`` is submultiplicative, so once some
    ``q = a_L^{1/2} < 1`` the terms beyond a cut ``K`` are dominated blockwise
    by ``(s_{K+1} + ... + s_{K+L}) / (1 - q)`` with ``s_k = a_k^{1/2}``.
    """
    size = max(2 * m + 4, 16)
    while size <= TAIL_MAX_TERMS:
        s = np.sqrt(cp_power_norms(T, size))
        zeros = np.nonzero(s == 0.0)[0]
        if zeros.size:
            return float(np.sum(s[m + 1 : zeros[0]]))
        below = np.nonzero(s[1:] < 1.0)[0]
        if below.size:
            L = int(below[0]) + 1
            q = float(s[L])
            for K in range(m, size - L + 1):
                remainder = float(np.sum(s[K + 1 : K + L + 1])) / (1.0 - q)
                if remainder < TAIL_REMAINDER:
                    return float(np.sum(s[m + 1 : K + 1])) + remainder
        size *= 2
    return math.inf


def dk_tail_bound(A: OperatorTuple, B: OperatorTuple, m: int) -> float:
    """Bound on the norm of the words of length ``> m`` in ``P_1(A,R) - P_1(B,R)``.

    Uses ``||sum_{|w|=k} X_w (x) R_{rev(w)}^*|| = ||sum_{|w|=k} X_w X_w^*||^{1/2}``
    for each of the two one-sided series of each tuple.
    """
    _check_same_shape(A, B)
    _require_spectral(A, B)
    return 2.0 * (_word_tail(A, m) + _word_tail(B, m))


def dk_interval(A: OperatorTuple, B: OperatorTuple, m: int) -> tuple:
    """``(dk, dk + tail)`` at level ``m``.

    The upper end adds the mass of the omitted words; it is a heuristic
    envelope, since the level-``m`` value is a compression rather than a
    partial sum of the full kernel difference.
    """
    value = dk(A, B, m)
    return value, value + dk_tail_bound(A, B, m)
