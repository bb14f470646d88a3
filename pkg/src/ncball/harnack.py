"""Harnack domination, the intertwiner norms ``Lambda_rho`` and the hyperbolic
metric ``delta_rho`` at finite truncation.

At level ``m`` the kernel ``P_rho(X, R)`` compressed to ``P_m`` factors as
``C_X^* C_X`` with ``C_X = Delta_X (I - R_X)^{-1}`` where ``Delta_X^2`` is
:func:`~ncball.optuple.level_defect`. Consequently ``||C_A C_B^{-1}||^2`` is
the smallest ``c^2`` with ``P_A <= c^2 P_B`` on ``P_m``; it increases with
``m`` towards the full-space value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np
import scipy.linalg as sla

from .errors import DomainError, NotInBallError
from .fock import fock_dim
from .linalg import psd_tolerance
from .optuple import (
    OperatorTuple,
    _check_same_shape,
    level_defect,
    reconstruction,
    toeplitz_section,
)
from .radii import default_level, nested_min_eigs


@dataclass
class DominationCertificate:
    """Per-level smallest eigenvalues of ``c^2 K_B - K_A``."""

    rho: float
    c: float
    levels: List[int]
    min_eigs: List[float]
    taus: List[float]
    verdict: str
    refuted_level: Optional[int] = None
    note: str = "dominated = necessary conditions passed; refutation is conclusive"

    @property
    def dominated(self) -> bool:
        return self.verdict == "dominated"

    @property
    def label(self) -> str:
        if self.verdict == "refuted":
            return f"refuted-at-level({self.refuted_level})"
        return self.verdict

    def as_dict(self) -> dict:
        return {
            "rho": self.rho,
            "c": self.c,
            "levels": list(self.levels),
            "min_eigs": list(self.min_eigs),
            "tau_psd": list(self.taus),
            "verdict": self.label,
            "note": self.note,
        }


def dominates(
    A: OperatorTuple,
    B: OperatorTuple,
    rho: float,
    c: float,
    m_max: Optional[int] = None,
) -> DominationCertificate:
    """Test ``K_{rho,A} <= c^2 K_{rho,B}`` on the finite sections ``m = 1..m_max``."""
    _check_same_shape(A, B)
    if not rho > 0:
        raise DomainError(f"rho must be positive, got {rho}")
    if not c >= 1:
        raise DomainError(f"c must be >= 1, got {c}")
    m_max = default_level(A.n) if m_max is None else m_max
    if m_max < 1:
        raise DomainError("m_max must be >= 1")
    H = c * c * toeplitz_section(B, rho, m_max).matrix - toeplitz_section(A, rho, m_max).matrix
    levels = list(range(1, m_max + 1))
    stats = nested_min_eigs(H, [A.d * fock_dim(A.n, m) for m in levels])
    mins = [s[0] for s in stats]
    taus = [psd_tolerance(s[1]) for s in stats]
    for m, lam, tau in zip(levels, mins, taus):
        if lam < -tau:
            return DominationCertificate(float(rho), float(c), levels, mins, taus, "refuted", m)
    return DominationCertificate(float(rho), float(c), levels, mins, taus, "dominated")


def resolvent_sup(A: OperatorTuple, m: int, grid: int = 200) -> float:
    """``max_{r in (0,1]} ||(I - r R_A^{(m)})^{-1}||`` over a uniform grid.

    For ``rho >= 1`` this constant squared is a domination constant of ``A``
    with respect to the zero tuple.
    """
    R = reconstruction(A, m).matrix
    eye = np.eye(R.shape[0])
    best = 1.0
    for r in np.linspace(1.0 / grid, 1.0, grid):
        inv = sla.solve_triangular(eye - r * R, eye, lower=True, unit_diagonal=True)
        best = max(best, float(sla.svdvals(inv)[0]))
    return best


class HarnackFactor:
    """A factor ``C_X`` with ``C_X^* C_X = P_rho(X, R)`` at level ``m``.

    ``C_X = L^* (I - R_X)^{-1}`` where ``L L^*`` is the Cholesky factorization
    of the level defect. It differs from ``Delta_X (I - R_X)^{-1}`` by a
    unitary on the left, which leaves every intertwiner norm unchanged.
    """

    def __init__(self, X: OperatorTuple, rho: float, m: int):
        if not rho > 0:
            raise DomainError(f"rho must be positive, got {rho}")
        self.tuple, self.rho, self.m = X, float(rho), m
        self._defect = level_defect(X, rho, m).matrix
        self._min_eig = None
        N = self._defect.shape[0]
        tau = psd_tolerance(float(np.abs(self._defect).sum(axis=1).max()))
        try:
            sla.cholesky(self._defect - tau * np.eye(N), lower=True)
        except np.linalg.LinAlgError:
            lam = self.defect_min_eig
            raise NotInBallError(
                f"defect is not positive definite at level {m}: min eigenvalue {lam:.3e}", lam
            ) from None
        self.L = sla.cholesky(self._defect, lower=True)
        self.I_minus_R = np.eye(N) - reconstruction(X, m).matrix

    @property
    def defect_min_eig(self) -> float:
        if self._min_eig is None:
            self._min_eig = float(sla.eigvalsh(self._defect, subset_by_index=[0, 0])[0])
        return self._min_eig

    @property
    def C(self) -> np.ndarray:
        eye = np.eye(self.L.shape[0], dtype=complex)
        resolvent = sla.solve_triangular(self.I_minus_R, eye, lower=True, unit_diagonal=True)
        return self.L.conj().T @ resolvent

    @property
    def C_inv(self) -> np.ndarray:
        eye = np.eye(self.L.shape[0], dtype=complex)
        return self.I_minus_R @ sla.solve_triangular(self.L.conj().T, eye, lower=False)


def harnack_factor(X: OperatorTuple, rho: float, m: int) -> HarnackFactor:
    return HarnackFactor(X, rho, m)


def intertwiner_norms(FA: HarnackFactor, FB: HarnackFactor) -> tuple:
    """``(||C_A C_B^{-1}||, ||C_B C_A^{-1}||)`` from one SVD of
    ``L_A^* (I - R_A)^{-1} (I - R_B) L_B^{-*}``."""
    right = sla.solve_triangular(FB.L, FB.I_minus_R.conj().T, lower=True).conj().T
    middle = sla.solve_triangular(FA.I_minus_R, right, lower=True, unit_diagonal=True)
    s = sla.svdvals(FA.L.conj().T @ middle)
    return float(s[0]), float(1.0 / s[-1])


def _canonical(FA: HarnackFactor, FB: HarnackFactor) -> tuple:
    """Order a pair so that both argument orders run the same arithmetic."""
    if FB.tuple.mats.tobytes() < FA.tuple.mats.tobytes():
        return FB, FA
    return FA, FB


def lambda_from_factors(FA: HarnackFactor, FB: HarnackFactor) -> float:
    """Symmetric in its arguments bit for bit; exactly 1 for identical tuples."""
    _check_same_shape(FA.tuple, FB.tuple)
    if FA is FB or np.array_equal(FA.tuple.mats, FB.tuple.mats):
        return 1.0
    return max(1.0, *intertwiner_norms(*_canonical(FA, FB)))


def _factors(A, B, rho, m):
    _check_same_shape(A, B)
    FA = HarnackFactor(A, rho, m)
    FB = FA if B is A else HarnackFactor(B, rho, m)
    return FA, FB


def lambda_rho(A: OperatorTuple, B: OperatorTuple, rho: float, m: int) -> float:
    """``Lambda_rho(A, B) = max(||C_A C_B^{-1}||, ||C_B C_A^{-1}||)`` at level ``m``."""
    return lambda_from_factors(*_factors(A, B, rho, m))


def delta(A: OperatorTuple, B: OperatorTuple, rho: float, m: int) -> float:
    """Hyperbolic distance ``delta_rho(A, B) = ln Lambda_rho(A, B)`` at level ``m``."""
    return math.log(lambda_rho(A, B, rho, m))


def delta_from_factors(FA: HarnackFactor, FB: HarnackFactor) -> float:
    return math.log(lambda_from_factors(FA, FB))


def delta_trace(A: OperatorTuple, B: OperatorTuple, rho: float, m: int) -> List[tuple]:
    """``(level, delta)`` at levels ``m-2, m-1, m`` (those that are ``>= 0``)."""
    return [(k, delta(A, B, rho, k)) for k in range(max(0, m - 2), m + 1)]


def delta_rho_curve(
    A: OperatorTuple, B: OperatorTuple, rhos: Sequence[float], m: int
) -> List[tuple]:
    """``(rho, delta_rho)`` over a grid; a failing ``rho`` yields its error message."""
    out = []
    for rho in rhos:
        try:
            out.append((float(rho), delta(A, B, rho, m)))
        except (NotInBallError, DomainError) as exc:
            out.append((float(rho), str(exc)))
    return out


def harnack_bounds(rho: float, r: float) -> tuple:
    """Lower and upper Harnack constants for ``u(rX)`` with ``X`` in ``C_rho``
    and ``u`` positive pluriharmonic with ``u(0) = I``."""
    if not 0 <= r < 1:
        raise DomainError("r must lie in [0, 1)")
    return (1 - r * (2 * rho - 1)) / (1 + r), (1 + r * (2 * rho - 1)) / (1 - r)


def kernel_min_eig(X: OperatorTuple, rho: float, m: int) -> float:
    """Smallest eigenvalue of ``P_rho(X, R)`` compressed to level ``m``."""
    from .optuple import kernel_P

    return float(sla.eigvalsh(kernel_P(X, rho, m).matrix, subset_by_index=[0, 0])[0])
