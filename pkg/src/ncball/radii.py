"""Finite-level membership certificates for the classes ``C_rho`` and the
joint operator radius ``omega_rho`` by bisection.

Two equivalent level-``m`` tests are implemented:

* the dense one forms the multi-Toeplitz finite section and reports its
  smallest eigenvalue per level (this is what certificates record);
* the fast one is used inside bisections. In word-major order the section is
  congruent, through the invertible ``I - R_X``, to the defect
  ``rho I + (1-rho)(R + R^*) + (rho-2) R^* R``. That matrix is block
  tridiagonal on the tree of words, and all nodes of equal depth carry equal
  blocks, so its positivity is decided by a Schur-complement recursion over
  depth costing ``O(m n d^3)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Literal, Optional

import numpy as np
import scipy.linalg as sla

from .errors import DomainError, PreconditionError
from .fock import fock_dim
from .linalg import psd_tolerance
from .optuple import (
    OperatorTuple,
    joint_spectral_radius,
    kernel_P,
    row_norm,
    toeplitz_section,
)

Criterion = Literal["toeplitz-section", "kernel-grid"]

SPECTRAL_SLACK = 1e-9
KERNEL_GRID = (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.99)
MAX_SECTION_DIM = 2100


def default_level(n: int) -> int:
    """Default truncation level keeping sections at desk scale."""
    if n == 1:
        return 64
    if n == 2:
        return 8
    if n == 3:
        return 5
    m = 1
    while fock_dim(n, m + 1) <= 600:
        m += 1
    return m


@dataclass
class PsdCertificate:
    """Per-level smallest eigenvalues of a kernel positivity test.

    ``verdict`` is ``"member"`` when every checked level passed (a
    necessary-conditions verdict at finite depth), ``"rejected"`` when a level
    failed or the spectral radius exceeds one, ``"inconclusive"`` when nothing
    could be checked.
    """

    criterion: str
    rho: float
    levels: List[int]
    min_eigs: List[float]
    taus: List[float]
    verdict: str
    rejected_level: Optional[int] = None
    spectral_radius: float = 0.0
    note: str = "necessary conditions at finite truncation; rejection is conclusive"

    @property
    def is_member(self) -> bool:
        return self.verdict == "member"

    @property
    def label(self) -> str:
        if self.verdict == "rejected" and self.rejected_level is not None:
            return f"rejected-at-level({self.rejected_level})"
        if self.verdict == "rejected":
            return "rejected-spectral-radius"
        return self.verdict

    def as_dict(self) -> dict:
        return {
            "criterion": self.criterion,
            "rho": self.rho,
            "levels": list(self.levels),
            "min_eigs": list(self.min_eigs),
            "tau_psd": list(self.taus),
            "verdict": self.label,
            "spectral_radius": self.spectral_radius,
            "note": self.note,
        }


def _check_rho(rho: float) -> None:
    if not rho > 0:
        raise DomainError(f"rho must be positive, got {rho}")


def nested_min_eigs(H: np.ndarray, sizes: List[int]) -> List[tuple]:
    """Smallest eigenvalue and spectral-norm bound of leading principal blocks."""
    out = []
    for s in sizes:
        block = H[:s, :s]
        block = 0.5 * (block + block.conj().T)
        w = sla.eigvalsh(block)
        out.append((float(w[0]), float(max(abs(w[0]), abs(w[-1])))))
    return out


def _verdict(criterion, rho, levels, mins, norms, r_spec) -> PsdCertificate:
    taus = [psd_tolerance(nm) for nm in norms]
    for m, lam, tau in zip(levels, mins, taus):
        if lam < -tau:
            return PsdCertificate(criterion, rho, levels, mins, taus, "rejected", m, r_spec)
    if r_spec > 1 + SPECTRAL_SLACK:
        return PsdCertificate(criterion, rho, levels, mins, taus, "rejected", None, r_spec)
    if not levels:
        return PsdCertificate(criterion, rho, levels, mins, taus, "inconclusive", None, r_spec)
    return PsdCertificate(criterion, rho, levels, mins, taus, "member", None, r_spec)


def in_class(
    T: OperatorTuple,
    rho: float,
    m_max: Optional[int] = None,
    criterion: Criterion = "toeplitz-section",
) -> PsdCertificate:
    """Check positivity of the finite sections of ``K_{rho,T}`` for ``m = 1..m_max``.

    Sections at lower levels are leading principal blocks of the top one, so
    a single assembly serves every level. With ``criterion="kernel-grid"``
    the pluriharmonic kernel is tested at the scales in :data:`KERNEL_GRID`
    instead.
    """
    _check_rho(rho)
    m_max = default_level(T.n) if m_max is None else m_max
    if m_max < 1:
        raise DomainError("m_max must be >= 1")
    r_spec = joint_spectral_radius(T)
    levels = list(range(1, m_max + 1))
    sizes = [T.d * fock_dim(T.n, m) for m in levels]
    if criterion == "toeplitz-section":
        H = toeplitz_section(T, rho, m_max).matrix
        stats = nested_min_eigs(H, sizes)
        mins = [s[0] for s in stats]
        norms = [s[1] for s in stats]
    elif criterion == "kernel-grid":
        mins = [math.inf] * len(levels)
        norms = [0.0] * len(levels)
        for r in KERNEL_GRID:
            H = kernel_P(T, rho, m_max, r).matrix
            for j, (lam, nm) in enumerate(nested_min_eigs(H, sizes)):
                mins[j] = min(mins[j], lam)
                norms[j] = max(norms[j], nm)
    else:
        raise DomainError(f"unknown criterion {criterion!r}")
    return _verdict(criterion, float(rho), levels, mins, norms, r_spec)


# fast predicate -----------------------------------------------------------------


def defect_tree_pivots(T: OperatorTuple, rho: float, m: int, shift: float = 0.0):
    """Schur pivots of the level-``m`` defect, from the deepest words up.

    Yields ``(depth, pivot)`` where the defect plus ``shift * I`` is positive
    definite iff every pivot is. Stops early (yielding ``None``) at the
    first pivot that fails a Cholesky factorization.
    """
    d = T.d
    eye = np.eye(d)
    gram = np.einsum("iab,icb->ac", T.mats, T.mats.conj())
    inner = (rho + shift) * eye + (rho - 2) * gram
    coupling = (1 - rho) ** 2
    S = (rho + shift) * eye
    factor = None
    for depth in range(m, -1, -1):
        if depth < m:
            S = inner.copy()
            if coupling:
                for Xi in T.mats:
                    S -= coupling * (Xi @ sla.cho_solve(factor, Xi.conj().T))
            S = 0.5 * (S + S.conj().T)
        try:
            factor = sla.cho_factor(S, lower=True)
        except (np.linalg.LinAlgError, sla.LinAlgError):
            yield depth, None
            return
        yield depth, S


def member_fast(T: OperatorTuple, rho: float, m: int, tau_scale: float = 1.0) -> bool:
    """Level-``m`` membership predicate via the tree recursion.

    Equivalent to positivity of the finite section (up to the tolerance
    ``tau_scale * 1e-9 * (1 + rho)`` added to the defect) together with
    ``r(T) <= 1 + 1e-9``.
    """
    if joint_spectral_radius(T) > 1 + SPECTRAL_SLACK:
        return False
    if not np.any(T.mats):
        return True
    shift = tau_scale * psd_tolerance(rho)
    for _, pivot in defect_tree_pivots(T, rho, m, shift):
        if pivot is None:
            return False
    return True


# omega -----------------------------------------------------------------


@dataclass
class OmegaResult:
    value: float
    rho: float
    m_max: int
    tol: float
    bracket: tuple
    iterations: int
    flagged: bool = False
    tau_scale: float = 1.0
    probes: List[tuple] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "omega": self.value,
            "rho": self.rho,
            "level": self.m_max,
            "tol": self.tol,
            "bracket": list(self.bracket),
            "iterations": self.iterations,
            "non_monotone_flag": self.flagged,
            "tau_scale": self.tau_scale,
            "tau_psd": psd_tolerance(self.rho) * self.tau_scale,
        }


def _monotone(flags: List[bool]) -> bool:
    """Once the predicate holds it must keep holding as ``t`` grows."""
    seen = False
    for f in flags:
        if seen and not f:
            return False
        seen = seen or f
    return True


def _bisect(pred, lo: float, hi: float, tol: float):
    it = 0
    while hi - lo >= tol:
        mid = 0.5 * (lo + hi)
        if pred(mid):
            hi = mid
        else:
            lo = mid
        it += 1
    return 0.5 * (lo + hi), it


def omega_report(
    T: OperatorTuple, rho: float, m_max: Optional[int] = None, tol: float = 1e-6
) -> OmegaResult:
    """Bisect ``t`` on the level-``m_max`` membership of ``T / t``."""
    _check_rho(rho)
    if not tol > 0:
        raise DomainError("tol must be positive")
    m_max = default_level(T.n) if m_max is None else m_max
    if not np.any(T.mats):
        return OmegaResult(0.0, rho, m_max, tol, (0.0, 0.0), 0)
    lo = joint_spectral_radius(T)
    hi = row_norm(T) / min(rho, 1.0) + 1.0

    def predicate(scale):
        return lambda t: member_fast(T.scaled(1.0 / t), rho, m_max, scale)

    pred = predicate(1.0)
    while not pred(hi):
        hi *= 2.0
        if hi > 1e12:
            raise PreconditionError("no finite scaling brings the tuple into the class")
    if lo > 0 and pred(lo):
        return OmegaResult(lo, rho, m_max, tol, (lo, lo), 0)

    probe_lo = max(lo, hi * 1e-6)
    ts = np.geomspace(probe_lo, hi, 8)
    flags = [pred(t) for t in ts]
    probes = list(zip(ts.tolist(), flags))
    scale, flagged = 1.0, False
    if not _monotone(flags):
        scale = 10.0
        pred = predicate(scale)
        flags = [pred(t) for t in ts]
        probes += list(zip(ts.tolist(), flags))
        if not _monotone(flags):
            flagged = True
            scan = np.geomspace(probe_lo, hi, 64)
            scan_flags = [pred(t) for t in scan]
            false_idx = [i for i, f in enumerate(scan_flags) if not f]
            last_false = max(false_idx) if false_idx else -1
            lo = scan[last_false] if last_false >= 0 else lo
            hi = scan[last_false + 1]
    value, it = _bisect(pred, lo, hi, tol)
    return OmegaResult(value, rho, m_max, tol, (lo, hi), it, flagged, scale, probes)


def omega(T: OperatorTuple, rho: float, m_max: Optional[int] = None, tol: float = 1e-6) -> float:
    """Joint operator radius ``omega_rho(T)`` at truncation level ``m_max``."""
    return omega_report(T, rho, m_max, tol).value


def rho_min(T: OperatorTuple, m_max: Optional[int] = None, tol: float = 1e-6) -> float:
    """Smallest ``rho`` whose level-``m_max`` class contains ``T``.

    Uses that the level-``m`` classes grow with ``rho``. Requires
    ``r(T) < 1``.
    """
    if not tol > 0:
        raise DomainError("tol must be positive")
    m_max = default_level(T.n) if m_max is None else m_max
    r_spec = joint_spectral_radius(T)
    if r_spec >= 1:
        raise PreconditionError(f"joint spectral radius {r_spec:.6g} >= 1")
    if not np.any(T.mats):
        return 0.0
    lo = row_norm(T)

    def pred(rho):
        return member_fast(T, rho, m_max)

    if pred(lo):
        return lo
    hi = max(1.0, 2.0 * lo)
    while not pred(hi):
        lo, hi = hi, 2.0 * hi
        if hi > 1e12:
            raise PreconditionError("no finite rho admits the tuple at this level")
    return _bisect(pred, lo, hi, tol)[0]
