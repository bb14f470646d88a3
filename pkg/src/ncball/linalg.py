"""Dense complex-matrix spectral primitives.

Every positivity verdict in the package goes through :func:`psd_tolerance`,
so there is a single knob for "numerically nonnegative".
"""

from __future__ import annotations

import numpy as np
import scipy.linalg as sla

from .errors import DimensionError, NotPositiveError, SingularityError

PSD_RTOL = 1e-9
HERMITIAN_RTOL = 1e-8
SINGULAR_RTOL = 1e-12


def as_matrix(A) -> np.ndarray:
    """Return ``A`` as a 2-D complex array, rejecting empty input."""
    M = np.asarray(A, dtype=complex)
    if M.ndim != 2:
        raise DimensionError(f"expected a 2-D matrix, got shape {M.shape}")
    if M.size == 0:
        raise DimensionError("empty matrix")
    return M


def _square(A) -> np.ndarray:
    M = as_matrix(A)
    if M.shape[0] != M.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {M.shape}")
    return M


def psd_tolerance(norm: float) -> float:
    """Tolerance below zero still accepted as PSD for a matrix of norm ``norm``."""
    return PSD_RTOL * (1.0 + norm)


def hermitian_part(A) -> np.ndarray:
    """Symmetrize ``A``, raising if it is visibly non-Hermitian.

    Asymmetry beyond ``1e-8 * ||A||_F`` signals an assembly bug, so it raises
    instead of being averaged away.
    """
    M = _square(A)
    asym = np.linalg.norm(M - M.conj().T)
    scale = np.linalg.norm(M)
    if asym > HERMITIAN_RTOL * scale:
        raise DimensionError(
            f"matrix is not Hermitian: ||A - A*||_F = {asym:.3e} vs ||A||_F = {scale:.3e}"
        )
    return 0.5 * (M + M.conj().T)


def spectral_norm(A) -> float:
    """Largest singular value of ``A``."""
    M = as_matrix(A)
    return float(sla.svdvals(M, check_finite=True)[0])


def eigvalsh(A) -> np.ndarray:
    """Ascending eigenvalues of the Hermitian part of ``A``."""
    return sla.eigvalsh(hermitian_part(A))


def min_eig_hermitian(A) -> float:
    """Smallest eigenvalue of a Hermitian matrix (symmetrized first)."""
    H = hermitian_part(A)
    return float(sla.eigvalsh(H, subset_by_index=[0, 0])[0])


def max_eig_hermitian(A) -> float:
    """Largest eigenvalue of a Hermitian matrix (symmetrized first)."""
    H = hermitian_part(A)
    k = H.shape[0] - 1
    return float(sla.eigvalsh(H, subset_by_index=[k, k])[0])


def psd_sqrt(A) -> np.ndarray:
    """Principal square root of a PSD matrix.

    Eigenvalues in ``[-tau, 0)`` are clamped to zero; anything more negative
    raises :class:`NotPositiveError` carrying the offending eigenvalue.
    """
    H = hermitian_part(A)
    w, V = sla.eigh(H)
    tau = psd_tolerance(float(np.max(np.abs(w))))
    if w[0] < -tau:
        raise NotPositiveError(
            f"matrix is not positive semidefinite: min eigenvalue {w[0]:.3e} < -{tau:.1e}",
            w[0],
        )
    root = np.sqrt(np.clip(w, 0.0, None))
    B = (V * root) @ V.conj().T
    return 0.5 * (B + B.conj().T)


def inverse(A) -> np.ndarray:
    """Inverse of a square matrix that is not numerically singular."""
    M = _square(A)
    s = sla.svdvals(M)
    if s[-1] < SINGULAR_RTOL * s[0] or s[0] == 0.0:
        raise SingularityError(
            f"matrix is numerically singular: smallest singular value {s[-1]:.3e}", s[-1]
        )
    return sla.solve(M, np.eye(M.shape[0], dtype=complex))


def generalized_max_eig(A, B) -> float:
    """Largest ``lambda`` with ``A x = lambda B x`` for Hermitian ``A`` and PD ``B``.

    Equivalently the smallest ``c`` with ``A <= c B``.
    """
    HA = hermitian_part(A)
    HB = hermitian_part(B)
    k = HA.shape[0] - 1
    return float(sla.eigh(HA, HB, eigvals_only=True, subset_by_index=[k, k])[0])
