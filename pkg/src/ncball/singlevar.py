"""Closed forms for a single operator (``n = 1``) on the unit disc.

These evaluate the kernel ``K_rho(z, T)`` and the intertwiner norm directly
on a polar grid and serve as independent oracles for the Fock-space
machinery.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import DomainError, NotInBallError, PreconditionError
from .linalg import as_matrix, psd_tolerance

SINGULAR_RESOLVENT = 1e-12


@dataclass(frozen=True)
class DiscGrid:
    """Polar grid: ``radii`` evenly spaced radii in ``[0, r_max]`` times
    ``angles`` evenly spaced angles."""

    radii: int = 32
    angles: int = 64
    r_max: float = 0.995

    def points(self) -> np.ndarray:
        rs = np.linspace(0.0, self.r_max, self.radii)
        th = 2 * np.pi * np.arange(self.angles) / self.angles
        return (rs[:, None] * np.exp(1j * th)[None, :]).reshape(-1)

    def refined(self) -> "DiscGrid":
        return replace(self, radii=2 * self.radii, angles=2 * self.angles)


DEFAULT_GRID = DiscGrid()
CLOSED_DISC_GRID = DiscGrid(r_max=1.0)


def _square(T) -> np.ndarray:
    M = as_matrix(T)
    if M.shape[0] != M.shape[1]:
        raise DomainError(f"expected a square matrix, got {M.shape}")
    return M


def _batched_solve(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    s = np.linalg.svd(A, compute_uv=False)
    if np.any(s[:, -1] < SINGULAR_RESOLVENT * np.maximum(s[:, 0], 1.0)):
        raise PreconditionError("resolvent is singular on the grid")
    return np.linalg.solve(A, B)


def kernel_K_batch(zs: np.ndarray, T: np.ndarray, rho: float) -> np.ndarray:
    """``K_rho(z, T)`` for every ``z`` in ``zs``; shape ``(len(zs), d, d)``."""
    d = T.shape[0]
    eye = np.eye(d)
    zTs = zs[:, None, None] * T.conj().T[None]
    one_sided = np.matmul(zTs, _batched_solve(eye - zTs, np.broadcast_to(eye, zTs.shape)))
    K = one_sided + one_sided.conj().transpose(0, 2, 1) + rho * eye
    return 0.5 * (K + K.conj().transpose(0, 2, 1))


def kernel_K(z: complex, T, rho: float) -> np.ndarray:
    """``K_rho(z, T) = z T^*(I - z T^*)^{-1} + rho I + conj(z) T (I - conj(z) T)^{-1}``."""
    if not rho > 0:
        raise DomainError(f"rho must be positive, got {rho}")
    return kernel_K_batch(np.array([complex(z)]), _square(T), rho)[0]


@dataclass
class GridCertificate:
    rho: float
    c: float
    grid: DiscGrid
    min_eig: float
    worst_point: complex
    tau: float
    verdict: str

    @property
    def dominated(self) -> bool:
        return self.verdict == "dominated"

    def as_dict(self) -> dict:
        return {
            "rho": self.rho,
            "c": self.c,
            "grid": [self.grid.radii, self.grid.angles, self.grid.r_max],
            "min_eig": self.min_eig,
            "worst_point": [self.worst_point.real, self.worst_point.imag],
            "tau_psd": self.tau,
            "verdict": self.verdict,
        }


def dominates_1d(T, Tp, rho: float, c: float, grid: DiscGrid = DEFAULT_GRID) -> GridCertificate:
    """Check ``K_rho(z, T) <= c^2 K_rho(z, T')`` at every grid point."""
    T, Tp = _square(T), _square(Tp)
    if T.shape != Tp.shape:
        raise DomainError("matrices must share their dimension")
    if not c >= 1:
        raise DomainError(f"c must be >= 1, got {c}")
    zs = grid.points()
    H = c * c * kernel_K_batch(zs, Tp, rho) - kernel_K_batch(zs, T, rho)
    w = np.linalg.eigvalsh(H)
    mins = w[:, 0]
    worst = int(np.argmin(mins))
    tau = psd_tolerance(float(np.max(np.abs(w))))
    verdict = "refuted" if mins[worst] < -tau else "dominated"
    return GridCertificate(float(rho), float(c), grid, float(mins[worst]), complex(zs[worst]), tau, verdict)


def _sqrt_and_inverse(H: np.ndarray):
    w, V = np.linalg.eigh(H)
    tau = psd_tolerance(float(np.max(np.abs(w))))
    if np.min(w) <= tau:
        raise NotInBallError(f"defect not positive definite on the grid: {np.min(w):.3e}", np.min(w))
    root = np.sqrt(w)
    Vh = V.conj().transpose(0, 2, 1)
    return (V * root[:, None, :]) @ Vh, (V / root[:, None, :]) @ Vh


def _defect_adjoint(zs: np.ndarray, T: np.ndarray, rho: float) -> np.ndarray:
    """``Delta_{rho,T^*}(z)^2 = rho I + (1-rho)(z T + conj(z) T^*) + (rho-2) T^* T``."""
    d = T.shape[0]
    Ts = T.conj().T
    z = zs[:, None, None]
    return rho * np.eye(d) + (1 - rho) * (z * T + np.conj(z) * Ts) + (rho - 2) * (Ts @ T)


def l_norm_values(zs: np.ndarray, T: np.ndarray, Tp: np.ndarray, rho: float) -> np.ndarray:
    """``||Delta_{T'^*}(z)^{-1} (I - conj(z) T'^*)(I - conj(z) T^*)^{-1} Delta_{T^*}(z)||``."""
    d = T.shape[0]
    eye = np.eye(d)
    zb = np.conj(zs)[:, None, None]
    root_T, _ = _sqrt_and_inverse(_defect_adjoint(zs, T, rho))
    _, inv_root_Tp = _sqrt_and_inverse(_defect_adjoint(zs, Tp, rho))
    middle = _batched_solve(eye - zb * T.conj().T, root_T)
    M = inv_root_Tp @ (eye - zb * Tp.conj().T) @ middle
    return np.linalg.svd(M, compute_uv=False)[:, 0]


@dataclass
class LNormResult:
    value: float
    argmax: complex
    grid: DiscGrid
    refinements: int
    last_increment: float
    converged: bool

    def as_dict(self) -> dict:
        return {
            "value": self.value,
            "argmax": [self.argmax.real, self.argmax.imag],
            "grid": [self.grid.radii, self.grid.angles, self.grid.r_max],
            "refinements": self.refinements,
            "last_increment": self.last_increment,
            "converged": self.converged,
        }


def _polish(T, Tp, rho, z0: complex, grid: DiscGrid) -> tuple:
    """Local maximization in angle (and radius for interior points)."""
    r0, th0 = abs(z0), float(np.angle(z0))
    h = 2 * np.pi / grid.angles

    def f_angle(th, r=r0):
        return -float(l_norm_values(np.array([r * np.exp(1j * th)]), T, Tp, rho)[0])

    res = minimize_scalar(f_angle, bounds=(th0 - h, th0 + h), method="bounded",
                          options={"xatol": 1e-12})
    best_th, best = res.x, -res.fun
    best_r = r0
    if r0 < grid.r_max and r0 > 0:
        dr = grid.r_max / max(grid.radii - 1, 1)
        res_r = minimize_scalar(
            lambda r: f_angle(best_th, r),
            bounds=(max(0.0, r0 - dr), min(grid.r_max, r0 + dr)),
            method="bounded",
            options={"xatol": 1e-12},
        )
        if -res_r.fun > best:
            best, best_r = -res_r.fun, res_r.x
    return best, best_r * np.exp(1j * best_th)


def L_norm_1d(
    T, Tp, rho: float, grid: Optional[DiscGrid] = None, tol: float = 1e-5, max_doublings: int = 4
) -> LNormResult:
    """``||L_{T',T}||`` as the supremum of the closed-form norm expression.

    The best grid point is polished by a bounded scalar search, and the grid
    is refined by doubling until two successive polished maxima agree within
    ``tol`` or ``max_doublings`` is reached. The default grid includes the unit circle,
    which is legitimate under the precondition that both operators lie in
    the open ball (the supremum is attained on the boundary there).
    """
    T, Tp = _square(T), _square(Tp)
    if T.shape != Tp.shape:
        raise DomainError("matrices must share their dimension")
    if not rho > 0:
        raise DomainError(f"rho must be positive, got {rho}")
    grid = CLOSED_DISC_GRID if grid is None else grid

    def grid_max(g):
        zs = g.points()
        vals = l_norm_values(zs, T, Tp, rho)
        k = int(np.argmax(vals))
        polished, parg = _polish(T, Tp, rho, complex(zs[k]), g)
        if polished > vals[k]:
            return polished, parg
        return float(vals[k]), complex(zs[k])

    value, arg = grid_max(grid)
    increment, doublings, converged = math.inf, 0, False
    while doublings < max_doublings:
        grid = grid.refined()
        new_value, new_arg = grid_max(grid)
        increment = abs(new_value - value)
        doublings += 1
        if new_value >= value:
            value, arg = new_value, new_arg
        if increment <= tol:
            converged = True
            break
    return LNormResult(value, arg, grid, doublings, increment, converged)


def delta_1d(T, Tp, rho: float, grid: Optional[DiscGrid] = None) -> float:
    """``ln max(||L_{T',T}||, ||L_{T,T'}||)`` from the closed form."""
    a = L_norm_1d(T, Tp, rho, grid).value
    b = L_norm_1d(Tp, T, rho, grid).value
    return math.log(max(1.0, a, b))


def poisson_ratio_delta(a: complex, b: complex, samples: int = 10000) -> float:
    """Scalar ``rho = 1`` oracle: half the log of the extreme ratio of the
    Poisson kernels ``(1 - |a|^2)/|1 - e^{-i t} a|^2`` on a circle grid."""
    th = 2 * np.pi * np.arange(samples) / samples
    z = np.exp(1j * th)

    def poisson(x):
        return (1 - abs(x) ** 2) / np.abs(1 - np.conj(z) * x) ** 2

    ratio = poisson(a) / poisson(b)
    return 0.5 * math.log(max(ratio.max(), 1.0 / ratio.min()))
