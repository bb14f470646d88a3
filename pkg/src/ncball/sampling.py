"""Deterministic random tuples, polynomials and contractive maps."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .errors import DomainError
from .fock import words_of_length
from .freemaps import NcPolyMap
from .optuple import OperatorTuple, joint_spectral_radius
from .radii import default_level, omega


@dataclass(frozen=True)
class InsideBall:
    """Rescale so that ``omega_rho`` at level ``m_max`` equals ``1 - margin``."""

    rho: float
    margin: float
    m_max: Optional[int] = None


@dataclass(frozen=True)
class Spectral:
    """Rescale so that the joint spectral radius equals ``r_target``."""

    r_target: float


Target = Union[InsideBall, Spectral]


def rng_for(seed) -> np.random.Generator:
    return np.random.default_rng(seed)


def ginibre_tuple(rng: np.random.Generator, n: int, d: int) -> OperatorTuple:
    z = rng.standard_normal((n, d, d)) + 1j * rng.standard_normal((n, d, d))
    return OperatorTuple(z / np.sqrt(2 * d))


def rescale(T: OperatorTuple, target: Target) -> OperatorTuple:
    """Scale ``T`` onto the target; exact by homogeneity of both radii."""
    if isinstance(target, InsideBall):
        if not 0 < target.margin < 1:
            raise DomainError("margin must lie in (0, 1)")
        m = default_level(T.n) if target.m_max is None else target.m_max
        w = omega(T, target.rho, m, tol=1e-9)
        return T.scaled((1 - target.margin) / w)
    if isinstance(target, Spectral):
        r = joint_spectral_radius(T)
        return T.scaled(target.r_target / r)
    raise DomainError(f"unknown target {target!r}")


def random_tuple(seed, n: int, d: int, target: Target) -> OperatorTuple:
    """Complex Ginibre tuple drawn from ``seed`` and rescaled onto ``target``."""
    rng = rng_for(seed)
    while True:
        T = ginibre_tuple(rng, n, d)
        if isinstance(target, Spectral) and joint_spectral_radius(T) == 0.0:
            continue
        return rescale(T, target)


def random_polynomial(rng: np.random.Generator, n: int, degree: int) -> dict:
    """Scalar noncommutative polynomial with Gaussian coefficients on all
    words of length ``<= degree``."""
    terms = {}
    for k in range(degree + 1):
        for w in words_of_length(n, k):
            terms[tuple(w)] = complex(rng.standard_normal(), rng.standard_normal())
    return terms


def random_contractive_map(
    rng: np.random.Generator,
    n: int,
    m_out: int,
    degrees=(1, 2),
    f0_norm: float = 0.0,
) -> NcPolyMap:
    """A map ``f = a + sum_k C_k W_k`` that is contractive by construction.

    ``W_k`` is the row of all words of length ``k``; each coefficient block
    ``C_k`` is a contraction scaled so that ``||a|| + sum ||C_k|| <= 1``.
    """
    if not 0 <= f0_norm < 1:
        raise DomainError("f0_norm must lie in [0, 1)")
    a = rng.standard_normal(m_out) + 1j * rng.standard_normal(m_out)
    a *= f0_norm / max(np.linalg.norm(a), 1e-300)
    weights = rng.uniform(0.2, 1.0, len(degrees))
    weights *= (1 - f0_norm) / weights.sum()
    comps = [{(): a[j]} if f0_norm > 0 else {} for j in range(m_out)]
    for k, wk in zip(degrees, weights):
        words = list(words_of_length(n, k))
        C = rng.standard_normal((m_out, len(words))) + 1j * rng.standard_normal((m_out, len(words)))
        C *= wk / np.linalg.norm(C, 2)
        for j in range(m_out):
            for col, w in enumerate(words):
                comps[j][tuple(w)] = comps[j].get(tuple(w), 0) + C[j, col]
    return NcPolyMap.from_terms(n, comps, "random contractive")
