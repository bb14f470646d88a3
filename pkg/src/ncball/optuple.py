"""Operator tuples and the level-m kernels built from them.

All level-m operators live on ``P_m (x) C^d`` in *word-major* order: the row
index of basis vector ``e_w (x) f_h`` is ``index(w) * d + h``. In this order
``I - R_X`` is block unit lower triangular and the pluriharmonic kernel at
``r = 1`` is exactly ``rho`` times the multi-Toeplitz finite section.
:meth:`LevelOperator.tensor_order` converts to the ``C^d (x) P_m`` layout.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
import scipy.linalg as sla

from .errors import DimensionError, DomainError
from .fock import (
    Word,
    creation_matrix,
    enumerate_words,
    extension_table,
    fock_dim,
    prefix_pairs,
)


@dataclass(frozen=True, eq=False)
class OperatorTuple:
    """``n`` complex ``d x d`` matrices ``(T_1, ..., T_n)``."""

    mats: np.ndarray
    label: str | None = None

    def __post_init__(self):
        arr = np.array(self.mats, dtype=complex)
        if arr.ndim != 3 or arr.shape[1] != arr.shape[2]:
            raise DimensionError(f"expected shape (n, d, d), got {arr.shape}")
        if arr.shape[0] < 1 or arr.shape[1] < 1:
            raise DimensionError("need n >= 1 and d >= 1")
        arr.setflags(write=False)
        object.__setattr__(self, "mats", arr)

    @classmethod
    def from_matrices(cls, mats: Iterable, label: str | None = None) -> "OperatorTuple":
        return cls(np.stack([np.atleast_2d(np.asarray(M, dtype=complex)) for M in mats]), label)

    @classmethod
    def scalars(cls, values: Sequence[complex], label: str | None = None) -> "OperatorTuple":
        return cls(np.asarray(values, dtype=complex).reshape(-1, 1, 1), label)

    @classmethod
    def zeros(cls, n: int, d: int) -> "OperatorTuple":
        return cls(np.zeros((n, d, d), dtype=complex))

    @property
    def n(self) -> int:
        return self.mats.shape[0]

    @property
    def d(self) -> int:
        return self.mats.shape[1]

    def __getitem__(self, i: int) -> np.ndarray:
        """Generator ``T_i`` with 1-based ``i``."""
        if not 1 <= i <= self.n:
            raise DomainError(f"generator index {i} outside 1..{self.n}")
        return self.mats[i - 1]

    def scaled(self, s: complex) -> "OperatorTuple":
        return OperatorTuple(self.mats * s, self.label)

    def padded(self, k: int) -> "OperatorTuple":
        """Append ``k`` zero matrices."""
        extra = np.zeros((k, self.d, self.d), dtype=complex)
        return OperatorTuple(np.concatenate([self.mats, extra]), self.label)

    def adjoint_row(self) -> np.ndarray:
        """The row operator ``[T_1 ... T_n]`` as a ``d x nd`` matrix."""
        return np.hstack(list(self.mats))

    def allclose(self, other: "OperatorTuple", atol: float = 0.0) -> bool:
        return self.mats.shape == other.mats.shape and np.allclose(
            self.mats, other.mats, rtol=0.0, atol=atol
        )


def _check_same_shape(A: OperatorTuple, B: OperatorTuple) -> None:
    if A.mats.shape != B.mats.shape:
        raise DomainError(f"tuple shapes differ: (n,d)={A.n, A.d} vs {B.n, B.d}")


def compressed_shift_tuple(n: int) -> OperatorTuple:
    """Compressions of the left creation operators to ``P_1``.

    Each ``T_i`` sends ``e_empty`` to ``e_i`` and kills everything else, so
    the row norm is 1 while every word of length 2 vanishes.
    """
    trunc = enumerate_words(n, 1)
    return OperatorTuple.from_matrices(
        [creation_matrix(trunc, "left", i) for i in range(1, n + 1)],
        label=f"compressed-shift n={n}",
    )


# word evaluation -----------------------------------------------------------


def eval_word(T: OperatorTuple, w: Sequence[int]) -> np.ndarray:
    """``T_w = T_{i1} T_{i2} ... T_{ik}``; the empty word gives the identity."""
    out = np.eye(T.d, dtype=complex)
    for letter in w:
        out = out @ T[letter]
    return out


def word_products(T: OperatorTuple, m: int) -> np.ndarray:
    """``T_w`` for every word of length ``<= m``, stacked in basis order.

    Built length by length with ``T_{w g_i} = T_w T_i``; within each length
    the multiplication order is fixed, so results are reproducible.
    """
    n, d = T.n, T.d
    out = np.empty((fock_dim(n, m), d, d), dtype=complex)
    out[0] = np.eye(d)
    prev = out[0:1]
    start = 1
    for _ in range(1, m + 1):
        cur = np.matmul(prev[:, None, :, :], T.mats[None, :, :, :]).reshape(-1, d, d)
        out[start : start + cur.shape[0]] = cur
        start += cur.shape[0]
        prev = cur
    return out


# scalar invariants -----------------------------------------------------------


def row_norm(T: OperatorTuple) -> float:
    """``||sum_i T_i T_i^*||^{1/2}``, the norm of the row operator."""
    return float(sla.svdvals(T.adjoint_row())[0])


def cp_map_matrix(T: OperatorTuple) -> np.ndarray:
    """``sum_i T_i (x) conj(T_i)``, the matrix of ``X -> sum_i T_i X T_i^*``
    acting on row-major vectorizations."""
    return np.einsum("iab,icd->acbd", T.mats, T.mats.conj()).reshape(T.d**2, T.d**2)


def joint_spectral_radius(T: OperatorTuple) -> float:
    """Square root of the spectral radius of the completely positive map
    ``X -> sum_i T_i X T_i^*``."""
    ev = sla.eigvals(cp_map_matrix(T))
    return float(np.sqrt(np.max(np.abs(ev))))


def cp_power_norms(T: OperatorTuple, kmax: int) -> np.ndarray:
    """``||Phi^k(I)||`` for ``k = 0..kmax`` where ``Phi(X) = sum_i T_i X T_i^*``.

    ``Phi^k(I) = sum_{|w|=k} T_w T_w^*``.
    """
    out = np.empty(kmax + 1)
    X = np.eye(T.d, dtype=complex)
    out[0] = 1.0
    for k in range(1, kmax + 1):
        X = np.einsum("iab,bc,idc->ad", T.mats, X, T.mats.conj())
        X = 0.5 * (X + X.conj().T)
        out[k] = float(np.max(np.abs(sla.eigvalsh(X))))
    return out


# level-m operators -------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class LevelOperator:
    """A matrix on ``P_m (x) C^d`` in word-major order."""

    n: int
    d: int
    m: int
    matrix: np.ndarray

    def __post_init__(self):
        expected = self.d * fock_dim(self.n, self.m)
        if self.matrix.shape != (expected, expected):
            raise DimensionError(f"level operator must be {expected}x{expected}")

    @property
    def words(self):
        return enumerate_words(self.n, self.m).words

    def block(self, row_word: Word, col_word: Word) -> np.ndarray:
        trunc = enumerate_words(self.n, self.m)
        i, j = trunc.index(row_word), trunc.index(col_word)
        d = self.d
        return self.matrix[i * d : (i + 1) * d, j * d : (j + 1) * d]

    def restrict(self, k: int) -> np.ndarray:
        """Top-left corner on ``P_k (x) C^d`` for ``k <= m``."""
        size = self.d * fock_dim(self.n, min(k, self.m))
        return self.matrix[:size, :size]

    def tensor_order(self) -> np.ndarray:
        """The same operator in ``C^d (x) P_m`` order (index ``h * dim + w``)."""
        N = fock_dim(self.n, self.m)
        d = self.d
        perm = (np.arange(N)[None, :] * d + np.arange(d)[:, None]).reshape(-1)
        return self.matrix[np.ix_(perm, perm)]


@dataclass(frozen=True, eq=False)
class ToeplitzSection(LevelOperator):
    """Finite section of the multi-Toeplitz kernel ``K_{rho,T}``."""

    rho: float = 1.0


def _check_rho(rho: float) -> None:
    if not rho > 0:
        raise DomainError(f"rho must be positive, got {rho}")


def _check_level(m: int) -> None:
    if m < 0:
        raise DomainError(f"level must be >= 0, got {m}")


def reconstruction(T: OperatorTuple, m: int) -> LevelOperator:
    """``R_X = sum_i X_i^* (x) R_i`` compressed to ``P_m``; nilpotent of order ``m+1``."""
    _check_level(m)
    n, d = T.n, T.d
    N = fock_dim(n, m)
    table = extension_table(n, m, "right")
    R = np.zeros((N, d, N, d), dtype=complex)
    for i in range(n):
        cols = np.nonzero(table[:, i] >= 0)[0]
        R[table[cols, i], :, cols, :] = T.mats[i].conj().T
    return LevelOperator(n, d, m, R.reshape(N * d, N * d))


def _below_top_mask(n: int, m: int, d: int) -> np.ndarray:
    lengths = enumerate_words(n, m).lengths
    return np.repeat(lengths < m, d)


def _gram_row(T: OperatorTuple) -> np.ndarray:
    return np.einsum("iab,icb->ac", T.mats, T.mats.conj())


def defect_delta2(T: OperatorTuple, rho: float, m: int) -> LevelOperator:
    """Compression of ``rho I + (1-rho)(R_X^* + R_X) + (rho-2) R_X^* R_X`` to level ``m``.

    Uses ``R_i^* R_j = delta_ij I`` on the full Fock space, so the quadratic
    term is ``(sum_i X_i X_i^*) (x) I``.
    """
    _check_rho(rho)
    R = reconstruction(T, m).matrix
    quad = np.kron(np.eye(fock_dim(T.n, m)), _gram_row(T))
    D = rho * np.eye(R.shape[0]) + (1 - rho) * (R + R.conj().T) + (rho - 2) * quad
    return LevelOperator(T.n, T.d, m, D)


def level_defect(T: OperatorTuple, rho: float, m: int) -> LevelOperator:
    """``rho I + (1-rho)(R + R^*) + (rho-2) R^* R`` with ``R = R_X^{(m)}``.

    This differs from :func:`defect_delta2` only on the top-length words,
    where ``R^{(m)*} R^{(m)}`` vanishes. It satisfies
    ``(I - R^*) kernel_P (I - R) = level_defect`` exactly, so it is the
    factor whose square root gives ``C^* C = kernel_P`` at level ``m``.
    """
    _check_rho(rho)
    R = reconstruction(T, m).matrix
    mask = _below_top_mask(T.n, m, T.d)
    quad = np.zeros_like(R)
    quad[np.ix_(mask, mask)] = np.kron(np.eye(int(mask.sum()) // T.d), _gram_row(T))
    D = rho * np.eye(R.shape[0]) + (1 - rho) * (R + R.conj().T) + (rho - 2) * quad
    return LevelOperator(T.n, T.d, m, 0.5 * (D + D.conj().T))


def _one_sided_blocks(T: OperatorTuple, m: int, r: float) -> np.ndarray:
    """``sum_{k>=1} r^k sum_{|a|=k} T_a (x) R_{rev(a)}^*`` as a 4-index block array."""
    n, d = T.n, T.d
    N = fock_dim(n, m)
    W = word_products(T, m)
    b, g, s, slen = prefix_pairs(n, m)
    blocks = np.zeros((N, N, d, d), dtype=complex)
    if b.size:
        blocks[b, g] = (float(r) ** slen)[:, None, None] * W[s]
    return blocks


def _assemble(blocks: np.ndarray, diag: float) -> np.ndarray:
    N, _, d, _ = blocks.shape
    upper = blocks.transpose(0, 2, 1, 3).reshape(N * d, N * d)
    out = upper + upper.conj().T
    out[np.diag_indices_from(out)] += diag
    return out


def kernel_P(T: OperatorTuple, rho: float, m: int, r: float = 1.0) -> LevelOperator:
    """Compression of the free pluriharmonic kernel ``P_rho(rT, R)`` to level ``m``.

    Block ``(b, b s)`` is ``r^{|s|} T_s`` for nonempty ``s``, the adjoint
    blocks mirror it and the diagonal is ``rho I``. Words longer than ``m``
    are annihilated by the compression, so the sum is finite.
    """
    _check_rho(rho)
    _check_level(m)
    if not 0.0 <= r <= 1.0:
        raise DomainError(f"scale r must lie in [0, 1], got {r}")
    return LevelOperator(T.n, T.d, m, _assemble(_one_sided_blocks(T, m, r), rho))


def toeplitz_section(T: OperatorTuple, rho: float, m: int) -> ToeplitzSection:
    """Finite section of ``K_{rho,T}`` over words of length ``<= m``.

    Block ``(a, a s)`` is ``T_s / rho``, block ``(a s, a)`` its adjoint, the
    diagonal blocks are ``I`` and all other blocks vanish.
    """
    _check_rho(rho)
    _check_level(m)
    blocks = _one_sided_blocks(T, m, 1.0) / rho
    return ToeplitzSection(T.n, T.d, m, _assemble(blocks, 1.0), rho=float(rho))


def identity_minus(R: LevelOperator) -> np.ndarray:
    return np.eye(R.matrix.shape[0]) - R.matrix


def resolvent(T: OperatorTuple, m: int, r: float = 1.0) -> np.ndarray:
    """``(I - r R_X^{(m)})^{-1}`` via forward substitution.

    In word-major order ``I - r R`` is unit lower triangular.
    """
    R = reconstruction(T, m).matrix
    A = np.eye(R.shape[0]) - r * R
    return sla.solve_triangular(A, np.eye(R.shape[0], dtype=complex), lower=True, unit_diagonal=True)
