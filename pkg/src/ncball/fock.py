"""Free-semigroup words and truncated creation operators on the full Fock space.

A word is a tuple of generator indices in ``1..n``; the empty tuple is the
identity. ``P_m`` is the span of basis vectors ``e_w`` with ``len(w) <= m``,
ordered length-major and lexicographically within each length.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Literal, Sequence, Tuple

import numpy as np

from .errors import DomainError

Word = Tuple[int, ...]
Side = Literal["left", "right"]

EMPTY: Word = ()


def reverse(w: Sequence[int]) -> Word:
    """Reverse of a word, ``g_{i1}...g_{ik} -> g_{ik}...g_{i1}``."""
    return tuple(reversed(tuple(w)))


def fock_dim(n: int, m: int) -> int:
    """Number of words of length at most ``m`` on ``n`` letters."""
    if n < 1:
        raise DomainError(f"generator count must be >= 1, got {n}")
    if m < 0:
        raise DomainError(f"level must be >= 0, got {m}")
    if n == 1:
        return m + 1
    return (n ** (m + 1) - 1) // (n - 1)


def words_of_length(n: int, k: int):
    """Words of length exactly ``k`` in lexicographic order."""
    return itertools.product(range(1, n + 1), repeat=k)


@dataclass(frozen=True)
class FockTruncation:
    """Ordered basis of ``P_m`` for ``n`` generators."""

    n: int
    m: int
    words: Tuple[Word, ...] = field(repr=False)
    dim: int

    def index(self, w: Sequence[int]) -> int:
        """Position of ``w`` in the basis order."""
        w = tuple(w)
        if len(w) > self.m:
            raise DomainError(f"word {w} longer than level {self.m}")
        return word_index(self.n, w)

    def level_dim(self, k: int) -> int:
        """Dimension of ``P_k`` for ``k <= m``; a prefix of this basis."""
        return fock_dim(self.n, min(k, self.m))

    @property
    def lengths(self) -> np.ndarray:
        return _lengths(self.n, self.m)


def word_index(n: int, w: Sequence[int]) -> int:
    """Index of ``w`` in the length-major lexicographic order."""
    k = len(w)
    idx = 0
    for letter in w:
        if not 1 <= letter <= n:
            raise DomainError(f"letter {letter} outside 1..{n}")
        idx = idx * n + (letter - 1)
    return (k if n == 1 else (n**k - 1) // (n - 1)) + (0 if n == 1 else idx)


@lru_cache(maxsize=64)
def enumerate_words(n: int, m: int) -> FockTruncation:
    """All words of length ``<= m`` on ``n`` letters, length-major then lexicographic."""
    dim = fock_dim(n, m)
    words = tuple(w for k in range(m + 1) for w in words_of_length(n, k))
    assert len(words) == dim
    return FockTruncation(n=n, m=m, words=words, dim=dim)


@lru_cache(maxsize=64)
def _lengths(n: int, m: int) -> np.ndarray:
    out = np.concatenate([np.full(n**k, k) for k in range(m + 1)])
    out.setflags(write=False)
    return out


@lru_cache(maxsize=64)
def extension_table(n: int, m: int, side: Side) -> np.ndarray:
    """``table[j, i-1]`` is the index of the word ``w_j g_i`` (right) or
    ``g_i w_j`` (left), or -1 when that word is longer than ``m``."""
    trunc = enumerate_words(n, m)
    table = np.full((trunc.dim, n), -1, dtype=np.int64)
    for j, w in enumerate(trunc.words):
        if len(w) == m:
            continue
        for i in range(1, n + 1):
            ext = w + (i,) if side == "right" else (i,) + w
            table[j, i - 1] = word_index(n, ext)
    table.setflags(write=False)
    return table


def _check_generator(trunc: FockTruncation, i: int) -> None:
    if not 1 <= i <= trunc.n:
        raise DomainError(f"generator index {i} outside 1..{trunc.n}")


def creation_matrix(trunc: FockTruncation, side: Side, i: int) -> np.ndarray:
    """Matrix of the compressed creation operator ``S_i`` (left) or ``R_i`` (right).

    Left maps ``e_w -> e_{g_i w}``, right maps ``e_w -> e_{w g_i}``; basis
    vectors of maximal length are sent to zero.
    """
    if side not in ("left", "right"):
        raise DomainError(f"side must be 'left' or 'right', got {side!r}")
    _check_generator(trunc, i)
    table = extension_table(trunc.n, trunc.m, side)
    M = np.zeros((trunc.dim, trunc.dim))
    cols = np.nonzero(table[:, i - 1] >= 0)[0]
    M[table[cols, i - 1], cols] = 1.0
    return M


def word_matrix(trunc: FockTruncation, side: Side, w: Sequence[int]) -> np.ndarray:
    """Product ``C_{i1} C_{i2} ... C_{ik}`` of compressed creation matrices.

    For ``side="left"`` this is ``S_w``. For ``side="right"`` it is ``R_w``,
    which sends ``e_b`` to ``e_{b reverse(w)}``; the operator ``R_{reverse(a)}``
    that appears in the pluriharmonic kernels is ``word_matrix(trunc,
    "right", reverse(a))``. Because these shifts only raise length, the
    product of compressions equals the compression of the product.
    """
    w = tuple(w)
    for letter in w:
        _check_generator(trunc, letter)
    M = np.zeros((trunc.dim, trunc.dim))
    if len(w) > trunc.m:
        return M
    table = extension_table(trunc.n, trunc.m, side)
    target = np.arange(trunc.dim)
    for letter in reversed(w):
        alive = target >= 0
        target[alive] = table[target[alive], letter - 1]
    cols = np.nonzero(target >= 0)[0]
    M[target[cols], cols] = 1.0
    return M


def level_projection(trunc: FockTruncation, k: int) -> np.ndarray:
    """Diagonal projection onto words of length ``<= k`` inside ``P_m``."""
    return np.diag((trunc.lengths <= k).astype(float))


@lru_cache(maxsize=64)
def prefix_pairs(n: int, m: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """All factorizations ``g = b s`` with ``s`` nonempty and ``len(g) <= m``.

    Returns index arrays ``(b, g, s, len(s))``. These are exactly the nonzero
    off-diagonal block positions of the multi-Toeplitz finite sections.
    """
    trunc = enumerate_words(n, m)
    b_idx, g_idx, s_idx, s_len = [], [], [], []
    for j, g in enumerate(trunc.words):
        for p in range(len(g)):
            b_idx.append(word_index(n, g[:p]))
            g_idx.append(j)
            s_idx.append(word_index(n, g[p:]))
            s_len.append(len(g) - p)
    arrays = tuple(np.asarray(a, dtype=np.int64) for a in (b_idx, g_idx, s_idx, s_len))
    for a in arrays:
        a.setflags(write=False)
    return arrays
