"""Noncommutative polynomial maps ``f = (f_1, ..., f_m)`` and the checks that
a contractive map sends ``C_rho`` into ``C_{rho_f}``.

Norms of polynomials in the left creation operators are computed from the
Gram matrix ``[P_M f_i(S)^* f_j(S) P_M]``. Since ``S_a^* S_b`` is ``S_s`` when
``b = a s``, ``S_s^*`` when ``a = b s`` and zero otherwise, every block is
an exact combination of compressed word matrices. The resulting norm of the
restriction to ``P_M`` is a lower bound that increases with ``M``; for maps
whose components are homogeneous of one common degree it is exact already
at ``M = 0``.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg as sla

from .errors import DomainError
from .fock import Word, enumerate_words, fock_dim, word_index, word_matrix, words_of_length
from .optuple import OperatorTuple, joint_spectral_radius, word_products
from .radii import default_level, in_class, omega

Terms = Tuple[Tuple[Word, complex], ...]

CONTRACTIVE_SLACK = 1e-9
SUP_AGREEMENT = 1e-10
SUP_MAX_DIM = 1500


def _normalize(n: int, terms) -> Terms:
    merged: Dict[Word, complex] = defaultdict(complex)
    items = terms.items() if isinstance(terms, Mapping) else terms
    for w, c in items:
        w = tuple(int(x) for x in w)
        for letter in w:
            if not 1 <= letter <= n:
                raise DomainError(f"letter {letter} outside 1..{n}")
        merged[w] += complex(c)
    return tuple(sorted(merged.items(), key=lambda kv: (len(kv[0]), kv[0])))


@dataclass(frozen=True)
class NcPolyMap:
    """``m`` noncommutative polynomials in ``n`` variables with scalar coefficients."""

    n: int
    components: Tuple[Terms, ...]
    label: Optional[str] = None

    @classmethod
    def from_terms(cls, n: int, components: Iterable, label: Optional[str] = None) -> "NcPolyMap":
        if n < 1:
            raise DomainError("input arity must be >= 1")
        comps = tuple(_normalize(n, c) for c in components)
        if not comps:
            raise DomainError("a map needs at least one component")
        return cls(n, comps, label)

    @classmethod
    def identity(cls, n: int) -> "NcPolyMap":
        return cls.from_terms(n, [{(i,): 1.0} for i in range(1, n + 1)], "identity")

    @classmethod
    def zero_padding(cls, n: int, k: int) -> "NcPolyMap":
        comps = [{(i,): 1.0} for i in range(1, n + 1)] + [{} for _ in range(k)]
        return cls.from_terms(n, comps, f"zero-padding +{k}")

    @classmethod
    def word_power(cls, n: int, k: int) -> "NcPolyMap":
        """``W_k(Z) = (Z_w)_{|w| = k}`` in lexicographic order."""
        return cls.from_terms(n, [{w: 1.0} for w in words_of_length(n, k)], f"words of length {k}")

    @property
    def m(self) -> int:
        return len(self.components)

    @property
    def degree(self) -> int:
        return max((len(w) for comp in self.components for w, c in comp if c != 0), default=0)

    def constant_terms(self) -> np.ndarray:
        return np.array([dict(comp).get((), 0.0) for comp in self.components], dtype=complex)

    @property
    def f0_norm(self) -> float:
        """Row norm of ``f(0)``, a tuple of scalar multiples of the identity."""
        return float(np.linalg.norm(self.constant_terms()))

    def scaled_argument(self, r: float) -> "NcPolyMap":
        """The map ``Z -> f(rZ)``."""
        comps = [[(w, c * r ** len(w)) for w, c in comp] for comp in self.components]
        return NcPolyMap.from_terms(self.n, comps, self.label)

    def is_homogeneous(self) -> bool:
        lengths = {len(w) for comp in self.components for w, c in comp if c != 0}
        return len(lengths) <= 1


def eval_map(f: NcPolyMap, T: OperatorTuple) -> OperatorTuple:
    """``(f_1(T), ..., f_m(T))`` with ``f_j(T) = sum c_w T_w``."""
    if f.n != T.n:
        raise DomainError(f"map expects {f.n} variables, tuple has {T.n}")
    W = word_products(T, f.degree)
    out = np.zeros((f.m, T.d, T.d), dtype=complex)
    for j, comp in enumerate(f.components):
        for w, c in comp:
            if c != 0:
                out[j] += c * W[word_index(T.n, w)]
    return OperatorTuple(out)


def shift_gram(n: int, components: Sequence[Terms], M: int) -> np.ndarray:
    """Gram matrix ``[P_M f_i(S)^* f_j(S) P_M]_{ij}`` on ``P_M`` for each component."""
    trunc = enumerate_words(n, M)
    N = trunc.dim
    k = len(components)
    cache: Dict[Word, np.ndarray] = {}

    def S(word):
        if word not in cache:
            cache[word] = word_matrix(trunc, "left", word)
        return cache[word]

    G = np.zeros((k * N, k * N), dtype=complex)
    for i, ci in enumerate(components):
        for j, cj in enumerate(components):
            forward: Dict[Word, complex] = defaultdict(complex)
            backward: Dict[Word, complex] = defaultdict(complex)
            for a, ca in ci:
                for b, cb in cj:
                    coef = np.conj(ca) * cb
                    if coef == 0:
                        continue
                    if b[: len(a)] == a:
                        forward[b[len(a):]] += coef
                    elif a[: len(b)] == b:
                        backward[a[len(b):]] += coef
            block = np.zeros((N, N), dtype=complex)
            for s, c in forward.items():
                block += c * S(s)
            for s, c in backward.items():
                block += c * S(s).T
            G[i * N : (i + 1) * N, j * N : (j + 1) * N] = block
    return G


def shift_row_norm(n: int, components: Sequence[Terms], M: int) -> float:
    """Norm of the row ``[f_1(S) ... f_m(S)]`` restricted to ``P_M`` in each slot."""
    G = shift_gram(n, components, M)
    top = G.shape[0] - 1
    lam = sla.eigvalsh(0.5 * (G + G.conj().T), subset_by_index=[top, top])[0]
    return float(np.sqrt(max(lam, 0.0)))


@dataclass
class SupNormResult:
    value: float
    level: int
    converged: bool
    trace: List[tuple] = field(default_factory=list)


def sup_norm_report(f: NcPolyMap, r: float = 1.0, max_dim: int = SUP_MAX_DIM) -> SupNormResult:
    """``||f(rS)||`` from restrictions to ``P_M``.

    Starting at ``M = degree``, levels ``M`` and ``M + 1`` are compared; if
    they differ by more than ``1e-10`` the level jumps to ``2M + 1``. Stops
    unconverged once the Gram size would exceed ``max_dim``; the value is
    then the largest lower bound seen.
    """
    if not 0 < r <= 1:
        raise DomainError("r must lie in (0, 1]")
    g = f.scaled_argument(r) if r != 1 else f
    M = g.degree
    trace = []
    best = 0.0
    while g.m * fock_dim(f.n, M + 1) <= max_dim:
        lo = shift_row_norm(f.n, g.components, M)
        hi = shift_row_norm(f.n, g.components, M + 1)
        trace += [(M, lo), (M + 1, hi)]
        best = max(best, lo, hi)
        if abs(hi - lo) <= SUP_AGREEMENT:
            return SupNormResult(best, M + 1, True, trace)
        M = 2 * M + 1
    if not trace:
        best = shift_row_norm(f.n, g.components, M)
        trace.append((M, best))
    return SupNormResult(best, trace[-1][0], False, trace)


def sup_norm(f: NcPolyMap, r: float = 1.0) -> float:
    return sup_norm_report(f, r).value


def von_neumann_bound(p: Mapping, n: int, rho: float, M: int) -> float:
    """``||rho p(S) + (1 - rho) p(0)||`` restricted to ``P_M``; a lower bound
    for the full-space norm that increases with ``M``."""
    terms = _normalize(n, p)
    q = [(w, c) if not w else (w, rho * c) for w, c in terms]
    return shift_row_norm(n, [tuple(q)], M)


def rho_f(rho: float, f0_norm: float) -> float:
    """Class constant of ``f(T)`` for ``T`` in ``C_rho`` and contractive ``f``."""
    if not rho > 0:
        raise DomainError(f"rho must be positive, got {rho}")
    a = float(f0_norm)
    if not 0 <= a < 1:
        raise DomainError(f"||f(0)|| must lie in [0, 1), got {a}")
    if rho < 1:
        return 1 + (rho - 1) * (1 - a) / (1 + a)
    return 1 + (rho - 1) * (1 + a) / (1 - a)


def lipschitz_constant(f0_norm: float) -> float:
    """``(1 + ||f(0)||) / (1 - ||f(0)||)``."""
    if not 0 <= f0_norm < 1:
        raise DomainError("||f(0)|| must lie in [0, 1)")
    return (1 + f0_norm) / (1 - f0_norm)


@dataclass
class Check:
    status: str
    value: Optional[float] = None
    bound: Optional[float] = None
    note: str = ""

    @property
    def margin(self) -> Optional[float]:
        if self.value is None or self.bound is None:
            return None
        return self.bound - self.value

    def as_dict(self) -> dict:
        return {
            "status": self.status,
            "value": self.value,
            "bound": self.bound,
            "margin": self.margin,
            "note": self.note,
        }


@dataclass
class MappingReport:
    rho: float
    rho_f: Optional[float]
    checks: Dict[str, Check]

    @property
    def passed(self) -> bool:
        return all(c.status != "fail" for c in self.checks.values())

    def as_dict(self) -> dict:
        return {
            "rho": self.rho,
            "rho_f": self.rho_f,
            "passed": self.passed,
            "checks": {k: v.as_dict() for k, v in self.checks.items()},
        }


def verify_mapping(
    f: NcPolyMap,
    T: OperatorTuple,
    rho: float,
    m_max: Optional[int] = None,
    tol: float = 1e-6,
) -> MappingReport:
    """Check that ``f(T)`` lands where a contractive map must send it.

    Sub-checks: class membership of ``f(T)`` in ``C_{rho_f}``;
    ``r(f(T)) < 1`` when ``r(T) < 1``; ``omega_{rho_f}(f(T)) < 1`` when
    ``omega_rho(T) < 1``; ``omega_{rho_f}(f(T)) <= ||f||_inf``. A violated
    precondition marks the dependent checks as skipped.
    """
    if f.n != T.n:
        raise DomainError(f"map expects {f.n} variables, tuple has {T.n}")
    m_in = default_level(T.n) if m_max is None else m_max
    m_out = default_level(f.m) if m_max is None else min(m_max, default_level(f.m))
    checks: Dict[str, Check] = {}

    sup = sup_norm(f)
    contractive = sup <= 1 + CONTRACTIVE_SLACK
    checks["contractive"] = Check("pass" if contractive else "fail", sup, 1.0,
                                  "precondition: ||f||_inf <= 1")
    a = f.f0_norm
    checks["f0_below_one"] = Check("pass" if a < 1 else "fail", a, 1.0, "precondition: ||f(0)|| < 1")
    if not (contractive and a < 1):
        return MappingReport(float(rho), None, checks)

    rf = rho_f(rho, a)
    FT = eval_map(f, T)
    cert = in_class(T, rho, m_in)
    r_T = joint_spectral_radius(T)
    w_T = omega(T, rho, m_in, tol)

    if cert.is_member:
        out_cert = in_class(FT, rf, m_out)
        checks["membership"] = Check(
            "pass" if out_cert.is_member else "fail",
            -out_cert.min_eigs[-1],
            out_cert.taus[-1],
            f"f(T) in C_rho_f at levels 1..{m_out}; value is -min eigenvalue",
        )
    else:
        checks["membership"] = Check("skipped", note="T not certified in C_rho")

    if r_T < 1:
        r_F = joint_spectral_radius(FT)
        checks["spectral_radius"] = Check("pass" if r_F < 1 else "fail", r_F, 1.0, "r(f(T)) < 1")
    else:
        checks["spectral_radius"] = Check("skipped", note="r(T) >= 1")

    w_F = omega(FT, rf, m_out, tol) if np.any(FT.mats) else 0.0
    if w_T < 1:
        checks["omega_strict"] = Check("pass" if w_F < 1 else "fail", w_F, 1.0,
                                       "omega_rho_f(f(T)) < 1")
    else:
        checks["omega_strict"] = Check("skipped", note="omega_rho(T) >= 1")
    if cert.is_member:
        checks["omega_sup_bound"] = Check("pass" if w_F <= sup + tol else "fail", w_F, sup + tol,
                                          "omega_rho_f(f(T)) <= ||f||_inf")
    else:
        checks["omega_sup_bound"] = Check("skipped", note="T not certified in C_rho")
    return MappingReport(float(rho), rf, checks)
