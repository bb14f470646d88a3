"""Randomized property suites.

Every invariant is a function ``check(rng) -> (ok, detail)`` run on
``trials`` independent generators derived from ``(seed, invariant name,
trial index)``, so results do not depend on scheduling or on which other
invariants run.
"""

from __future__ import annotations

import hashlib
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Tuple

import numpy as np

from . import caratheodory as ck
from . import harnack as hk
from . import singlevar as sv
from .freemaps import (
    NcPolyMap,
    eval_map,
    lipschitz_constant,
    rho_f,
    sup_norm,
    von_neumann_bound,
)
from .linalg import psd_tolerance, spectral_norm
from .optuple import OperatorTuple, joint_spectral_radius, kernel_P, row_norm
from .radii import in_class, omega
from .sampling import ginibre_tuple, random_contractive_map, random_polynomial

Check = Callable[[np.random.Generator], Tuple[bool, str]]

RHOS = (0.5, 1.0, 2.0, 4.0)
LEVEL = 4
OMEGA_TOL = 1e-7


def trial_rng(seed: int, name: str, trial: int) -> np.random.Generator:
    key = int.from_bytes(hashlib.sha256(name.encode()).digest()[:4], "little")
    return np.random.default_rng([seed, key, trial])


def in_ball(rng, n: int, d: int, rho: float, w: float, m: int = LEVEL) -> OperatorTuple:
    """Random tuple scaled so that ``omega_rho`` at level ``m`` equals ``w``."""
    T = ginibre_tuple(rng, n, d)
    return T.scaled(w / omega(T, rho, m, OMEGA_TOL))


def _pair(rng, rho, n=2, d=2, lo=0.2, hi=0.8, m=LEVEL):
    return tuple(in_ball(rng, n, d, rho, rng.uniform(lo, hi), m) for _ in range(2))


def _rho(rng) -> float:
    return float(rng.choice(RHOS))


def _row_diff(A: OperatorTuple, B: OperatorTuple) -> float:
    return row_norm(OperatorTuple(A.mats - B.mats))


# radii ------------------------------------------------------------------


def omega1_is_row_norm(rng):
    T = ginibre_tuple(rng, 2, int(rng.integers(1, 4)))
    w, r = omega(T, 1.0, LEVEL, 1e-8), row_norm(T)
    return abs(w - r) <= 1e-6, f"omega_1={w:.9g} row={r:.9g}"


def omega_homogeneous(rng):
    T, rho, s = ginibre_tuple(rng, 2, 2), _rho(rng), float(rng.uniform(0.2, 5))
    a, b = omega(T.scaled(s), rho, LEVEL, 1e-9), s * omega(T, rho, LEVEL, 1e-9)
    return abs(a - b) <= 1e-6 * max(1.0, s), f"{a:.9g} vs {b:.9g}"


def omega_decreasing_in_rho(rng):
    T = ginibre_tuple(rng, 2, 2)
    ws = [omega(T, rho, LEVEL, 1e-8) for rho in RHOS]
    ok = all(b <= a + 1e-7 for a, b in zip(ws, ws[1:]))
    return ok, " ".join(f"{w:.6g}" for w in ws)


def spectral_below_omega(rng):
    T, rho = ginibre_tuple(rng, 2, 2), _rho(rng)
    r, w = joint_spectral_radius(T), omega(T, rho, LEVEL, 1e-8)
    return r <= w + 1e-7, f"r={r:.6g} omega={w:.6g}"


def row_norm_below_rho_omega(rng):
    T, rho = ginibre_tuple(rng, 2, 2), _rho(rng)
    r, w = row_norm(T), omega(T, rho, LEVEL, 1e-9)
    return r <= rho * w * (1 + 1e-7), f"row={r:.6g} rho*omega={rho * w:.6g}"


def omega_padding_invariant(rng):
    T, rho = ginibre_tuple(rng, 2, 2), _rho(rng)
    a = omega(T, rho, 3, 1e-9)
    b = omega(T.padded(1), rho, 3, 1e-9)
    return abs(a - b) <= 1e-7, f"{a:.9g} vs {b:.9g}"


# harnack ----------------------------------------------------------------


def delta_symmetric(rng):
    rho = _rho(rng)
    A, B = _pair(rng, rho)
    a, b = hk.delta(A, B, rho, LEVEL), hk.delta(B, A, rho, LEVEL)
    return abs(a - b) <= 1e-12 * max(1.0, a), f"{a!r} vs {b!r}"


def delta_self_zero(rng):
    rho = _rho(rng)
    A = in_ball(rng, 2, 2, rho, rng.uniform(0.1, 0.9))
    v = hk.delta(A, A, rho, LEVEL)
    return v <= 1e-12, f"delta(A,A)={v:.3e}"


def delta_triangle(rng):
    rho = _rho(rng)
    A, B, C = (in_ball(rng, 2, 2, rho, rng.uniform(0.1, 0.8)) for _ in range(3))
    F = [hk.HarnackFactor(X, rho, LEVEL) for X in (A, B, C)]
    ab, bc, ac = hk.delta_from_factors(F[0], F[1]), hk.delta_from_factors(F[1], F[2]), hk.delta_from_factors(F[0], F[2])
    return ac <= ab + bc + 1e-9, f"{ac:.9g} <= {ab:.9g} + {bc:.9g}"


def delta_omega_bound(rng):
    rho = _rho(rng)
    A, B = _pair(rng, rho, hi=0.8)
    wa, wb = omega(A, rho, LEVEL, 1e-9), omega(B, rho, LEVEL, 1e-9)
    v = hk.delta(A, B, rho, LEVEL)
    bound = 0.5 * math.log((1 + wa) * (1 + wb) / ((1 - wa) * (1 - wb)))
    return v <= bound + 1e-6, f"delta={v:.6g} bound={bound:.6g}"


def delta_decreasing_in_rho(rng):
    A, B = _pair(rng, 1.0, d=int(rng.integers(1, 3)))
    curve = hk.delta_rho_curve(A, B, (1.0, 2.0, 4.0, 8.0, 16.0), LEVEL)
    vals = [v for _, v in curve]
    ok = all(isinstance(v, float) for v in vals) and all(b <= a + 1e-8 for a, b in zip(vals, vals[1:]))
    return ok, " ".join(f"{v:.6g}" if isinstance(v, float) else v for v in vals)


def harnack_double_inequality(rng):
    rho = _rho(rng)
    X = in_ball(rng, 2, 2, rho, 0.999)
    c = rng.standard_normal(2) + 1j * rng.standard_normal(2)
    c *= rng.uniform(0, 0.5) / np.linalg.norm(c)
    worst = math.inf
    for r in np.arange(1, 10) / 10:
        lin = r * np.einsum("i,iab->ab", c, X.mats)
        U = np.eye(2) + lin + lin.conj().T
        lo, hi = hk.harnack_bounds(rho, r)
        ev = np.linalg.eigvalsh(U)
        worst = min(worst, ev[0] - lo, hi - ev[-1])
    return worst >= -1e-8, f"worst margin {worst:.3e}"


def domination_matches_delta(rng):
    rho = _rho(rng)
    A, B = _pair(rng, rho)
    c = math.exp(hk.delta(A, B, rho, LEVEL)) + 1e-6
    cert = hk.dominates(A, B, rho, c, LEVEL)
    return cert.dominated, f"c={c:.6g} {cert.label}"


def kernel_positive_in_ball(rng):
    rho = _rho(rng)
    T = in_ball(rng, 2, 2, rho, rng.uniform(0.3, 0.9))
    mins = [hk.kernel_min_eig(T, rho, m) for m in range(1, LEVEL + 1)]
    return min(mins) > 0, " ".join(f"{v:.4g}" for v in mins)


def delta_padding_invariant(rng):
    rho = _rho(rng)
    A, B = _pair(rng, rho, m=3)
    a = hk.delta(A, B, rho, 3)
    b = hk.delta(A.padded(1), B.padded(1), rho, 3)
    return abs(a - b) <= 1e-9, f"{a:.12g} vs {b:.12g}"


def _kernel_norms(X, rho, m):
    w = np.linalg.eigvalsh(kernel_P(X, rho, m).matrix)
    return w[-1], 1.0 / w[0]


def intermetric_upper(rng):
    rho = _rho(rng)
    A, B = _pair(rng, rho)
    d = ck.dk(A, B, LEVEL)
    dl = hk.delta(A, B, rho, LEVEL)
    big = max(_kernel_norms(A, rho, LEVEL)[0], _kernel_norms(B, rho, LEVEL)[0])
    bound = big * math.expm1(2 * dl)
    return d <= bound + 1e-6, f"dk={d:.6g} bound={bound:.6g}"


def intermetric_lower(rng):
    rho = _rho(rng)
    A, B = _pair(rng, rho)
    d = ck.dk(A, B, LEVEL)
    dl = hk.delta(A, B, rho, LEVEL)
    inv = max(_kernel_norms(A, rho, LEVEL)[1], _kernel_norms(B, rho, LEVEL)[1])
    bound = math.log1p(inv * d)
    return 2 * dl <= bound + 1e-6, f"2delta={2 * dl:.6g} bound={bound:.6g}"


def von_neumann_inequality(rng):
    rho = _rho(rng)
    T = in_ball(rng, 2, 2, rho, 0.95, m=5)
    deg = int(rng.integers(1, 4))
    p = random_polynomial(rng, 2, deg)
    lhs = spectral_norm(eval_map(NcPolyMap.from_terms(2, [p]), T).mats[0])
    rhs = von_neumann_bound(p, 2, rho, deg + 6)
    return lhs <= rhs + 1e-9, f"||p(T)||={lhs:.6g} bound={rhs:.6g}"


# caratheodory -----------------------------------------------------------


def _spectral_pair(rng, n=2, d=2):
    out = []
    for _ in range(2):
        T = ginibre_tuple(rng, n, d)
        out.append(T.scaled(rng.uniform(0.1, 0.9) / joint_spectral_radius(T)))
    return out


def dk_symmetric_and_zero(rng):
    A, B = _spectral_pair(rng)
    a, b, z = ck.dk(A, B, LEVEL), ck.dk(B, A, LEVEL), ck.dk(A, A, LEVEL)
    return abs(a - b) <= 1e-12 * max(1.0, a) and z == 0.0, f"{a!r} {b!r} {z!r}"


def dk_triangle(rng):
    A, B = _spectral_pair(rng)
    C = _spectral_pair(rng)[0]
    ab, bc, ac = ck.dk(A, B, LEVEL), ck.dk(B, C, LEVEL), ck.dk(A, C, LEVEL)
    return ac <= ab + bc + 1e-9, f"{ac:.9g} <= {ab:.9g} + {bc:.9g}"


def dk_above_row_difference(rng):
    A, B = _spectral_pair(rng)
    d, r = ck.dk(A, B, 1), _row_diff(A, B)
    return r <= d + 1e-12, f"||A-B||={r:.9g} dk={d:.9g}"


def dk_nondecreasing_in_level(rng):
    A, B = _spectral_pair(rng)
    vals = [ck.dk(A, B, m) for m in range(1, 6)]
    return all(b >= a - 1e-12 for a, b in zip(vals, vals[1:])), " ".join(f"{v:.6g}" for v in vals)


def dk_resolvent_bound(rng):
    A, B = _spectral_pair(rng)
    d, bound = ck.dk(A, B, LEVEL), ck.resolvent_difference_bound(A, B, LEVEL)
    return d <= bound + 1e-9, f"dk={d:.6g} bound={bound:.6g}"


def dk_padding_invariant(rng):
    A, B = _spectral_pair(rng)
    a, b = ck.dk(A, B, 3), ck.dk(A.padded(1), B.padded(1), 3)
    return abs(a - b) <= 1e-12, f"{a!r} vs {b!r}"


def dk_dominates_affine_pluriharmonic(rng):
    A, B = _spectral_pair(rng)
    c = rng.standard_normal(2) + 1j * rng.standard_normal(2)
    c *= rng.uniform(0, 0.5) / np.linalg.norm(c)
    D = np.einsum("i,iab->ab", c, A.mats - B.mats)
    lhs = spectral_norm(D + D.conj().T)
    d = ck.dk(A, B, 1)
    return lhs <= d + 1e-12, f"||u(A)-u(B)||={lhs:.6g} dk={d:.6g}"


# freemaps ---------------------------------------------------------------


def generator_is_contractive(rng):
    f = random_contractive_map(rng, 2, int(rng.integers(1, 3)), f0_norm=rng.uniform(0, 0.5))
    s = sup_norm(f)
    return s <= 1 + 1e-9, f"sup={s:.12g}"


def schwarz_pick(rng, m=LEVEL):
    rho = _rho(rng)
    f = random_contractive_map(rng, 2, 2)
    A, B = _pair(rng, rho, d=int(rng.integers(1, 3)), m=m)
    lhs = hk.delta(eval_map(f, A), eval_map(f, B), rho, m)
    rhs = hk.delta(A, B, rho, m)
    return lhs <= rhs + 1e-4, f"delta(f(A),f(B))={lhs:.6g} delta(A,B)={rhs:.6g}"


def dk_lipschitz(rng, m=LEVEL):
    a = float(rng.uniform(0, 0.5))
    f = random_contractive_map(rng, 2, 2, f0_norm=a)
    A, B = _spectral_pair(rng)
    lhs = ck.dk(eval_map(f, A), eval_map(f, B), m)
    lo, hi = ck.dk_interval(A, B, m)
    bound = lipschitz_constant(a) * hi
    return lhs <= bound + 1e-6, f"dk(f(A),f(B))={lhs:.6g} bound={bound:.6g}"


def spectral_von_neumann(rng):
    f = random_contractive_map(rng, 2, 2, f0_norm=rng.uniform(0, 0.9))
    T = ginibre_tuple(rng, 2, 3)
    T = T.scaled(rng.uniform(0.5, 0.999) / joint_spectral_radius(T))
    r = joint_spectral_radius(eval_map(f, T))
    return r < 1, f"r(f(T))={r:.9g}"


def class_of_image(rng):
    rho = _rho(rng)
    a = float(rng.uniform(0, 0.5))
    f = random_contractive_map(rng, 2, 2, f0_norm=a)
    T = in_ball(rng, 2, 2, rho, 0.999, m=LEVEL)
    cert = in_class(eval_map(f, T), rho_f(rho, a), LEVEL)
    return cert.is_member, f"rho_f={rho_f(rho, a):.6g} min_eig={cert.min_eigs[-1]:.3e}"


def caratheodory_power_bound(rng):
    rho, k = _rho(rng), int(rng.integers(1, 3))
    f = random_contractive_map(rng, 2, 1, degrees=(k,))
    w = float(rng.uniform(0.2, 0.8))
    T = in_ball(rng, 2, 2, rho, w, m=2 * LEVEL)
    lhs = omega(eval_map(f, T), rho, 32, 1e-8)
    bound = 2 * w**k / (1 - w**k)
    return lhs <= bound + 1e-6, f"omega(f(T))={lhs:.6g} bound={bound:.6g}"


def word_power_bound(rng):
    rho, k = _rho(rng), 2
    w = float(rng.uniform(0.3, 1.0))
    T = in_ball(rng, 2, 2, rho, w, m=6)
    lhs = omega(eval_map(NcPolyMap.word_power(2, k), T), rho, 3, 1e-8)
    return lhs <= w**k + 1e-6, f"omega(W_k(T))={lhs:.6g} omega^k={w**k:.6g}"


# singlevar --------------------------------------------------------------


def _matrix_pair_1d(rng, rho, d, lo=0.05, hi=0.25, m=64):
    return [in_ball(rng, 1, d, rho, rng.uniform(lo, hi), m).mats[0] for _ in range(2)]


def kernel_psd_on_grid(rng):
    rho = _rho(rng)
    T = _matrix_pair_1d(rng, rho, 2, 0.5, 0.95)[0]
    K = sv.kernel_K_batch(sv.DEFAULT_GRID.points(), T, rho)
    worst = float(np.linalg.eigvalsh(K)[:, 0].min())
    return worst >= -psd_tolerance(float(np.abs(K).max())), f"min eig {worst:.3e}"


def poisson_identity(rng):
    a = complex(*rng.uniform(-0.6, 0.6, 2))
    z = complex(*rng.uniform(-0.7, 0.7, 2))
    K = sv.kernel_K(z, np.array([[a]]), 1.0)[0, 0].real
    P = (1 - abs(z * a) ** 2) / abs(1 - np.conj(z) * a) ** 2
    return abs(K - P) <= 1e-12 * P, f"{K!r} vs {P!r}"


def fock_matches_closed_form(rng):
    rho = _rho(rng)
    d = int(rng.integers(1, 3))
    T, Tp = _matrix_pair_1d(rng, rho, d)
    a = hk.delta(OperatorTuple(T[None]), OperatorTuple(Tp[None]), rho, 64)
    b = sv.delta_1d(T, Tp, rho)
    return abs(a - b) <= 5e-4, f"fock={a:.8g} closed={b:.8g}"


SUITES: Dict[str, Dict[str, Check]] = {
    "radii": {
        "omega1_is_row_norm": omega1_is_row_norm,
        "omega_homogeneous": omega_homogeneous,
        "omega_decreasing_in_rho": omega_decreasing_in_rho,
        "spectral_below_omega": spectral_below_omega,
        "row_norm_below_rho_omega": row_norm_below_rho_omega,
        "omega_padding_invariant": omega_padding_invariant,
    },
    "harnack": {
        "delta_symmetric": delta_symmetric,
        "delta_self_zero": delta_self_zero,
        "delta_triangle": delta_triangle,
        "delta_omega_bound": delta_omega_bound,
        "delta_decreasing_in_rho": delta_decreasing_in_rho,
        "harnack_double_inequality": harnack_double_inequality,
        "domination_matches_delta": domination_matches_delta,
        "kernel_positive_in_ball": kernel_positive_in_ball,
        "delta_padding_invariant": delta_padding_invariant,
        "intermetric_upper": intermetric_upper,
        "intermetric_lower": intermetric_lower,
        "von_neumann_inequality": von_neumann_inequality,
    },
    "caratheodory": {
        "dk_symmetric_and_zero": dk_symmetric_and_zero,
        "dk_triangle": dk_triangle,
        "dk_above_row_difference": dk_above_row_difference,
        "dk_nondecreasing_in_level": dk_nondecreasing_in_level,
        "dk_resolvent_bound": dk_resolvent_bound,
        "dk_padding_invariant": dk_padding_invariant,
        "dk_dominates_affine_pluriharmonic": dk_dominates_affine_pluriharmonic,
    },
    "freemaps": {
        "generator_is_contractive": generator_is_contractive,
        "schwarz_pick": schwarz_pick,
        "dk_lipschitz": dk_lipschitz,
        "spectral_von_neumann": spectral_von_neumann,
        "class_of_image": class_of_image,
        "caratheodory_power_bound": caratheodory_power_bound,
        "word_power_bound": word_power_bound,
    },
    "singlevar": {
        "kernel_psd_on_grid": kernel_psd_on_grid,
        "poisson_identity": poisson_identity,
        "fock_matches_closed_form": fock_matches_closed_form,
    },
}


@dataclass
class InvariantResult:
    suite: str
    name: str
    passed: int = 0
    failed: int = 0
    errors: int = 0
    failures: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.failed == 0 and self.errors == 0

    def as_dict(self) -> dict:
        return {
            "suite": self.suite,
            "invariant": self.name,
            "passed": self.passed,
            "failed": self.failed,
            "errors": self.errors,
            "failures": self.failures[:5],
        }


def _run_one(check: Check, seed: int, name: str, trial: int):
    try:
        ok, detail = check(trial_rng(seed, name, trial))
        return ("pass" if ok else "fail"), detail
    except Exception as exc:  # a crashing trial is reported, not raised
        return "error", f"{type(exc).__name__}: {exc}"


def run_suite(suite: str, seed: int, trials: int, jobs: int = 1) -> List[InvariantResult]:
    """Run one suite (or ``"all"``); results are ordered by suite and invariant."""
    names = list(SUITES) if suite == "all" else [suite]
    if any(s not in SUITES for s in names):
        raise KeyError(f"unknown suite {suite!r}; choose from {sorted(SUITES)} or 'all'")
    tasks = [(s, name, check, t) for s in names for name, check in SUITES[s].items() for t in range(trials)]
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            outcomes = list(pool.map(lambda a: _run_one(a[2], seed, a[1], a[3]), tasks))
    else:
        outcomes = [_run_one(check, seed, name, t) for _, name, check, t in tasks]
    results: Dict[Tuple[str, str], InvariantResult] = {}
    for (s, name, _, t), (status, detail) in zip(tasks, outcomes):
        res = results.setdefault((s, name), InvariantResult(s, name))
        if status == "pass":
            res.passed += 1
        else:
            res.failed += status == "fail"
            res.errors += status == "error"
            res.failures.append(f"trial {t}: {detail}")
    return list(results.values())
