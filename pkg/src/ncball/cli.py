"""``ncball`` command-line interface.

Exit codes: 0 success, 1 computation or precondition failure, 2 usage.
Reports are deterministic: wall-clock fields are emitted only with
``--timing``.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np

from . import caratheodory as ck
from . import harnack as hk
from . import singlevar as sv
from .errors import DomainError, NcballError
from .freemaps import eval_map, verify_mapping
from .linalg import psd_tolerance
from .optuple import OperatorTuple, joint_spectral_radius, row_norm
from .radii import default_level, omega_report, rho_min
from .sampling import InsideBall, Spectral, random_tuple
from .tuplefile import load_map, load_tuple, save_tuple, tuple_to_json
from .verify import run_suite

CONVERGE_HEADER = ("level", "value", "min_eig", "wall_ms")


class CommandError(Exception):
    """Computation finished but its contract failed (exit 1)."""


def _jobs(args) -> int:
    env = os.environ.get("NCBALL_JOBS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise DomainError(f"NCBALL_JOBS must be an integer, got {env!r}")
    return max(1, args.jobs)


def _digest(paths: Dict[str, str]) -> Dict[str, str]:
    return {k: hashlib.sha256(Path(p).read_bytes()).hexdigest() for k, p in paths.items()}


def _level(args, n: int) -> int:
    return default_level(n) if args.level is None else args.level


def _ordered_map(fn: Callable, items: Sequence, jobs: int) -> List:
    if jobs > 1 and len(items) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(fn, items))
    return [fn(x) for x in items]


# commands ---------------------------------------------------------------


def cmd_radius(args):
    T = load_tuple(args.input)
    level = _level(args, T.n)
    if args.kind == "omega":
        rep = omega_report(T, args.rho, level, args.tol)
        result = rep.as_dict()
        result["spectral_radius"] = joint_spectral_radius(T)
        return result, {"input": args.input}, level, result["tau_psd"]
    if args.kind == "spectral":
        return {"spectral_radius": joint_spectral_radius(T)}, {"input": args.input}, None, None
    return {"row_norm": row_norm(T)}, {"input": args.input}, None, None


def _load_pair(args):
    A, B = load_tuple(args.a), load_tuple(args.b)
    return A, B, {"a": args.a, "b": args.b}


def cmd_distance(args):
    A, B, inputs = _load_pair(args)
    level = _level(args, A.n)
    if args.kind == "hyperbolic":
        FA, FB = hk.harnack_factor(A, args.rho, level), hk.harnack_factor(B, args.rho, level)
        value = hk.delta_from_factors(FA, FB)
        trace = [[k, hk.delta(A, B, args.rho, k)] for k in range(max(0, level - 2), level)]
        trace.append([level, value])
        tau = psd_tolerance(max(abs(FA.defect_min_eig), abs(FB.defect_min_eig)))
        result = {
            "delta": value,
            "lambda": math.exp(value),
            "rho": args.rho,
            "trace": trace,
            "defect_min_eig": [FA.defect_min_eig, FB.defect_min_eig],
        }
        return result, inputs, level, tau
    lo, hi = ck.dk_interval(A, B, level)
    trace = [[k, ck.dk(A, B, k)] for k in range(max(0, level - 2), level + 1)]
    result = {"dk": lo, "tail_bound": hi - lo, "interval": [lo, hi], "trace": trace}
    return result, inputs, level, None


def cmd_dominate(args):
    A, B, inputs = _load_pair(args)
    level = _level(args, A.n)
    cert = hk.dominates(A, B, args.rho, args.c, level)
    return cert.as_dict(), inputs, level, max(cert.taus) if cert.taus else None


def cmd_rho_min(args):
    T = load_tuple(args.input)
    level = _level(args, T.n)
    value = rho_min(T, level, args.tol)
    return {"rho_min": value, "tol": args.tol}, {"input": args.input}, level, psd_tolerance(value)


def cmd_map(args):
    f, T = load_map(args.map), load_tuple(args.input)
    inputs = {"map": args.map, "input": args.input}
    if args.action == "apply":
        FT = eval_map(f, T)
        if args.save:
            save_tuple(FT, args.save)
        return {"tuple": tuple_to_json(FT)}, inputs, None, None
    level = _level(args, T.n)
    rep = verify_mapping(f, T, args.rho, level, args.tol)
    result = rep.as_dict()
    if not rep.passed:
        raise CommandError(json.dumps(result))
    return result, inputs, level, None


def _converge_row(args, A, B, quantity, m):
    t0 = time.perf_counter()
    if quantity == "dk":
        value = ck.dk(A, B, m)
        min_eig = min(hk.kernel_min_eig(X, 1.0, m) for X in (A, B))
    elif quantity == "delta":
        FA, FB = hk.harnack_factor(A, args.rho, m), hk.harnack_factor(B, args.rho, m)
        value = hk.delta_from_factors(FA, FB)
        min_eig = min(FA.defect_min_eig, FB.defect_min_eig)
    else:
        rep = omega_report(A, args.rho, m, args.tol)
        value = rep.value
        min_eig = hk.kernel_min_eig(A.scaled(1.0 / value), args.rho, m) if value > 0 else args.rho
    wall = (time.perf_counter() - t0) * 1e3
    return [m, value, min_eig, round(wall, 3) if args.timing else ""]


def _parse_levels(text: str) -> List[int]:
    try:
        if ":" in text:
            lo, hi = (int(x) for x in text.split(":"))
            return list(range(lo, hi + 1))
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise DomainError(f"levels must look like 2:8 or 2,4,6, got {text!r}")


def cmd_converge(args):
    A = load_tuple(args.a)
    inputs = {"a": args.a}
    if args.quantity in ("dk", "delta"):
        if not args.b:
            raise DomainError(f"{args.quantity} needs --b")
        B = load_tuple(args.b)
        inputs["b"] = args.b
    else:
        B = None
    levels = _parse_levels(args.levels)
    rows = _ordered_map(lambda m: _converge_row(args, A, B, args.quantity, m), levels, _jobs(args))
    values = [r[1] for r in rows]
    nondecreasing = all(b >= a - 1e-12 for a, b in zip(values, values[1:]))
    result = {"quantity": args.quantity, "header": list(CONVERGE_HEADER), "rows": rows,
              "nondecreasing": nondecreasing}
    if args.quantity == "dk" and not nondecreasing:
        raise CommandError("dk level trace is not nondecreasing")
    return result, inputs, levels[-1], None


def cmd_verify(args):
    results = run_suite(args.suite, args.seed, args.trials, _jobs(args))
    payload = {
        "suite": args.suite,
        "trials": args.trials,
        "invariants": [r.as_dict() for r in results],
        "all_passed": all(r.ok for r in results),
    }
    return payload, {}, None, None


def cmd_random(args):
    if args.spectral is not None:
        target = Spectral(args.spectral)
    else:
        target = InsideBall(args.rho, args.margin, args.level)
    T = random_tuple(args.seed, args.n, args.d, target)
    if args.save:
        save_tuple(T, args.save)
    return {"tuple": tuple_to_json(T)}, {}, args.level, None


def _as_matrix(T: OperatorTuple) -> np.ndarray:
    if T.n != 1:
        raise DomainError(f"singlevar expects n = 1 tuples, got n = {T.n}")
    return np.asarray(T.mats[0])


def cmd_singlevar(args):
    A = _as_matrix(load_tuple(args.a))
    inputs = {"a": args.a}
    if args.kind == "kernel":
        z = complex(args.z[0], args.z[1])
        K = sv.kernel_K(z, A, args.rho)
        return {"z": list(args.z), "kernel": [[[v.real, v.imag] for v in row] for row in K]}, inputs, None, None
    if not args.b:
        raise DomainError(f"{args.kind} needs --b")
    B = _as_matrix(load_tuple(args.b))
    inputs["b"] = args.b
    if args.kind == "dominate":
        cert = sv.dominates_1d(A, B, args.rho, args.c)
        return cert.as_dict(), inputs, None, cert.tau
    ab, ba = sv.L_norm_1d(A, B, args.rho), sv.L_norm_1d(B, A, args.rho)
    result = {
        "L_ab": ab.as_dict(),
        "L_ba": ba.as_dict(),
        "delta": math.log(max(1.0, ab.value, ba.value)),
    }
    return result, inputs, None, None


# plumbing ---------------------------------------------------------------


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--rho", type=float, default=1.0)
    p.add_argument("--level", type=int, default=None)
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--out", default=None, help="write the report here instead of stdout")
    p.add_argument("--format", choices=("json", "csv"), default=None)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--timing", action="store_true", help="include wall-clock fields")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ncball",
        description="Radii, domination and metrics for matrix tuples at finite Fock truncation.",
        epilog="Exit codes: 0 success, 1 computation or precondition failure, 2 usage.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("radius", help="omega_rho, joint spectral radius or row norm")
    p.add_argument("kind", choices=("omega", "spectral", "row"))
    p.add_argument("--input", required=True)
    _common(p)
    p.set_defaults(func=cmd_radius)

    p = sub.add_parser("distance", help="hyperbolic or Caratheodory distance")
    p.add_argument("kind", choices=("hyperbolic", "caratheodory"))
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    _common(p)
    p.set_defaults(func=cmd_distance)

    p = sub.add_parser("dominate", help="Harnack domination certificate")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--c", type=float, required=True)
    _common(p)
    p.set_defaults(func=cmd_dominate)

    p = sub.add_parser("rho-min", help="smallest rho whose class contains the tuple")
    p.add_argument("--input", required=True)
    _common(p)
    p.set_defaults(func=cmd_rho_min)

    p = sub.add_parser("map", help="apply or verify a polynomial map")
    p.add_argument("action", choices=("apply", "verify"))
    p.add_argument("--map", required=True)
    p.add_argument("--input", required=True)
    p.add_argument("--save", default=None, help="apply: write f(T) as a tuple file")
    _common(p)
    p.set_defaults(func=cmd_map)

    p = sub.add_parser("converge", help="level trace of dk, delta or omega")
    p.add_argument("quantity", choices=("dk", "delta", "omega"))
    p.add_argument("--a", required=True)
    p.add_argument("--b", default=None)
    p.add_argument("--levels", default="2:8")
    _common(p)
    p.set_defaults(func=cmd_converge)

    p = sub.add_parser("verify", help="randomized property suites")
    p.add_argument("--suite", default="all")
    _common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("random", help="seeded random tuple")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--margin", type=float, help="inside-ball mode: omega_rho = 1 - margin")
    g.add_argument("--spectral", type=float, help="spectral mode: r(T) = value")
    p.add_argument("--save", default=None)
    _common(p)
    p.set_defaults(func=cmd_random)

    p = sub.add_parser("singlevar", help="closed forms for a single operator")
    p.add_argument("kind", choices=("kernel", "dominate", "delta"))
    p.add_argument("--a", required=True)
    p.add_argument("--b", default=None)
    p.add_argument("--c", type=float, default=1.0)
    p.add_argument("--z", type=float, nargs=2, default=(0.0, 0.0), metavar=("RE", "IM"))
    _common(p)
    p.set_defaults(func=cmd_singlevar)
    return parser


def _flatten(prefix: str, obj, out: List[tuple]) -> None:
    if isinstance(obj, dict):
        for k, v in obj.items():
            _flatten(f"{prefix}.{k}" if prefix else str(k), v, out)
    elif isinstance(obj, (list, tuple)) and obj and isinstance(obj[0], (dict, list, tuple)):
        for i, v in enumerate(obj):
            _flatten(f"{prefix}.{i}", v, out)
    else:
        out.append((prefix, json.dumps(obj) if isinstance(obj, (list, tuple)) else obj))


def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, indent=1) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    result = report["result"]
    if "rows" in result and "header" in result:
        w.writerow(result["header"])
        w.writerows(result["rows"])
    else:
        rows: List[tuple] = []
        _flatten("", report, rows)
        w.writerow(("key", "value"))
        w.writerows(rows)
    return buf.getvalue()


def execute(args, argv: Sequence[str]):
    """Run parsed ``args``; returns ``(report, exit_code)``."""
    t0 = time.perf_counter()
    try:
        result, inputs, level, tau = args.func(args)
    except CommandError as exc:
        return {"command": list(argv), "error": "CommandError", "message": str(exc)}, 1
    except (NcballError, OSError, ValueError, KeyError, np.linalg.LinAlgError) as exc:
        return {"command": list(argv), "error": type(exc).__name__, "message": str(exc)}, 1
    code = 1 if args.command == "verify" and not result["all_passed"] else 0
    report = {
        "command": list(argv),
        "inputs_sha256": _digest(inputs),
        "seed": args.seed,
        "level": level,
        "tau_psd": tau,
        "result": result,
    }
    if args.timing:
        report["wall_ms"] = round((time.perf_counter() - t0) * 1e3, 3)
    return report, code


def run(argv: Optional[Sequence[str]] = None):
    """Parse and execute; returns ``(report, exit_code)``.

    Usage errors raise ``SystemExit(2)`` from argparse.
    """
    argv = list(sys.argv[1:] if argv is None else argv)
    return execute(build_parser().parse_args(argv), argv)


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    report, code = execute(args, argv)
    if "error" in report:
        sys.stderr.write(json.dumps(report) + "\n")
        return code
    fmt = args.format or ("csv" if args.command == "converge" else "json")
    text = render(report, fmt)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
