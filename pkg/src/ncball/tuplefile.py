"""JSON formats for operator tuples and polynomial maps.

Tuple files::

    {"n": 2, "d": 1, "matrices": [[[[0.3, 0.0]]], [[[0.4, 0.0]]]], "label": "..."}

Each matrix entry is an ``[re, im]`` pair. Map files::

    {"n": 2, "components": [[{"word": [1, 2], "re": 1.0, "im": 0.0}], ...]}

Python's float repr is round-trip exact, so dump followed by load reproduces
every bit.
"""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Any

import numpy as np

from .errors import DimensionError, ParseError
from .freemaps import NcPolyMap
from .optuple import OperatorTuple


def _number(x: Any, pointer: str) -> float:
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise ParseError(f"expected a number, got {type(x).__name__}", pointer)
    if not math.isfinite(x):
        raise ParseError("non-finite number", pointer)
    return float(x)


def _count(obj: dict, key: str, minimum: int = 1) -> int:
    if key not in obj:
        raise ParseError(f"missing field {key!r}", "")
    v = obj[key]
    if isinstance(v, bool) or not isinstance(v, int) or v < minimum:
        raise ParseError(f"{key} must be an integer >= {minimum}", f"/{key}")
    return v


def parse_tuple(obj: Any) -> OperatorTuple:
    """Validate a decoded tuple document."""
    if not isinstance(obj, dict):
        raise ParseError("top level must be an object", "")
    n = _count(obj, "n")
    d = _count(obj, "d")
    mats = obj.get("matrices")
    if not isinstance(mats, list):
        raise ParseError("matrices must be an array", "/matrices")
    if len(mats) != n:
        raise DimensionError(f"expected {n} matrices, found {len(mats)}")
    out = np.empty((n, d, d), dtype=complex)
    for i, M in enumerate(mats):
        base = f"/matrices/{i}"
        if not isinstance(M, list):
            raise ParseError("matrix must be an array of rows", base)
        if len(M) != d:
            raise DimensionError(f"matrix {i} has {len(M)} rows, expected {d} (at {base})")
        for r, row in enumerate(M):
            if not isinstance(row, list):
                raise ParseError("row must be an array of [re, im] pairs", f"{base}/{r}")
            if len(row) != d:
                raise DimensionError(f"matrix {i} row {r} has {len(row)} entries, expected {d} (at {base}/{r})")
            for c, entry in enumerate(row):
                ptr = f"{base}/{r}/{c}"
                if not isinstance(entry, list) or len(entry) != 2:
                    raise ParseError("entry must be an [re, im] pair", ptr)
                out[i, r, c] = complex(_number(entry[0], ptr + "/0"), _number(entry[1], ptr + "/1"))
    label = obj.get("label")
    if label is not None and not isinstance(label, str):
        raise ParseError("label must be a string", "/label")
    return OperatorTuple(out, label)


def tuple_to_json(T: OperatorTuple) -> dict:
    doc = {
        "n": T.n,
        "d": T.d,
        "matrices": [
            [[[float(z.real), float(z.imag)] for z in row] for row in M] for M in T.mats
        ],
    }
    if T.label is not None:
        doc["label"] = T.label
    return doc


def load_tuple(path) -> OperatorTuple:
    try:
        obj = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg} at line {exc.lineno}", "") from exc
    return parse_tuple(obj)


def save_tuple(T: OperatorTuple, path) -> None:
    Path(path).write_text(json.dumps(tuple_to_json(T)) + "\n")


def parse_map(obj: Any) -> NcPolyMap:
    """Validate a decoded polynomial-map document."""
    if not isinstance(obj, dict):
        raise ParseError("top level must be an object", "")
    n = _count(obj, "n")
    comps = obj.get("components")
    if not isinstance(comps, list) or not comps:
        raise ParseError("components must be a nonempty array", "/components")
    parsed = []
    for j, comp in enumerate(comps):
        base = f"/components/{j}"
        if not isinstance(comp, list):
            raise ParseError("component must be an array of terms", base)
        terms = []
        for t, term in enumerate(comp):
            ptr = f"{base}/{t}"
            if not isinstance(term, dict) or "word" not in term:
                raise ParseError("term must be an object with a word", ptr)
            word = term["word"]
            if not isinstance(word, list) or any(
                isinstance(x, bool) or not isinstance(x, int) or not 1 <= x <= n for x in word
            ):
                raise ParseError(f"word letters must be integers in 1..{n}", ptr + "/word")
            re = _number(term.get("re", 0.0), ptr + "/re")
            im = _number(term.get("im", 0.0), ptr + "/im")
            terms.append((tuple(word), complex(re, im)))
        parsed.append(terms)
    label = obj.get("label")
    if label is not None and not isinstance(label, str):
        raise ParseError("label must be a string", "/label")
    return NcPolyMap.from_terms(n, parsed, label)


def map_to_json(f: NcPolyMap) -> dict:
    doc = {
        "n": f.n,
        "components": [
            [{"word": list(w), "re": float(c.real), "im": float(c.imag)} for w, c in comp]
            for comp in f.components
        ],
    }
    if f.label is not None:
        doc["label"] = f.label
    return doc


def load_map(path) -> NcPolyMap:
    try:
        obj = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg} at line {exc.lineno}", "") from exc
    return parse_map(obj)


def save_map(f: NcPolyMap, path) -> None:
    Path(path).write_text(json.dumps(map_to_json(f)) + "\n")
