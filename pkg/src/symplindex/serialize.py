"""JSON documents for matrices, paths, Lagrangians, elements and systems.

Every document carries ``"schemaVersion": 1`` and a ``"kind"`` tag. Documents
are validated against a JSON schema first and then for shapes and numerics;
both stages report the JSON pointer of the offending field.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

import jsonschema
import numpy as np

from .errors import SchemaViolation, SymplIndexError
from .ham import LinearHamiltonianSystem
from .lagr import LagrangianFrame
from .maslov import LagrangianPath
from .meta import GeneratingFunction, MetaplecticElement
from .sympl import SymplecticPath, SymplecticSpace, check_symplectic

SCHEMA_VERSION = 1

_NUM = {"type": "number"}
_MAT = {"type": "array", "minItems": 1, "items": {"type": "array", "minItems": 1, "items": _NUM}}
_N = {"type": "integer", "minimum": 1}


def _doc(kind: str, props: dict, required: list) -> dict:
    return {
        "type": "object",
        "properties": {"schemaVersion": {"const": SCHEMA_VERSION}, "kind": {"const": kind},
                       "n": _N, **props},
        "required": ["schemaVersion", "kind", "n", *required],
    }


SCHEMAS: dict[str, dict] = {
    "matrix": _doc("matrix", {"matrix": _MAT}, ["matrix"]),
    "path": _doc("path", {"samples": {
        "type": "array", "minItems": 2,
        "items": {"type": "object", "properties": {"t": _NUM, "matrix": _MAT},
                  "required": ["t", "matrix"]}}}, ["samples"]),
    "lagrangian": _doc("lagrangian", {"frame": _MAT}, ["frame"]),
    "lagrangian_path": _doc("lagrangian_path", {"samples": {
        "type": "array", "minItems": 2,
        "items": {"type": "object", "properties": {"t": _NUM, "frame": _MAT},
                  "required": ["t", "frame"]}}}, ["samples"]),
    "element": _doc("element", {"P": _MAT, "K": _MAT, "Q": _MAT, "m": {"type": "integer"}},
                    ["P", "K", "Q", "m"]),
    "system": _doc("system", {
        "T": {"type": "number", "exclusiveMinimum": 0},
        "name": {"type": "string"},
        "hessian": {"oneOf": [
            {"type": "object", "properties": {"kind": {"const": "constant"}, "matrix": _MAT},
             "required": ["kind", "matrix"]},
            {"type": "object", "properties": {
                "kind": {"const": "fourier"}, "constant": _MAT,
                "terms": {"type": "array", "items": {
                    "type": "object",
                    "properties": {"k": {"type": "integer", "minimum": 1}, "cos": _MAT, "sin": _MAT},
                    "required": ["k", "cos", "sin"]}}},
             "required": ["kind", "constant", "terms"]},
        ]},
    }, ["T", "hessian"]),
}


def _pointer(parts) -> str:
    return "".join("/" + str(p).replace("~", "~0").replace("/", "~1") for p in parts)


def validate(doc: Any, kind: str) -> dict:
    """Check ``doc`` against the schema for ``kind``; raise :class:`SchemaViolation`."""
    if not isinstance(doc, dict):
        raise SchemaViolation("", "document must be a JSON object")
    if doc.get("kind") != kind:
        raise SchemaViolation("/kind", f"expected {kind!r}, got {doc.get('kind')!r}")
    validator = jsonschema.Draft202012Validator(SCHEMAS[kind])
    err = jsonschema.exceptions.best_match(validator.iter_errors(doc))
    if err is not None:
        raise SchemaViolation(_pointer(err.absolute_path), err.message)
    return doc


def _matrix(value, pointer: str, shape: tuple[int, int]) -> np.ndarray:
    rows, cols = shape
    if len(value) != rows:
        raise SchemaViolation(pointer, f"expected {rows} rows, got {len(value)}")
    for i, row in enumerate(value):
        if len(row) != cols:
            raise SchemaViolation(f"{pointer}/{i}", f"expected {cols} entries, got {len(row)}")
    A = np.asarray(value, dtype=np.float64)
    if not np.all(np.isfinite(A)):
        raise SchemaViolation(pointer, "entries must be finite")
    return A


def _numeric(pointer: str, func, *args):
    try:
        return func(*args)
    except SchemaViolation:
        raise
    except (SymplIndexError, ValueError) as exc:
        raise SchemaViolation(pointer, str(exc)) from exc


def _times(samples, pointer: str) -> np.ndarray:
    ts = np.array([s["t"] for s in samples], dtype=np.float64)
    bad = np.flatnonzero(np.diff(ts) <= 0)
    if bad.size:
        raise SchemaViolation(f"{pointer}/{bad[0] + 1}/t", "times must be strictly increasing")
    return ts


# -- parsers ---------------------------------------------------------------------

def parse_matrix(doc) -> np.ndarray:
    validate(doc, "matrix")
    n = doc["n"]
    M = _matrix(doc["matrix"], "/matrix", (2 * n, 2 * n))
    _numeric("/matrix", check_symplectic, M)
    return M


def parse_path(doc) -> SymplecticPath:
    validate(doc, "path")
    n = doc["n"]
    samples = doc["samples"]
    ts = _times(samples, "/samples")
    mats = np.stack([_matrix(s["matrix"], f"/samples/{i}/matrix", (2 * n, 2 * n))
                     for i, s in enumerate(samples)])
    for i, M in enumerate(mats):
        _numeric(f"/samples/{i}/matrix", check_symplectic, M)
    return _numeric("/samples", SymplecticPath, ts, mats)


def parse_lagrangian(doc) -> LagrangianFrame:
    validate(doc, "lagrangian")
    n = doc["n"]
    F = _matrix(doc["frame"], "/frame", (2 * n, n))
    return _numeric("/frame", LagrangianFrame, SymplecticSpace.standard(n), F)


def parse_lagrangian_path(doc) -> LagrangianPath:
    validate(doc, "lagrangian_path")
    n = doc["n"]
    samples = doc["samples"]
    ts = _times(samples, "/samples")
    space = SymplecticSpace.standard(n)
    frames = []
    for i, s in enumerate(samples):
        F = _matrix(s["frame"], f"/samples/{i}/frame", (2 * n, n))
        frames.append(_numeric(f"/samples/{i}/frame", LagrangianFrame, space, F))
    return LagrangianPath(space, ts, frames)


def parse_element(doc) -> MetaplecticElement:
    validate(doc, "element")
    n = doc["n"]
    P, K, Q = (_matrix(doc[k], f"/{k}", (n, n)) for k in ("P", "K", "Q"))
    W = _numeric("", GeneratingFunction, P, K, Q)
    return _numeric("/m", MetaplecticElement, W, doc["m"])


def parse_system(doc) -> LinearHamiltonianSystem:
    validate(doc, "system")
    n, T, h = doc["n"], float(doc["T"]), doc["hessian"]
    name = doc.get("name", "")
    dim = (2 * n, 2 * n)
    if h["kind"] == "constant":
        S = _matrix(h["matrix"], "/hessian/matrix", dim)
        return _numeric("/hessian", LinearHamiltonianSystem.constant, S, T, name)
    S0 = _matrix(h["constant"], "/hessian/constant", dim)
    terms = [(t["k"], _matrix(t["cos"], f"/hessian/terms/{i}/cos", dim),
              _matrix(t["sin"], f"/hessian/terms/{i}/sin", dim))
             for i, t in enumerate(h["terms"])]
    return _numeric("/hessian", LinearHamiltonianSystem.fourier, S0, terms, T, name)


PARSERS = {
    "matrix": parse_matrix, "path": parse_path, "lagrangian": parse_lagrangian,
    "lagrangian_path": parse_lagrangian_path, "element": parse_element, "system": parse_system,
}


# -- dumpers ---------------------------------------------------------------------

def _head(kind: str, n: int) -> dict:
    return {"schemaVersion": SCHEMA_VERSION, "kind": kind, "n": int(n)}


def _list(A) -> list:
    return np.asarray(A, dtype=np.float64).tolist()


def dump_matrix(M) -> dict:
    M = np.asarray(M, dtype=np.float64)
    return {**_head("matrix", len(M) // 2), "matrix": _list(M)}


def dump_path(path: SymplecticPath) -> dict:
    return {**_head("path", path.n),
            "samples": [{"t": float(t), "matrix": _list(M)}
                        for t, M in zip(path.times, path.matrices)]}


def dump_lagrangian(L: LagrangianFrame) -> dict:
    return {**_head("lagrangian", L.space.n), "frame": _list(L.source)}


def dump_lagrangian_path(path: LagrangianPath) -> dict:
    return {**_head("lagrangian_path", path.space.n),
            "samples": [{"t": float(t), "frame": _list(F)}
                        for t, F in zip(path.times, path.source)]}


def dump_element(e: MetaplecticElement) -> dict:
    return {**_head("element", e.n), "P": _list(e.W.P), "K": _list(e.W.K), "Q": _list(e.W.Q),
            "m": int(e.m)}


def dump_system(system: LinearHamiltonianSystem) -> dict:
    if not system.description:
        raise ValueError("system was not built from a serializable description")
    doc = {**_head("system", system.n), "T": float(system.T), "hessian": system.description}
    if system.name:
        doc["name"] = system.name
    return doc


# -- files -----------------------------------------------------------------------

def read_document(path) -> Any:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise SchemaViolation("", f"cannot read {path}: {exc.strerror}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaViolation("", f"invalid JSON at line {exc.lineno}: {exc.msg}") from exc


def load(path, kind: str):
    """Read, validate and parse the document of ``kind`` stored at ``path``."""
    return PARSERS[kind](read_document(path))


def dumps(doc: Any) -> str:
    """Deterministic serialization: sorted keys, two-space indent."""
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"
