"""JSON input documents: schema, parsing and canonical serialization.

Indices in files are 1-based (e1..en); everything in memory is 0-based.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import jsonschema
import numpy as np

from .catalog import NamedExample
from .contact_structures import AlmostContactStructure
from .errors import ContactLieError, InputError
from .lie_core import LieAlgebra
from .metric_connection import MetricLieAlgebra

_number = {"type": "number"}
_vector = {"type": "array", "items": _number}

SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "contactlie input document",
    "type": "object",
    "required": ["dim", "brackets"],
    "additionalProperties": False,
    "properties": {
        "name": {"type": "string"},
        "dim": {"type": "integer", "minimum": 1},
        "labels": {"type": "array", "items": {"type": "string"}},
        "brackets": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["i", "j", "coeffs"],
                "additionalProperties": False,
                "properties": {
                    "i": {"type": "integer", "minimum": 1},
                    "j": {"type": "integer", "minimum": 1},
                    "coeffs": {
                        "type": "object",
                        "patternProperties": {"^[1-9][0-9]*$": _number},
                        "additionalProperties": False,
                    },
                },
            },
        },
        "metric": {
            "oneOf": [
                {"const": "identity"},
                {"type": "array", "items": _vector},
            ]
        },
        "structures": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["phi", "xi"],
                "additionalProperties": False,
                "properties": {
                    "name": {"type": "string"},
                    "phi": {"type": "array", "items": _vector},
                    "xi": _vector,
                },
            },
        },
        "subalgebras": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name", "basis"],
                "additionalProperties": False,
                "properties": {
                    "name": {"type": "string"},
                    "basis": {"type": "array", "minItems": 1, "items": _vector},
                },
            },
        },
    },
}


@dataclass(frozen=True, eq=False)
class Document:
    name: str
    algebra: LieAlgebra
    metric: MetricLieAlgebra
    structures: list = field(default_factory=list)
    subalgebras: list = field(default_factory=list)


def _path(error: jsonschema.ValidationError) -> str:
    out = "$"
    for part in error.absolute_path:
        out += f"[{part}]" if isinstance(part, int) else f".{part}"
    return out


def _matrix(rows, n, where):
    try:
        arr = np.asarray(rows, dtype=float)
    except ValueError:
        raise InputError("ragged array", where) from None
    if arr.shape != (n, n):
        raise InputError(f"expected a {n}x{n} array, got shape {arr.shape}", where)
    if not np.isfinite(arr).all():
        raise InputError("non-finite entry", where)
    return arr


def _vec(values, n, where):
    arr = np.asarray(values, dtype=float)
    if arr.shape != (n,):
        raise InputError(f"expected {n} entries, got {arr.shape[0] if arr.ndim == 1 else arr.shape}", where)
    if not np.isfinite(arr).all():
        raise InputError("non-finite entry", where)
    return arr


def load_document(obj) -> Document:
    """Validate a decoded JSON object and build the in-memory objects."""
    try:
        jsonschema.validate(obj, SCHEMA)
    except jsonschema.ValidationError as exc:
        raise InputError(exc.message, _path(exc)) from None
    n = obj["dim"]
    c = np.zeros((n, n, n))
    seen = set()
    for idx, entry in enumerate(obj["brackets"]):
        where = f"$.brackets[{idx}]"
        i, j = entry["i"], entry["j"]
        if not (i < j <= n):
            raise InputError(f"need 1 <= i < j <= {n}, got i={i}, j={j}", where)
        if (i, j) in seen:
            raise InputError(f"duplicate bracket entry for ({i}, {j})", where)
        seen.add((i, j))
        for key, value in entry["coeffs"].items():
            k = int(key)
            if not np.isfinite(float(value)):
                raise InputError("non-finite coefficient", f"{where}.coeffs")
            if k > n:
                raise InputError(f"coefficient index {k} exceeds dim {n}", f"{where}.coeffs")
            c[i - 1, j - 1, k - 1] = float(value)
            c[j - 1, i - 1, k - 1] = -float(value)
    labels = obj.get("labels")
    if labels is not None and len(labels) != n:
        raise InputError(f"expected {n} labels", "$.labels")
    algebra = LieAlgebra(c, labels)

    metric_spec = obj.get("metric", "identity")
    try:
        if metric_spec == "identity":
            metric = MetricLieAlgebra(algebra)
        else:
            gram = _matrix(metric_spec, n, "$.metric")
            if np.abs(gram - gram.T).max() > 1e-12:
                raise InputError("metric is not symmetric to 1e-12", "$.metric")
            metric = MetricLieAlgebra(algebra, gram)
    except InputError:
        raise
    except ContactLieError as exc:
        raise InputError(str(exc), "$.metric") from None

    structures = []
    for idx, entry in enumerate(obj.get("structures", [])):
        where = f"$.structures[{idx}]"
        phi = _matrix(entry["phi"], n, where + ".phi")
        xi = _vec(entry["xi"], n, where + ".xi")
        structures.append(AlmostContactStructure(phi, xi, entry.get("name", f"structure-{idx + 1}")))

    subalgebras = []
    for idx, entry in enumerate(obj.get("subalgebras", [])):
        where = f"$.subalgebras[{idx}].basis"
        vectors = [_vec(v, n, f"{where}[{a}]") for a, v in enumerate(entry["basis"])]
        subalgebras.append((entry["name"], np.column_stack(vectors)))
    return Document(obj.get("name", ""), algebra, metric, structures, subalgebras)


def parse_document(text: str) -> Document:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(exc.msg, f"line {exc.lineno} column {exc.colno}") from None
    return load_document(obj)


def _floats(a):
    return [float(v) for v in np.asarray(a, dtype=float).ravel()]


def _rows(m):
    return [_floats(r) for r in np.asarray(m, dtype=float)]


def to_object(name, algebra: LieAlgebra, metric: MetricLieAlgebra, structures=(), subalgebras=()) -> dict:
    """Canonical JSON-ready dict (fixed key order, sparse i < j brackets)."""
    n = algebra.dim
    c = algebra.constants
    brackets = []
    for i in range(n):
        for j in range(i + 1, n):
            coeffs = {str(k + 1): float(c[i, j, k]) for k in range(n) if c[i, j, k] != 0.0}
            if coeffs:
                brackets.append({"i": i + 1, "j": j + 1, "coeffs": coeffs})
    obj = {"name": name, "dim": n, "labels": list(algebra.labels), "brackets": brackets}
    obj["metric"] = "identity" if np.array_equal(metric.gram, np.eye(n)) else _rows(metric.gram)
    obj["structures"] = [{"name": s.name, "phi": _rows(s.phi), "xi": _floats(s.xi)} for s in structures]
    obj["subalgebras"] = [
        {"name": key, "basis": [_floats(col) for col in np.asarray(basis, dtype=float).T]}
        for key, basis in subalgebras
    ]
    return obj


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, allow_nan=False) + "\n"


def example_to_json(ex: NamedExample) -> str:
    return dumps(to_object(ex.name, ex.algebra, ex.metric, ex.structures, ex.subalgebras))


def document_to_json(doc: Document) -> str:
    return dumps(to_object(doc.name, doc.algebra, doc.metric, doc.structures, doc.subalgebras))
