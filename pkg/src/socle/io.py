"""Instance files: JSON with complex numbers as ``[re, im]`` pairs."""
from __future__ import annotations

import json
import sys
from dataclasses import dataclass, field

import jsonschema
import numpy as np

from .algebra import Algebra, Element
from .errors import DimensionError, InputError
from .linalg import Tolerance

_COMPLEX = {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2}
_NESTED = {"type": "array"}

INSTANCE_SCHEMA = {
    "type": "object",
    "required": ["algebra"],
    "properties": {
        "algebra": {
            "oneOf": [
                {"type": "object", "required": ["kind", "sizes"],
                 "properties": {"kind": {"const": "blocks"},
                                "sizes": {"type": "array", "minItems": 1,
                                          "items": {"type": "integer", "minimum": 1}}}},
                {"type": "object", "required": ["kind", "dim", "table", "unit"],
                 "properties": {"kind": {"const": "structure"},
                                "dim": {"type": "integer", "minimum": 1},
                                "table": _NESTED,
                                "unit": {"type": "array", "items": _COMPLEX}}},
            ]
        },
        "elements": {
            "type": "object",
            "additionalProperties": {
                "oneOf": [
                    {"type": "object", "required": ["blocks"], "properties": {"blocks": _NESTED}},
                    {"type": "object", "required": ["coords"],
                     "properties": {"coords": {"type": "array", "items": _COMPLEX}}},
                ]
            },
        },
        "tolerances": {
            "type": "object",
            "additionalProperties": False,
            "properties": {k: {"type": "number", "exclusiveMinimum": 0}
                           for k in ("rank_tol", "cluster_tol", "residual_tol")},
        },
        "iso": {"type": "object"},
        "meta": {"type": "object"},
    },
}


def encode_complex(a):
    """Nested lists with every complex scalar as ``[re, im]``."""
    arr = np.asarray(a, dtype=complex)
    return np.stack([arr.real, arr.imag], axis=-1).tolist()


def decode_complex(data) -> np.ndarray:
    arr = np.asarray(data, dtype=float)
    if arr.ndim == 0 or arr.shape[-1] != 2:
        raise InputError("complex numbers must be [re, im] pairs")
    return arr[..., 0] + 1j * arr[..., 1]


@dataclass
class Instance:
    algebra: Algebra
    elements: dict = field(default_factory=dict)
    iso_doc: dict | None = None

    def element(self, name: str) -> Element:
        if name not in self.elements:
            known = ", ".join(sorted(self.elements)) or "none"
            raise InputError(f"no element named {name!r} (known: {known})")
        return self.elements[name]


def parse_json(text: str, source: str = "<input>"):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{source}: malformed JSON at line {exc.lineno}, column {exc.colno}: "
                         f"{exc.msg}") from exc


def read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc


def instance_from_document(doc, tol: Tolerance | None = None) -> Instance:
    try:
        jsonschema.validate(doc, INSTANCE_SCHEMA)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise InputError(f"instance does not match the schema at {where}: {exc.message}") from exc
    base = Tolerance(**doc["tolerances"]) if "tolerances" in doc else Tolerance()
    tol = tol or Tolerance.from_env(base)
    spec = doc["algebra"]
    if spec["kind"] == "blocks":
        alg = Algebra.blocks(spec["sizes"], tol=tol)
    else:
        d = spec["dim"]
        table = decode_complex(spec["table"])
        if table.shape != (d, d, d):
            raise DimensionError(f"table has shape {table.shape}, expected {(d, d, d)}")
        alg = Algebra.structure(table, decode_complex(spec["unit"]), tol=tol)
    elements = {}
    for name, payload in doc.get("elements", {}).items():
        if "blocks" in payload:
            if not alg.is_blocks:
                raise InputError(f"element {name!r}: block payload on a structure algebra")
            mats = [decode_complex(b) for b in payload["blocks"]]
            elements[name] = alg.from_blocks(mats)
        else:
            elements[name] = Element(alg, decode_complex(payload["coords"]))
    return Instance(alg, elements, doc.get("iso"))


def load_instance(path: str, tol: Tolerance | None = None) -> Instance:
    return instance_from_document(parse_json(read_text(path), path), tol)


def dumps(obj) -> str:
    """Deterministic JSON."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), default=_default)


def _default(o):
    if isinstance(o, (np.integer,)):
        return int(o)
    if isinstance(o, (np.floating,)):
        return float(o)
    if isinstance(o, (complex, np.complexfloating)):
        return [float(o.real), float(o.imag)]
    if isinstance(o, np.bool_):
        return bool(o)
    if isinstance(o, np.ndarray):
        return encode_complex(o) if np.iscomplexobj(o) else o.tolist()
    raise TypeError(f"cannot serialize {type(o).__name__}")
