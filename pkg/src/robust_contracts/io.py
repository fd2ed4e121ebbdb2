"""JSON instance files.

Plain instance::

    {"n": 2, "m": 2, "F": [[1, 0], [0, 1]], "r": [0, 1], "c": [0, 0],
     "action_labels": ["shirk", "work"]}            # labels optional

Typed instance (one entry per agent type, shared rewards)::

    {"n": 2, "m": 2, "r": [0, 1],
     "types": [{"F": [[1, 0], [0, 1]], "c": [0, 0]}, ...],
     "lambda": [0.5, 0.5]}
"""
from __future__ import annotations

import json
from pathlib import Path
from typing import Union

import numpy as np

from .model import Instance, TypedInstance, ValidationReport, validate_instance, validate_typed

Problem = Union[Instance, TypedInstance]


def _matrix(value, name: str, rep: ValidationReport):
    if not isinstance(value, list) or not value or not all(isinstance(row, list) for row in value):
        rep.errors.append(f"{name} must be a nonempty list of rows")
        return None
    widths = {len(row) for row in value}
    if len(widths) != 1:
        for k, row in enumerate(value):
            if len(row) != len(value[0]):
                rep.errors.append(f"{name} row {k} has {len(row)} entries, row 0 has {len(value[0])}")
        return None
    try:
        return np.array(value, dtype=float)
    except (TypeError, ValueError):
        rep.errors.append(f"{name} has non-numeric entries")
        return None


def _vector(value, name: str, rep: ValidationReport):
    if not isinstance(value, list):
        rep.errors.append(f"{name} must be a list")
        return None
    try:
        return np.array(value, dtype=float)
    except (TypeError, ValueError):
        rep.errors.append(f"{name} has non-numeric entries")
        return None


def _declared_dims(doc: dict, F: np.ndarray, rep: ValidationReport, prefix: str = "") -> None:
    for key, actual in (("n", F.shape[0]), ("m", F.shape[1])):
        if key in doc and doc[key] != actual:
            rep.errors.append(f"{prefix}dimension mismatch: declared {key}={doc[key]}, F implies {actual}")


def parse_document(doc: dict) -> tuple[Problem | None, ValidationReport]:
    """Build an instance from a decoded document and validate it."""
    rep = ValidationReport()
    if not isinstance(doc, dict):
        rep.errors.append("instance document must be a JSON object")
        return None, rep
    if "types" in doc:
        return _parse_typed(doc, rep)
    missing = [k for k in ("F", "r", "c") if k not in doc]
    if missing:
        rep.errors.append(f"missing keys: {', '.join(missing)}")
        return None, rep
    F = _matrix(doc["F"], "F", rep)
    r = _vector(doc["r"], "r", rep)
    c = _vector(doc["c"], "c", rep)
    if rep.errors:
        return None, rep
    _declared_dims(doc, F, rep)
    inst = Instance(F, r, c, doc.get("action_labels"), doc.get("outcome_labels"))
    rep.extend(validate_instance(inst))
    return inst, rep


def _parse_typed(doc: dict, rep: ValidationReport):
    missing = [k for k in ("r", "types", "lambda") if k not in doc]
    if missing:
        rep.errors.append(f"missing keys: {', '.join(missing)}")
        return None, rep
    r = _vector(doc["r"], "r", rep)
    lam = _vector(doc["lambda"], "lambda", rep)
    if not isinstance(doc["types"], list) or not doc["types"]:
        rep.errors.append("types must be a nonempty list")
        return None, rep
    types = []
    for t, entry in enumerate(doc["types"]):
        if not isinstance(entry, dict) or "F" not in entry or "c" not in entry:
            rep.errors.append(f"type {t}: needs keys F and c")
            continue
        F = _matrix(entry["F"], f"type {t}: F", rep)
        c = _vector(entry["c"], f"type {t}: c", rep)
        if F is not None and c is not None and r is not None:
            _declared_dims(doc, F, rep, prefix=f"type {t}: ")
            types.append(Instance(F, r, c))
    if rep.errors:
        return None, rep
    tinst = TypedInstance(tuple(types), lam)
    rep.extend(validate_typed(tinst))
    return tinst, rep


def load(path: str | Path) -> tuple[Problem | None, ValidationReport]:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        rep = ValidationReport()
        rep.errors.append(f"not valid JSON: {exc}")
        return None, rep
    return parse_document(doc)


def to_document(obj: Problem) -> dict:
    if isinstance(obj, TypedInstance):
        return {
            "n": obj.n,
            "m": obj.m,
            "r": obj.r.tolist(),
            "types": [{"F": t.F.tolist(), "c": t.c.tolist()} for t in obj.types],
            "lambda": obj.lam.tolist(),
        }
    doc = {"n": obj.n, "m": obj.m, "F": obj.F.tolist(), "r": obj.r.tolist(), "c": obj.c.tolist()}
    if obj.action_labels is not None:
        doc["action_labels"] = list(obj.action_labels)
    if obj.outcome_labels is not None:
        doc["outcome_labels"] = list(obj.outcome_labels)
    return doc


def dump(obj: Problem, path: str | Path) -> None:
    Path(path).write_text(json.dumps(to_document(obj), indent=1) + "\n")
