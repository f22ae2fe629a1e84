"""JSON and CSV interchange for superoperators, subspaces and reports."""

from __future__ import annotations

import csv
import dataclasses
import io
import json
from enum import Enum

import numpy as np

from .liouville_space import VECTORIZATION, LiouvilleSubspace, SuperOp

FORMAT_VERSION = 1


def _complex_rows(m: np.ndarray) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(m, dtype=complex)]


def _from_pairs(rows) -> np.ndarray:
    a = np.asarray(rows, dtype=float)
    if a.ndim != 3 or a.shape[-1] != 2:
        raise ValueError("expected a nested list of [re, im] pairs")
    return a[..., 0] + 1j * a[..., 1]


def superop_to_dict(s: SuperOp) -> dict:
    return {
        "type": "SuperOp",
        "version": FORMAT_VERSION,
        "vectorization": VECTORIZATION,
        "hdim": s.hdim,
        "label": s.label,
        "entries": _complex_rows(s.matrix),
    }


def superop_from_dict(d: dict) -> SuperOp:
    if d.get("type") != "SuperOp":
        raise ValueError("document is not a SuperOp")
    if d.get("vectorization") != VECTORIZATION:
        raise ValueError(f"unsupported vectorization {d.get('vectorization')!r}")
    return SuperOp(_from_pairs(d["entries"]), d.get("label", ""))


def subspace_to_dict(v: LiouvilleSubspace) -> dict:
    return {
        "type": "LiouvilleSubspace",
        "version": FORMAT_VERSION,
        "vectorization": VECTORIZATION,
        "tol": v.tol,
        "basis": [_complex_rows(b) for b in v.basis],
    }


def subspace_from_dict(d: dict) -> LiouvilleSubspace:
    if d.get("type") != "LiouvilleSubspace":
        raise ValueError("document is not a LiouvilleSubspace")
    if d.get("vectorization") != VECTORIZATION:
        raise ValueError(f"unsupported vectorization {d.get('vectorization')!r}")
    return LiouvilleSubspace([_from_pairs(b) for b in d["basis"]], d.get("tol", 1e-10))


def to_jsonable(obj):
    """Recursively convert reports, arrays and numpy scalars to plain JSON types."""
    if isinstance(obj, SuperOp):
        return superop_to_dict(obj)
    if isinstance(obj, LiouvilleSubspace):
        return subspace_to_dict(obj)
    if hasattr(obj, "to_dict"):
        return to_jsonable(obj.to_dict())
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: to_jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        if np.iscomplexobj(obj):
            return to_jsonable(np.stack([obj.real, obj.imag], axis=-1))
        return obj.tolist()
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    return obj


def dumps(obj) -> str:
    # repr-based float output is the shortest string that round-trips exactly.
    return json.dumps(to_jsonable(obj), indent=2, sort_keys=True, allow_nan=True) + "\n"


def fmt(x: float) -> str:
    return format(float(x), ".17g")


def series_csv(header, rows) -> str:
    """CSV text with floats at 17 significant digits; ``\\n`` line endings."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(x) if isinstance(x, (float, np.floating)) else x for x in row])
    return buf.getvalue()


def read_series_csv(text: str) -> tuple[list[str], np.ndarray]:
    rows = list(csv.reader(io.StringIO(text)))
    return rows[0], np.array([[float(x) for x in r] for r in rows[1:]])
