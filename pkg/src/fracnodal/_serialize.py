"""Deterministic JSON and CSV writers.

Floats print with 17 significant digits (round-trip exact), mapping keys
are sorted, and nothing time- or path-dependent is emitted, so repeated
runs with the same configuration produce byte-identical files.
"""

from __future__ import annotations

import json
import math

import numpy as np


def _fmt_float(x: float) -> str:
    if math.isnan(x) or math.isinf(x):
        raise ValueError(f"non-finite value {x} cannot be serialized deterministically")
    return format(x, ".17g")


def _render(obj) -> str:
    if obj is None:
        return "null"
    if isinstance(obj, bool) or isinstance(obj, np.bool_):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, np.ndarray):
        obj = obj.tolist()
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(_render(v) for v in obj) + "]"
    if isinstance(obj, dict):
        items = sorted(obj.items(), key=lambda kv: str(kv[0]))
        body = ", ".join(f"{json.dumps(str(k))}: {_render(v)}" for k, v in items)
        return "{" + body + "}"
    raise TypeError(f"cannot serialize {type(obj)!r}")


def dumps_canonical(obj) -> str:
    return _render(obj) + "\n"


def write_json(path, obj) -> str:
    with open(path, "w") as fh:
        fh.write(dumps_canonical(obj))
    return str(path)


def write_columns_csv(path, header: str, columns) -> str:
    """Write equal-length columns under a comma-separated header line."""
    arrays = [np.asarray(c) for c in columns]
    with open(path, "w") as fh:
        fh.write(header + "\n")
        for row in zip(*arrays):
            fh.write(",".join(_fmt_float(float(v)) for v in row) + "\n")
    return str(path)
