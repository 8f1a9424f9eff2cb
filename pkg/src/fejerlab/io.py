"""CSV and JSON artifacts.

Floats are written with ``repr`` (shortest round-trip decimal) so every file
re-parses to the identical binary value and reruns are byte-identical.
"""

from __future__ import annotations

import csv
import json
import math
from fractions import Fraction
from pathlib import Path

import numpy as np

from .asymptotics import Directions
from .errors import SummaryError
from .fejer import IterationTrace


def fmt(x) -> str:
    if x is None:
        return ""
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return repr(x)


def write_trace_csv(trace: IterationTrace, path) -> None:
    """Columns ``n, x_0 .. x_{d-1}, norm, step_norm`` (empty step_norm on the last row)."""
    norms = trace.norms
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["n"] + [f"x_{i}" for i in range(trace.dim)] + ["norm", "step_norm"])
        for n, p in enumerate(trace.points):
            step = trace.step_norms[n] if n < len(trace.step_norms) else None
            w.writerow([n] + [fmt(v) for v in p] + [fmt(norms[n]), fmt(step)])


def read_trace_csv(path) -> np.ndarray:
    """Points of a trace CSV, parsed back to floats."""
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    dim = len(rows[0]) - 3
    return np.array([[float(v) for v in r[1:1 + dim]] for r in rows[1:]])


def write_directions_csv(directions: Directions, path) -> None:
    """Columns ``n, kind, d_0 .. d_{k-1}, polar_residual, ncone_dist``."""
    dim = directions.records[0].dir.size
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["n", "kind"] + [f"d_{i}" for i in range(dim)] + ["polar_residual", "ncone_dist"])
        for r in directions.records:
            w.writerow([r.n, r.kind.value] + [fmt(v) for v in r.dir] + [fmt(r.polar_residual), fmt(r.ncone_dist)])


def jsonable(obj):
    """Convert numpy values, fractions and non-finite floats to strict-JSON types."""
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    if isinstance(obj, Fraction):
        return f"{obj.numerator}/{obj.denominator}"
    return obj


def write_json(obj, path) -> None:
    text = json.dumps(jsonable(obj), indent=2, sort_keys=True, allow_nan=False)
    Path(path).write_text(text + "\n")


def read_json(path) -> dict:
    path = Path(path)
    try:
        return json.loads(path.read_text())
    except FileNotFoundError:
        raise SummaryError(f"summary not found: {path}") from None
    except (OSError, json.JSONDecodeError) as exc:
        raise SummaryError(f"cannot parse summary {path}: {exc}") from None
