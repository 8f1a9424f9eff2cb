"""Experiment configuration: a single JSON document per run.

Example::

    {
      "experiment": "rotation",
      "operator": {"theta": {"turns": {"num": 1, "den": 5}}},
      "x0": [1, 0],
      "max_steps": 2000,
      "stop_tol": 1e-290,
      "Z": {"type": "singleton", "c": [0, 0]},
      "zbar": [0, 0],
      "analysis": {"tail_fraction": 0.5, "epsilon": 1e-3, "active_tol": 1e-8},
      "seed": 0
    }

``zbar`` is a vector, ``"auto"`` (the final trace point) or ``"origin"``.
``theta`` is either ``{"turns": {"num": k, "den": l}}`` (a rational multiple
of a full turn) or ``{"radians": v}``; the two are never inferred from each
other.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

import numpy as np

from .errors import ConfigError
from .operators import (
    KMAveraged,
    OperatorSpec,
    PlanarRotationAveraged,
    Projection,
    RightShiftAveraged,
    SkewResolvent,
)
from .sets import Ball, Box, ConvexSetSpec, PointCloudHull, Polyhedron, Singleton

EXPERIMENTS = ("rotation", "skew", "shift", "project", "oracle")


@dataclass(frozen=True)
class Analysis:
    tail_fraction: float = 0.5
    epsilon: float = 1e-2
    active_tol: float = 1e-8
    audit_window: int = 10
    fejer_samples: int = 16


@dataclass(frozen=True, eq=False)
class ExperimentConfig:
    name: str
    experiment: str
    operator: Optional[OperatorSpec]
    x0: Optional[np.ndarray]
    max_steps: int
    stop_tol: float
    Z: Optional[ConvexSetSpec]
    zbar: Any  # vector or "auto"
    analysis: Analysis
    seed: int
    output_dir: Optional[str]
    mode: str = "float"
    oracle_max_n: int = 200
    expect: dict = field(default_factory=dict)


def _number(value, where: str) -> float:
    if isinstance(value, bool):
        raise ConfigError(f"{where}: expected a number, got a boolean")
    if isinstance(value, (int, float)):
        out = float(value)
    elif isinstance(value, str):
        try:
            out = float(value)
        except ValueError:
            raise ConfigError(f"{where}: cannot parse {value!r} as a decimal") from None
    else:
        raise ConfigError(f"{where}: expected a number, got {type(value).__name__}")
    if not math.isfinite(out):
        raise ConfigError(f"{where}: value must be finite")
    return out


def _integer(value, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{where}: expected an integer, got {value!r}")
    return value


def _vector(value, where: str) -> np.ndarray:
    if not isinstance(value, list) or not value:
        raise ConfigError(f"{where}: expected a nonempty list of numbers")
    return np.array([_number(v, f"{where}[{i}]") for i, v in enumerate(value)])


def _matrix(value, where: str) -> np.ndarray:
    if not isinstance(value, list) or not value or not all(isinstance(r, list) for r in value):
        raise ConfigError(f"{where}: expected a list of rows")
    rows = [_vector(r, f"{where}[{i}]") for i, r in enumerate(value)]
    if len({r.size for r in rows}) != 1:
        raise ConfigError(f"{where}: rows have different lengths")
    return np.array(rows)


def parse_set(spec, where: str = "Z") -> ConvexSetSpec:
    if not isinstance(spec, dict) or "type" not in spec:
        raise ConfigError(f"{where}: expected an object with a 'type' field")
    kind = spec["type"]
    try:
        if kind == "singleton":
            return Singleton(_vector(spec.get("c"), f"{where}.c"))
        if kind == "ball":
            return Ball(_vector(spec.get("c"), f"{where}.c"), _number(spec.get("r"), f"{where}.r"))
        if kind == "box":
            return Box(_vector(spec.get("lo"), f"{where}.lo"), _vector(spec.get("hi"), f"{where}.hi"))
        if kind == "polyhedron":
            rows = spec.get("rows")
            if not isinstance(rows, list) or not rows:
                raise ConfigError(f"{where}.rows: expected a nonempty list of {{a, b}} objects")
            A = np.array([_vector(r.get("a"), f"{where}.rows[{i}].a") for i, r in enumerate(rows)])
            b = np.array([_number(r.get("b"), f"{where}.rows[{i}].b") for i, r in enumerate(rows)])
            return Polyhedron(A, b)
        if kind == "hull":
            return PointCloudHull(_matrix(spec.get("vertices"), f"{where}.vertices"))
    except ConfigError:
        raise
    except (ValueError, TypeError, AttributeError) as exc:
        raise ConfigError(f"{where}: {exc}") from None
    raise ConfigError(f"{where}.type: unknown set type {kind!r}")


def _parse_theta(spec) -> PlanarRotationAveraged:
    if not isinstance(spec, dict) or len(spec) != 1:
        raise ConfigError("operator.theta: expected exactly one of 'turns' or 'radians'")
    if "turns" in spec:
        turns = spec["turns"]
        if not isinstance(turns, dict):
            raise ConfigError("operator.theta.turns: expected {num, den}")
        num = _integer(turns.get("num"), "operator.theta.turns.num")
        den = _integer(turns.get("den"), "operator.theta.turns.den")
        if den <= 0:
            raise ConfigError("operator.theta.turns.den: must be positive")
        return PlanarRotationAveraged.from_turns(num, den)
    if "radians" in spec:
        return PlanarRotationAveraged(_number(spec["radians"], "operator.theta.radians"))
    raise ConfigError("operator.theta: expected 'turns' or 'radians'")


def _parse_operator(experiment: str, spec: dict, max_steps: int) -> tuple[Optional[OperatorSpec], str]:
    mode = "float"
    try:
        if experiment == "rotation":
            return _parse_theta(spec.get("theta")), mode
        if experiment == "skew":
            return SkewResolvent(_matrix(spec.get("matrix"), "operator.matrix")), mode
        if experiment == "shift":
            mode = spec.get("mode", "exact")
            if mode not in ("exact", "float"):
                raise ConfigError("operator.mode: expected 'exact' or 'float'")
            trunc = spec.get("truncation", "auto")
            trunc = max_steps + 2 if trunc == "auto" else _integer(trunc, "operator.truncation")
            return RightShiftAveraged(trunc), mode
        if experiment == "project":
            proj = Projection(parse_set(spec.get("set"), "operator.set"))
            lam = _number(spec.get("lambda", 1.0), "operator.lambda")
            return (proj if lam == 1.0 else KMAveraged(proj, lam)), mode
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(f"operator: {exc}") from None
    return None, mode


def parse_config(doc: Any, name: str = "experiment") -> ExperimentConfig:
    """Validate a decoded JSON document and build the experiment objects."""
    if not isinstance(doc, dict) or not doc:
        raise ConfigError("config: expected a nonempty JSON object")
    experiment = doc.get("experiment")
    if experiment not in EXPERIMENTS:
        raise ConfigError(f"experiment: expected one of {EXPERIMENTS}, got {experiment!r}")

    seed = _integer(doc.get("seed", 0), "seed")
    out = doc.get("output", {}).get("dir") if isinstance(doc.get("output"), dict) else None
    an = doc.get("analysis", {})
    if not isinstance(an, dict):
        raise ConfigError("analysis: expected an object")
    analysis = Analysis(
        tail_fraction=_number(an.get("tail_fraction", 0.5), "analysis.tail_fraction"),
        epsilon=_number(an.get("epsilon", 1e-2), "analysis.epsilon"),
        active_tol=_number(an.get("active_tol", 1e-8), "analysis.active_tol"),
        audit_window=_integer(an.get("audit_window", 10), "analysis.audit_window"),
        fejer_samples=_integer(an.get("fejer_samples", 16), "analysis.fejer_samples"),
    )
    if not 0.0 < analysis.tail_fraction <= 1.0:
        raise ConfigError("analysis.tail_fraction: must lie in (0, 1]")
    if analysis.epsilon <= 0:
        raise ConfigError("analysis.epsilon: must be positive")
    expect = doc.get("expect", {})
    if not isinstance(expect, dict):
        raise ConfigError("expect: expected an object")

    if experiment == "oracle":
        max_n = _integer(doc.get("max_n", 200), "max_n")
        return ExperimentConfig(name, experiment, None, None, 0, 0.0, None, None, analysis,
                                seed, out, "exact", max_n, expect)

    max_steps = _integer(doc.get("max_steps"), "max_steps")
    if max_steps < 1:
        raise ConfigError("max_steps: must be >= 1")
    stop_tol = _number(doc.get("stop_tol", 1e-14), "stop_tol")
    if stop_tol < 0:
        raise ConfigError("stop_tol: must be >= 0")
    op_spec = doc.get("operator")
    if not isinstance(op_spec, dict):
        raise ConfigError("operator: expected an object")
    op, mode = _parse_operator(experiment, op_spec, max_steps)

    if experiment == "shift" and "x0" not in doc:
        x0 = np.zeros(op.dim)
        x0[0] = 1.0
    else:
        x0 = _vector(doc.get("x0"), "x0")
    if x0.size != op.dim:
        raise ConfigError(f"x0: has dim {x0.size}, operator acts on dim {op.dim}")

    if "Z" in doc:
        Z = parse_set(doc["Z"])
    elif experiment == "project":
        Z = op.set if isinstance(op, Projection) else op.base.set
    else:
        Z = Singleton(np.zeros(op.dim))
    if Z.dim != op.dim:
        raise ConfigError(f"Z: has dim {Z.dim}, operator acts on dim {op.dim}")

    zbar = doc.get("zbar", "auto")
    if zbar == "origin":
        zbar = np.zeros(op.dim)
    elif zbar != "auto":
        zbar = _vector(zbar, "zbar")
        if zbar.size != op.dim:
            raise ConfigError(f"zbar: has dim {zbar.size}, operator acts on dim {op.dim}")

    return ExperimentConfig(name, experiment, op, x0, max_steps, stop_tol, Z, zbar, analysis,
                            seed, out, mode, max_steps, expect)


def load_config(path) -> ExperimentConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    if not text.strip():
        raise ConfigError(f"config {path} is empty")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from None
    return parse_config(doc, name=path.stem)
