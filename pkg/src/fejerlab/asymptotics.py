"""Directional behaviour of convergent Fejer monotone traces.

For a trace converging to ``zbar`` two unit-direction sequences are formed,

    step directions     (x_n - x_{n+1}) / ||x_n - x_{n+1}||
    to-limit directions (x_n - zbar)    / ||x_n - zbar||

and their tails are measured against the reference set ``Z``: the polar
residual ``sigma_Z(d) - <zbar, d>`` (nonpositive exactly on the polar cone of
``Z - zbar``) and the distance to the unit normal cone at ``zbar``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Optional, Sequence

import numpy as np
from scipy.optimize import nnls

from .errors import AllDegenerate, EmptyTail, NotARay, UnsupportedVariant, ZbarNotInSet
from .fejer import IterationTrace
from .sets import Ball, Box, ConvexSetSpec, Polyhedron, Singleton, constraint_rows
from .vectorspace import ZERO_TOL, angle_of, as_vector, norm, unit_direction

DEFAULT_TAIL_FRACTION = 0.5
DEFAULT_EPSILON = 1e-2
DEFAULT_ACTIVE_TOL = 1e-8
PAIR_GRID_POINTS = 64


class Kind(str, Enum):
    STEP_DIFF = "step_diff"
    TO_LIMIT = "to_limit"


@dataclass(frozen=True, eq=False)
class DirectionRecord:
    n: int
    kind: Kind
    dir: np.ndarray
    polar_residual: float
    ncone_dist: Optional[float] = None


@dataclass(frozen=True, eq=False)
class Directions:
    """Direction records of one trace plus the number of skipped degenerate indices."""

    records: list
    skipped_step: int
    skipped_limit: int

    def __iter__(self):
        return iter(self.records)

    def __len__(self) -> int:
        return len(self.records)

    def of_kind(self, kind: Kind) -> list:
        return [r for r in self.records if r.kind == kind]


def support_function(Z: ConvexSetSpec, d) -> float:
    return Z.support(d)


def polar_residual(Z: ConvexSetSpec, zbar, d) -> float:
    """``sigma_{Z - zbar}(d)``; at most 0 iff ``d`` is in the polar cone of ``Z - zbar``."""
    s = Z.support(d)
    if math.isinf(s):
        return s
    return s - float(np.dot(zbar, d))


def normal_cone_generators(Z: ConvexSetSpec, zbar, active_tol: float = DEFAULT_ACTIVE_TOL) -> np.ndarray:
    """Unit generators of ``N_Z(zbar)`` as rows; zero rows means ``N_Z(zbar) = {0}``."""
    zbar = as_vector(zbar)
    if isinstance(Z, (Box, Polyhedron)):
        A, b = constraint_rows(Z)
        lhs = A @ zbar
        worst = float(np.max(lhs - b))
        if worst > active_tol:
            raise ZbarNotInSet(f"zbar violates a constraint by {worst:.3e}")
        active = lhs >= b - active_tol
        G = A[active]
        return G / np.linalg.norm(G, axis=1, keepdims=True)
    if isinstance(Z, Ball):
        offset = zbar - Z.c
        dist = norm(offset)
        if dist > Z.r + active_tol:
            raise ZbarNotInSet(f"zbar lies {dist - Z.r:.3e} outside the ball")
        if Z.r > active_tol and dist >= Z.r - active_tol:
            return (offset / dist)[None, :]
        if Z.r > active_tol:
            return np.zeros((0, Z.dim))
        Z = Singleton(Z.c)
    if isinstance(Z, Singleton):
        if norm(zbar - Z.c) > active_tol:
            raise ZbarNotInSet("zbar differs from the singleton's point")
        eye = np.eye(Z.dim)
        return np.vstack([eye, -eye])
    raise UnsupportedVariant(f"normal cone of {type(Z).__name__} is not supported")


def _is_whole_space(generators: np.ndarray) -> bool:
    k, dim = generators.shape
    if k != 2 * dim:
        return False
    eye = np.eye(dim)
    return bool(np.array_equal(generators, np.vstack([eye, -eye])))


def cone_sphere_distance(d, generators: np.ndarray) -> float:
    """Distance from a unit vector ``d`` to ``S ∩ cone(generators)``."""
    d = np.asarray(d, dtype=np.float64)
    if generators.shape[0] == 0:
        return math.inf
    if _is_whole_space(generators):
        return 0.0
    mu, _ = nnls(generators.T, d)
    p = generators.T @ mu
    if norm(p) > 1e-12:
        return norm(d - p / norm(p))
    # d lies in the polar of the cone: search the extreme rays and sampled 2-ray arcs
    best = min(norm(d - g) for g in generators)
    ts = np.linspace(0.0, 1.0, PAIR_GRID_POINTS)
    k = generators.shape[0]
    for i in range(k):
        for j in range(i + 1, k):
            arc = (1.0 - ts)[:, None] * generators[i] + ts[:, None] * generators[j]
            lengths = np.linalg.norm(arc, axis=1)
            ok = lengths > 1e-12
            if np.any(ok):
                units = arc[ok] / lengths[ok, None]
                best = min(best, float(np.min(np.linalg.norm(units - d, axis=1))))
    return best


def normal_cone_distance(Z: ConvexSetSpec, zbar, d, active_tol: float = DEFAULT_ACTIVE_TOL) -> float:
    """Distance from ``d`` to the unit sphere intersected with ``N_Z(zbar)``.

    Returns ``inf`` when the normal cone is trivial (``zbar`` interior).
    """
    return cone_sphere_distance(d, normal_cone_generators(Z, zbar, active_tol))


def direction_sequences(trace: IterationTrace, zbar, Z: Optional[ConvexSetSpec] = None,
                        active_tol: float = DEFAULT_ACTIVE_TOL) -> Directions:
    """Step and to-limit unit directions of ``trace`` with their diagnostics.

    Indices whose difference vector is shorter than the trace's ``stop_tol``
    (or too small to normalize) are skipped and counted. ``Z`` defaults to
    ``{zbar}``, for which every polar residual is 0. Normal-cone distances are
    filled in when ``Z`` admits a normal-cone description at ``zbar``.
    """
    zbar = as_vector(zbar)
    if Z is None:
        Z = Singleton(zbar)
    try:
        gens = normal_cone_generators(Z, zbar, active_tol)
    except (UnsupportedVariant, ZbarNotInSet):
        gens = None
    pts = trace.points
    threshold = max(trace.stop_tol, ZERO_TOL)

    def record(n, kind, vec):
        d = unit_direction(vec)
        nc = None if gens is None else cone_sphere_distance(d, gens)
        return DirectionRecord(n, kind, d, polar_residual(Z, zbar, d), nc)

    records = []
    skipped_step = skipped_limit = 0
    for n in range(len(trace)):
        if n + 1 < len(trace):
            step = pts[n] - pts[n + 1]
            if norm(step) >= threshold and norm(step) > ZERO_TOL:
                records.append(record(n, Kind.STEP_DIFF, step))
            else:
                skipped_step += 1
        gap = pts[n] - zbar
        if norm(gap) >= threshold and norm(gap) > ZERO_TOL:
            records.append(record(n, Kind.TO_LIMIT, gap))
        else:
            skipped_limit += 1
    if not records:
        raise AllDegenerate("every step and to-limit difference is degenerate")
    return Directions(records, skipped_step, skipped_limit)


def _select(records: Iterable[DirectionRecord], kind: Optional[Kind]) -> list:
    records = list(records)
    return records if kind is None else [r for r in records if r.kind == kind]


def tail(records: Sequence[DirectionRecord], tail_fraction: float = DEFAULT_TAIL_FRACTION,
         kind: Optional[Kind] = None) -> list:
    """The last ``ceil(tail_fraction * N)`` records (optionally of one kind)."""
    if not 0.0 < tail_fraction <= 1.0:
        raise ValueError(f"tail_fraction must lie in (0, 1], got {tail_fraction}")
    chosen = _select(records, kind)
    count = math.ceil(tail_fraction * len(chosen))
    if count == 0:
        raise EmptyTail("no direction records in the tail")
    return chosen[len(chosen) - count:]


@dataclass(frozen=True, eq=False)
class ClusterEstimate:
    representatives: np.ndarray
    counts: list
    epsilon: float

    def __len__(self) -> int:
        return len(self.counts)


def cluster_directions(records: Sequence[DirectionRecord], tail_fraction: float = DEFAULT_TAIL_FRACTION,
                       epsilon: float = DEFAULT_EPSILON, kind: Optional[Kind] = None) -> ClusterEstimate:
    """Greedy chordal ``epsilon``-clustering of the tail directions.

    Directions are visited in index order and join the first cluster whose
    seed is within ``epsilon``; otherwise they open a new cluster.
    Representatives are normalized cluster means, and clusters whose
    representatives end up closer than ``epsilon`` are merged.
    """
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    dirs = np.array([r.dir for r in tail(records, tail_fraction, kind)])
    n, dim = dirs.shape
    seeds = np.empty((n, dim))
    sums = np.zeros((n, dim))
    counts = np.zeros(n, dtype=int)
    k = 0
    for d in dirs:
        hit = np.flatnonzero(np.linalg.norm(seeds[:k] - d, axis=1) <= epsilon)
        i = hit[0] if hit.size else k
        if i == k:
            seeds[k] = d
            k += 1
        sums[i] += d
        counts[i] += 1
    sums, counts = sums[:k], list(counts[:k])
    reps = sums / np.linalg.norm(sums, axis=1, keepdims=True)
    while len(reps) > 1:
        close = np.linalg.norm(reps[:, None, :] - reps[None, :, :], axis=2) < epsilon
        close[np.tril_indices(len(reps))] = False
        pairs = np.argwhere(close)
        if pairs.size == 0:
            break
        i, j = pairs[0]
        sums[i] += sums[j]
        counts[i] += counts[j]
        sums = np.delete(sums, j, axis=0)
        del counts[j]
        reps = sums / np.linalg.norm(sums, axis=1, keepdims=True)
    return ClusterEstimate(reps, [int(c) for c in counts], epsilon)


def max_angular_gap(records: Sequence[DirectionRecord], tail_fraction: float = DEFAULT_TAIL_FRACTION,
                    kind: Optional[Kind] = None) -> float:
    """Largest circular gap, in degrees, between consecutive tail direction angles."""
    angles = sorted(angle_of(r.dir) for r in tail(records, tail_fraction, kind))
    gaps = np.diff(angles)
    wrap = 360.0 - angles[-1] + angles[0]
    return float(max(wrap, np.max(gaps))) if gaps.size else 360.0


def limsup_polar_residual(records: Sequence[DirectionRecord], tail_fraction: float = DEFAULT_TAIL_FRACTION,
                          kind: Optional[Kind] = None) -> float:
    """Max polar residual over the tail: the finite-trace stand-in for the limsup."""
    return max(r.polar_residual for r in tail(records, tail_fraction, kind))


def running_tail_max(values) -> np.ndarray:
    """``out[n] = max(values[n:])``."""
    return np.maximum.accumulate(np.asarray(values, dtype=np.float64)[::-1])[::-1]


def tail_mean_ncone(records: Sequence[DirectionRecord], tail_fraction: float = DEFAULT_TAIL_FRACTION,
                    kind: Optional[Kind] = None) -> float:
    vals = [r.ncone_dist for r in tail(records, tail_fraction, kind)]
    if any(v is None for v in vals):
        raise UnsupportedVariant("records carry no normal-cone distances")
    return float(np.mean(vals))


@dataclass(frozen=True, eq=False)
class NoZigzagReport:
    limit_dir: np.ndarray
    max_dev_stepdiff: float
    max_dev_tolimit: float
    final_dev_stepdiff: float
    final_dev_tolimit: float


def no_zigzag_check(trace: IterationTrace, zbar, Z: ConvexSetSpec,
                    tail_fraction: float = DEFAULT_TAIL_FRACTION,
                    active_tol: float = DEFAULT_ACTIVE_TOL) -> NoZigzagReport:
    """Deviation of both direction sequences from the ray generator of ``N_Z(zbar)``."""
    gens = normal_cone_generators(Z, zbar, active_tol)
    if gens.shape[0] != 1:
        raise NotARay(f"normal cone at zbar has {gens.shape[0]} generators, expected exactly 1")
    g = gens[0]
    dirs = direction_sequences(trace, zbar, Z, active_tol)

    def deviations(kind):
        recs = tail(dirs.records, tail_fraction, kind)
        devs = [norm(r.dir - g) for r in recs]
        return max(devs), devs[-1]

    max_step, final_step = deviations(Kind.STEP_DIFF)
    max_limit, final_limit = deviations(Kind.TO_LIMIT)
    return NoZigzagReport(g, max_step, max_limit, final_step, final_limit)
