"""Fixed-point iteration traces and Fejer-monotonicity certificates."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DimensionMismatch, IndexOutOfRange, NotAFejerPoint
from .operators import OperatorSpec
from .vectorspace import as_vector, norm, row_norms

DEFAULT_STOP_TOL = 1e-14


class StopReason(str, Enum):
    MAX_STEPS = "max_steps"
    STEP_BELOW_TOL = "step_below_tol"


@dataclass(frozen=True, eq=False)
class IterationTrace:
    """Points ``x_0 .. x_N`` of ``x_{n+1} = T x_n`` with their step lengths."""

    points: np.ndarray
    operator: OperatorSpec
    stop_reason: StopReason
    step_norms: np.ndarray
    stop_tol: float = DEFAULT_STOP_TOL

    def __len__(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    @property
    def norms(self) -> np.ndarray:
        return row_norms(self.points)

    def fejer_tol(self) -> float:
        """Default tolerance for Fejer checks, scaled by the starting point."""
        return 1e-12 * (1.0 + norm(self.points[0]))

    def subsequence(self, indices) -> "IterationTrace":
        idx = np.asarray(indices, dtype=int)
        pts = self.points[idx]
        return IterationTrace(
            points=pts,
            operator=self.operator,
            stop_reason=self.stop_reason,
            step_norms=row_norms(pts[:-1] - pts[1:]),
            stop_tol=self.stop_tol,
        )


def trace_from_points(points, operator=None, stop_tol: float = DEFAULT_STOP_TOL) -> IterationTrace:
    """Wrap an explicit sequence (e.g. a closed-form one) as a trace."""
    pts = np.array(points, dtype=np.float64)
    if pts.ndim != 2 or pts.shape[0] == 0:
        raise DimensionMismatch("points must form a nonempty (N+1, d) array")
    pts.setflags(write=False)
    return IterationTrace(
        points=pts,
        operator=operator,
        stop_reason=StopReason.MAX_STEPS,
        step_norms=row_norms(pts[:-1] - pts[1:]),
        stop_tol=stop_tol,
    )


def iterate(op: OperatorSpec, x0, max_steps: int, stop_tol: float = DEFAULT_STOP_TOL) -> IterationTrace:
    """Run ``x_{n+1} = op(x_n)`` for at most ``max_steps`` steps.

    Stops early, keeping the last computed point, once a step is shorter
    than ``stop_tol``.
    """
    if max_steps < 1:
        raise ValueError("max_steps must be >= 1")
    x = as_vector(x0)
    points = [x]
    steps = []
    reason = StopReason.MAX_STEPS
    for _ in range(max_steps):
        y = np.asarray(op(x), dtype=np.float64)
        step = norm(x - y)
        points.append(y)
        steps.append(step)
        x = y
        if step < stop_tol:
            reason = StopReason.STEP_BELOW_TOL
            break
    pts = np.array(points)
    pts.setflags(write=False)
    return IterationTrace(pts, op, reason, np.array(steps), stop_tol)


@dataclass(frozen=True, eq=False)
class Halfspace:
    """``{z : <a, z> <= b}``."""

    a: np.ndarray
    b: float

    def slack(self, z) -> float:
        return self.b - float(np.dot(self.a, z))

    def contains(self, z, tol: float = 0.0) -> bool:
        return self.slack(z) >= -tol


def largest_fejer_halfspaces(trace: IterationTrace) -> list[Halfspace]:
    """Halfspaces whose intersection is the largest Fejer set of the trace.

    Each consecutive pair contributes
    ``2 <x_n - x_{n+1}, z> <= ||x_n||^2 - ||x_{n+1}||^2``; pairs closer than
    the trace's ``stop_tol`` are dropped.
    """
    if len(trace) < 2:
        raise ValueError("need at least two points")
    pts = trace.points
    sq = np.einsum("ij,ij->i", pts, pts)
    out = []
    for n in range(len(trace) - 1):
        if trace.step_norms[n] < trace.stop_tol or trace.step_norms[n] == 0.0:
            continue
        a = 2.0 * (pts[n] - pts[n + 1])
        a.setflags(write=False)
        out.append(Halfspace(a, float(sq[n] - sq[n + 1])))
    return out


def fejer_violation(trace: IterationTrace, z) -> float:
    """``max_n (||x_{n+1} - z|| - ||x_n - z||)``; at most ``tol`` for Fejer points."""
    z = np.asarray(z, dtype=np.float64)
    if z.shape != (trace.dim,):
        raise DimensionMismatch(f"point has dim {z.size}, trace has dim {trace.dim}")
    if len(trace) < 2:
        return -np.inf
    dist = row_norms(trace.points - z)
    return float(np.max(dist[1:] - dist[:-1]))


def is_fejer_point(trace: IterationTrace, z, tol: float | None = None) -> bool:
    tol = trace.fejer_tol() if tol is None else tol
    return fejer_violation(trace, z) <= tol


@dataclass(frozen=True)
class FejerSlacks:
    """Right side minus left side of the four Fejer inequalities at ``(n, m)``.

    ``consecutive``   ``1/2(||x_n-zb||^2 - ||x_{n+1}-zb||^2) - <x_n-x_{n+1}, z-zb>``
    ``identity``      residual of the polarization identity (should be 0)
    ``cauchy_schwarz`` slack of bounding the inner product by Cauchy-Schwarz
    ``telescoped``    ``1/2(||x_n-zb||^2 - ||x_m-zb||^2) - <x_n-x_m, z-zb>``
    """

    consecutive: float
    identity: float
    cauchy_schwarz: float
    telescoped: float

    def ok(self, tol: float = 1e-10) -> bool:
        return (
            self.consecutive >= -tol
            and abs(self.identity) <= tol
            and self.cauchy_schwarz >= -tol
            and self.telescoped >= -tol
        )


def audit_fejer_inequalities(trace: IterationTrace, z, zbar, n: int, m: int,
                             fejer_tol: float | None = None) -> FejerSlacks:
    """Check the consecutive and telescoped Fejer inequalities for ``z`` about ``zbar``."""
    if not (0 <= n and n + 1 <= m < len(trace)):
        raise IndexOutOfRange(f"need 0 <= n < m < {len(trace)}, got n={n}, m={m}")
    z = np.asarray(z, dtype=np.float64)
    zbar = np.asarray(zbar, dtype=np.float64)
    if zbar.shape != (trace.dim,):
        raise DimensionMismatch("zbar dimension does not match the trace")
    tol = trace.fejer_tol() if fejer_tol is None else fejer_tol
    violation = fejer_violation(trace, z)
    if violation > tol:
        raise NotAFejerPoint(f"z is not a Fejer point of the trace (violation {violation:.3e})")

    xn, xn1, xm = trace.points[n], trace.points[n + 1], trace.points[m]
    step = xn - xn1
    w = z - zbar
    half_drop = 0.5 * (np.dot(xn - zbar, xn - zbar) - np.dot(xn1 - zbar, xn1 - zbar))
    polarized = np.dot(xn1 - zbar, step) + 0.5 * np.dot(step, step)
    bounded = norm(xn1 - zbar) * norm(step) + 0.5 * np.dot(step, step)
    telescoped = 0.5 * (np.dot(xn - zbar, xn - zbar) - np.dot(xm - zbar, xm - zbar)) - np.dot(xn - xm, w)
    return FejerSlacks(
        consecutive=float(half_drop - np.dot(step, w)),
        identity=float(half_drop - polarized),
        cauchy_schwarz=float(bounded - polarized),
        telescoped=float(telescoped),
    )


def audit_trace(trace: IterationTrace, z, zbar, window: int = 10,
                fejer_tol: float | None = None) -> FejerSlacks:
    """Worst slacks of :func:`audit_fejer_inequalities` over all ``n < m <= n + window``.

    Returns the minimum of each one-sided slack and the largest absolute
    identity residual.
    """
    z = np.asarray(z, dtype=np.float64)
    zbar = np.asarray(zbar, dtype=np.float64)
    if len(trace) < 2:
        raise IndexOutOfRange("audit needs at least two points")
    tol = trace.fejer_tol() if fejer_tol is None else fejer_tol
    violation = fejer_violation(trace, z)
    if violation > tol:
        raise NotAFejerPoint(f"z is not a Fejer point of the trace (violation {violation:.3e})")

    P = trace.points - zbar
    w = z - zbar
    sq = np.einsum("ij,ij->i", P, P)
    steps = P[:-1] - P[1:]
    step_sq = np.einsum("ij,ij->i", steps, steps)
    half_drop = 0.5 * (sq[:-1] - sq[1:])
    polarized = np.einsum("ij,ij->i", P[1:], steps) + 0.5 * step_sq
    bounded = row_norms(P[1:]) * row_norms(steps) + 0.5 * step_sq
    consecutive = half_drop - steps @ w

    proj = P @ w
    telescoped = np.inf
    for gap in range(1, min(window, len(trace) - 1) + 1):
        t = 0.5 * (sq[:-gap] - sq[gap:]) - (proj[:-gap] - proj[gap:])
        telescoped = min(telescoped, float(np.min(t)))
    return FejerSlacks(
        consecutive=float(np.min(consecutive)),
        identity=float(np.max(np.abs(half_drop - polarized))),
        cauchy_schwarz=float(np.min(bounded - polarized)),
        telescoped=telescoped,
    )
