"""Dense finite-dimensional vectors.

Vectors are plain 1-D ``float64`` numpy arrays; the helpers here add the
validation and the handful of geometric primitives the rest of the package
relies on.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import DimensionMismatch, ZeroVector

ZERO_TOL = 1e-300
UNIT_TOL = 1e-12


def as_vector(values) -> np.ndarray:
    """Coerce ``values`` to a finite 1-D float array (copied, read-only)."""
    v = np.array(values, dtype=np.float64)
    if v.ndim != 1 or v.size == 0:
        raise DimensionMismatch(f"expected a nonempty 1-D vector, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise ValueError("vector entries must be finite")
    v.setflags(write=False)
    return v


def basis_vector(k: int, dim: int) -> np.ndarray:
    """The ``k``-th standard basis vector (0-based) of R^dim."""
    e = np.zeros(dim)
    e[k] = 1.0
    e.setflags(write=False)
    return e


def _check_dims(u: np.ndarray, v: np.ndarray) -> None:
    if u.shape != v.shape:
        raise DimensionMismatch(f"dimension mismatch: {u.shape[0]} vs {v.shape[0]}")


def inner_product(u, v) -> float:
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    _check_dims(u, v)
    return float(np.dot(u, v))


def norm(v) -> float:
    v = np.asarray(v, dtype=np.float64)
    scale = float(np.max(np.abs(v))) if v.size else 0.0
    if scale == 0.0 or not np.isfinite(scale):
        return scale
    # squaring entries near 1e-160 and below would underflow without the rescale
    return scale * float(np.sqrt(np.dot(v / scale, v / scale)))


def row_norms(P) -> np.ndarray:
    """Euclidean norm of each row, rescaled like :func:`norm`."""
    P = np.asarray(P, dtype=np.float64)
    scale = np.max(np.abs(P), axis=1) if P.shape[1] else np.zeros(P.shape[0])
    safe = np.where(scale > 0, scale, 1.0)
    Q = P / safe[:, None]
    return scale * np.sqrt(np.einsum("ij,ij->i", Q, Q))


def distance(u, v) -> float:
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    _check_dims(u, v)
    return norm(u - v)


def unit_direction(v, zero_tol: float = ZERO_TOL) -> np.ndarray:
    """Return ``v / ||v||``.

    Raises
    ------
    ZeroVector
        If ``||v|| <= zero_tol``.
    """
    v = np.asarray(v, dtype=np.float64)
    n = norm(v)
    if not n > zero_tol:
        raise ZeroVector(f"cannot normalize vector of norm {n!r}")
    d = v / n
    d.setflags(write=False)
    return d


def is_unit(d, tol: float = UNIT_TOL) -> bool:
    return abs(norm(d) - 1.0) <= tol


def chordal_distance(d1, d2) -> float:
    """Euclidean distance between two unit vectors."""
    return distance(d1, d2)


def angle_of(d) -> float:
    """Polar angle of a planar direction in degrees, normalized to [0, 360)."""
    d = np.asarray(d, dtype=np.float64)
    if d.shape != (2,):
        raise DimensionMismatch(f"angle_of needs a planar vector, got dim {d.size}")
    deg = math.degrees(math.atan2(d[1], d[0])) % 360.0
    # -0.0 and values rounding up to 360.0 both fold back to 0
    return 0.0 if deg >= 360.0 or deg == 0.0 else deg
