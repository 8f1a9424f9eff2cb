"""Closed convex sets with support functions and metric projections.

The reference sets of the experiments: singletons, balls, boxes, polyhedra
given by inequality rows ``<a_i, z> <= b_i``, and convex hulls of finitely
many points.  Each set exposes

* ``support(d)``   -- the support function ``sup_{c in C} <c, d>``,
* ``project(x)``   -- the nearest point of the set,
* ``contains(x)``  -- membership up to a tolerance,
* ``sample(rng)``  -- random members, for audits over Fejer points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy.optimize import linprog, nnls

from .errors import DimensionMismatch, UnsupportedVariant
from .vectorspace import as_vector, norm


def _check_dim(x: np.ndarray, dim: int) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (dim,):
        raise DimensionMismatch(f"expected dim {dim}, got {x.shape}")
    return x


@dataclass(frozen=True, eq=False)
class Singleton:
    c: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "c", as_vector(self.c))

    @property
    def dim(self) -> int:
        return self.c.size

    def support(self, d) -> float:
        return float(np.dot(self.c, _check_dim(d, self.dim)))

    def project(self, x) -> np.ndarray:
        _check_dim(x, self.dim)
        return self.c.copy()

    def contains(self, x, tol: float = 0.0) -> bool:
        return norm(_check_dim(x, self.dim) - self.c) <= tol

    def sample(self, rng: np.random.Generator, count: int) -> np.ndarray:
        return np.tile(self.c, (count, 1))


@dataclass(frozen=True, eq=False)
class Ball:
    c: np.ndarray
    r: float

    def __post_init__(self):
        object.__setattr__(self, "c", as_vector(self.c))
        if not (math.isfinite(self.r) and self.r >= 0):
            raise ValueError(f"ball radius must be finite and >= 0, got {self.r}")
        object.__setattr__(self, "r", float(self.r))

    @property
    def dim(self) -> int:
        return self.c.size

    def support(self, d) -> float:
        d = _check_dim(d, self.dim)
        return float(np.dot(self.c, d)) + self.r * norm(d)

    def project(self, x) -> np.ndarray:
        x = _check_dim(x, self.dim)
        offset = x - self.c
        dist = norm(offset)
        if dist <= self.r:
            return x.copy()
        return self.c + (self.r / dist) * offset

    def contains(self, x, tol: float = 0.0) -> bool:
        return norm(_check_dim(x, self.dim) - self.c) <= self.r + tol

    def sample(self, rng: np.random.Generator, count: int) -> np.ndarray:
        g = rng.standard_normal((count, self.dim))
        g /= np.linalg.norm(g, axis=1, keepdims=True)
        radii = self.r * rng.random(count) ** (1.0 / self.dim)
        return self.c + radii[:, None] * g


@dataclass(frozen=True, eq=False)
class Box:
    lo: np.ndarray
    hi: np.ndarray

    def __post_init__(self):
        lo, hi = as_vector(self.lo), as_vector(self.hi)
        if lo.shape != hi.shape:
            raise DimensionMismatch("box bounds differ in dimension")
        if np.any(lo > hi):
            raise ValueError("box needs lo <= hi componentwise")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def dim(self) -> int:
        return self.lo.size

    def support(self, d) -> float:
        d = _check_dim(d, self.dim)
        return float(np.sum(np.maximum(self.lo * d, self.hi * d)))

    def project(self, x) -> np.ndarray:
        return np.clip(_check_dim(x, self.dim), self.lo, self.hi)

    def contains(self, x, tol: float = 0.0) -> bool:
        x = _check_dim(x, self.dim)
        return bool(np.all(x >= self.lo - tol) and np.all(x <= self.hi + tol))

    def rows(self) -> tuple[np.ndarray, np.ndarray]:
        """Inequality form: ``x_i <= hi_i`` and ``-x_i <= -lo_i`` for each i."""
        eye = np.eye(self.dim)
        A = np.empty((2 * self.dim, self.dim))
        b = np.empty(2 * self.dim)
        A[0::2], b[0::2] = eye, self.hi
        A[1::2], b[1::2] = -eye, -self.lo
        return A, b

    def sample(self, rng: np.random.Generator, count: int) -> np.ndarray:
        return self.lo + (self.hi - self.lo) * rng.random((count, self.dim))


@dataclass(frozen=True, eq=False)
class Polyhedron:
    """``{z : A z <= b}``; ``A`` has one nonzero row per constraint."""

    A: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        A = np.array(self.A, dtype=np.float64)
        b = np.array(self.b, dtype=np.float64).reshape(-1)
        if A.ndim != 2 or A.shape[0] != b.size or A.shape[0] == 0:
            raise DimensionMismatch(f"polyhedron rows/bounds mismatch: {A.shape} vs {b.shape}")
        if not (np.all(np.isfinite(A)) and np.all(np.isfinite(b))):
            raise ValueError("polyhedron data must be finite")
        if np.any(np.linalg.norm(A, axis=1) == 0):
            raise ValueError("polyhedron rows must be nonzero")
        A.setflags(write=False)
        b.setflags(write=False)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)

    @classmethod
    def from_rows(cls, rows) -> "Polyhedron":
        rows = list(rows)
        return cls(np.array([a for a, _ in rows], dtype=float), np.array([b for _, b in rows], dtype=float))

    @property
    def dim(self) -> int:
        return self.A.shape[1]

    def rows(self) -> tuple[np.ndarray, np.ndarray]:
        return self.A, self.b

    def support(self, d) -> float:
        d = _check_dim(d, self.dim)
        if not np.any(d):
            return 0.0 if self._feasible() else -math.inf
        res = linprog(-d, A_ub=self.A, b_ub=self.b, bounds=[(None, None)] * self.dim, method="highs")
        if res.status == 3:
            return math.inf
        if res.status == 2:
            return -math.inf
        if res.status != 0:
            raise RuntimeError(f"support LP failed: {res.message}")
        return float(-res.fun)

    def _feasible(self) -> bool:
        res = linprog(np.zeros(self.dim), A_ub=self.A, b_ub=self.b,
                      bounds=[(None, None)] * self.dim, method="highs")
        return res.status == 0

    def project(self, x) -> np.ndarray:
        x = _check_dim(x, self.dim)
        if np.all(self.A @ x <= self.b):
            return x.copy()
        # z = x + w with -A w >= A x - b; minimum-norm w is a least-distance program
        w = least_distance(-self.A, self.A @ x - self.b)
        z = x + w
        return _polish_projection(self.A, self.b, x, z)

    def contains(self, x, tol: float = 0.0) -> bool:
        return bool(np.all(self.A @ _check_dim(x, self.dim) <= self.b + tol))

    def sample(self, rng: np.random.Generator, count: int) -> np.ndarray:
        anchor = self.project(np.zeros(self.dim))
        raw = anchor + 2.0 * rng.standard_normal((count, self.dim))
        return np.array([self.project(p) for p in raw])


@dataclass(frozen=True, eq=False)
class PointCloudHull:
    vertices: np.ndarray

    def __post_init__(self):
        V = np.array(self.vertices, dtype=np.float64)
        if V.ndim != 2 or V.shape[0] == 0:
            raise ValueError("hull needs at least one vertex")
        if not np.all(np.isfinite(V)):
            raise ValueError("hull vertices must be finite")
        V.setflags(write=False)
        object.__setattr__(self, "vertices", V)

    @property
    def dim(self) -> int:
        return self.vertices.shape[1]

    def support(self, d) -> float:
        return float(np.max(self.vertices @ _check_dim(d, self.dim)))

    def project(self, x) -> np.ndarray:
        x = _check_dim(x, self.dim)
        weights = min_norm_point(self.vertices - x)
        return weights @ self.vertices

    def contains(self, x, tol: float = 0.0) -> bool:
        return norm(self.project(x) - np.asarray(x, dtype=float)) <= tol

    def sample(self, rng: np.random.Generator, count: int) -> np.ndarray:
        w = rng.dirichlet(np.ones(self.vertices.shape[0]), size=count)
        return w @ self.vertices


ConvexSetSpec = Union[Singleton, Ball, Box, Polyhedron, PointCloudHull]


def constraint_rows(Z) -> tuple[np.ndarray, np.ndarray]:
    """Inequality description of a Box or Polyhedron."""
    if isinstance(Z, (Box, Polyhedron)):
        return Z.rows()
    raise UnsupportedVariant(f"{type(Z).__name__} has no inequality description")


def least_distance(G: np.ndarray, h: np.ndarray) -> np.ndarray:
    """Minimum-norm ``w`` with ``G w >= h`` (Lawson & Hanson, LDP via NNLS)."""
    m, n = G.shape
    E = np.vstack([G.T, h[None, :]])
    f = np.zeros(n + 1)
    f[n] = 1.0
    u, _ = nnls(E, f, maxiter=50 * (m + n + 1))
    r = E @ u - f
    if norm(r) == 0.0 or r[n] >= 0.0:
        raise ValueError("least-distance program is infeasible")
    return -r[:n] / r[n]


def _polish_projection(A, b, x, z, active_tol: float = 1e-9) -> np.ndarray:
    """Re-solve the projection exactly on the constraints active at ``z``."""
    scale = 1.0 + np.abs(b)
    active = np.abs(A @ z - b) <= active_tol * scale
    if not np.any(active):
        return z
    As, bs = A[active], b[active]
    mult, *_ = np.linalg.lstsq(As @ As.T, As @ x - bs, rcond=None)
    if np.any(mult < -1e-12):
        return z
    polished = x - As.T @ mult
    if np.all(A @ polished <= b + 1e-13 * scale) and norm(polished - x) <= norm(z - x) + 1e-12:
        return polished
    return z


def min_norm_point(P: np.ndarray, tol: float = 1e-14, max_iter: int = 1000) -> np.ndarray:
    """Convex weights of the minimum-norm point of ``conv(rows of P)`` (Wolfe)."""
    m = P.shape[0]
    scale = max(1.0, float(np.max(np.sum(P * P, axis=1))))
    S = [int(np.argmin(np.sum(P * P, axis=1)))]
    w = np.array([1.0])
    for _ in range(max_iter):
        x = w @ P[S]
        j = int(np.argmin(P @ x))
        if float(x @ x) - float(P[j] @ x) <= tol * scale or j in S:
            break
        S.append(j)
        w = np.append(w, 0.0)
        while True:
            Q = P[S]
            k = len(S)
            K = np.zeros((k + 1, k + 1))
            K[0, 1:] = K[1:, 0] = 1.0
            K[1:, 1:] = Q @ Q.T
            rhs = np.zeros(k + 1)
            rhs[0] = 1.0
            alpha = np.linalg.lstsq(K, rhs, rcond=None)[0][1:]
            if np.all(alpha > tol):
                w = alpha
                break
            neg = (alpha <= tol) & (w - alpha > 0)
            ratios = w[neg] / (w[neg] - alpha[neg])
            theta = float(np.min(ratios)) if ratios.size else 1.0
            w = theta * alpha + (1.0 - theta) * w
            keep = w > tol
            S = [s for s, kk in zip(S, keep) if kk]
            w = w[keep]
            w /= w.sum()
    out = np.zeros(m)
    out[S] = w
    return out
