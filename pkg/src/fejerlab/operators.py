"""Gallery of firmly nonexpansive and averaged operators.

All operators are immutable and callable: ``op(x)`` is the same as
``apply(op, x)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

import numpy as np

from .errors import DimensionMismatch, SingularSystem, TruncationOverflow, UnsupportedVariant
from .sets import ConvexSetSpec
from .vectorspace import norm

MATRIX_TOL = 1e-12


def rotation_matrix(alpha: float) -> np.ndarray:
    c, s = math.cos(alpha), math.sin(alpha)
    return np.array([[c, -s], [s, c]])


def _as_square(M) -> np.ndarray:
    M = np.array(M, dtype=np.float64)
    if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] == 0:
        raise DimensionMismatch(f"expected a square matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise ValueError("matrix entries must be finite")
    M.setflags(write=False)
    return M


def _check_input(x, dim: int) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (dim,):
        raise DimensionMismatch(f"operator acts on dim {dim}, got {x.shape}")
    return x


@dataclass(frozen=True, eq=False)
class PlanarRotationAveraged:
    """``T = 1/2 Id + 1/2 R_{2 theta}`` on the plane, which equals ``cos(theta) R_theta``.

    ``turns`` records theta as an exact fraction of a full turn when the
    experiment specifies it that way; ``theta`` is always the float angle.
    """

    theta: float
    turns: Optional[Fraction] = None

    def __post_init__(self):
        if not math.isfinite(self.theta):
            raise ValueError("theta must be finite")
        object.__setattr__(self, "_double", rotation_matrix(2.0 * self.theta))

    @classmethod
    def from_turns(cls, num: int, den: int) -> "PlanarRotationAveraged":
        turns = Fraction(num, den)
        return cls(theta=2.0 * math.pi * float(turns), turns=turns)

    dim = 2

    def __call__(self, x) -> np.ndarray:
        x = _check_input(x, 2)
        return 0.5 * x + 0.5 * (self._double @ x)

    def isometry(self, x) -> np.ndarray:
        return self._double @ _check_input(x, 2)


@dataclass(frozen=True, eq=False)
class SkewResolvent:
    """Resolvent of a linear ``A`` with ``A^T = A^{-1} = -A``: ``J x = 1/2 x - 1/2 A x``."""

    A: np.ndarray

    def __post_init__(self):
        A = _as_square(self.A)
        eye = np.eye(A.shape[0])
        if np.max(np.abs(A.T + A)) > MATRIX_TOL or np.max(np.abs(A.T @ A - eye)) > MATRIX_TOL:
            raise ValueError("SkewResolvent needs A^T = -A and A^T A = I")
        object.__setattr__(self, "A", A)

    @property
    def dim(self) -> int:
        return self.A.shape[0]

    def __call__(self, x) -> np.ndarray:
        x = _check_input(x, self.dim)
        return 0.5 * x - 0.5 * (self.A @ x)

    def isometry(self, x) -> np.ndarray:
        # J = 1/2 Id + 1/2 (-A) and -A is again an isometry
        return -(self.A @ _check_input(x, self.dim))


@dataclass(frozen=True, eq=False)
class RightShiftAveraged:
    """``T = 1/2 Id + 1/2 R`` with ``R`` the right shift, truncated to ``trunc`` coordinates."""

    trunc: int

    def __post_init__(self):
        if int(self.trunc) != self.trunc or self.trunc < 1:
            raise ValueError(f"truncation must be a positive integer, got {self.trunc}")

    @property
    def dim(self) -> int:
        return self.trunc

    def __call__(self, x) -> np.ndarray:
        x = _check_input(x, self.trunc)
        return 0.5 * x + 0.5 * self.isometry(x)

    def isometry(self, x) -> np.ndarray:
        x = _check_input(x, self.trunc)
        if x[-1] != 0.0:
            raise TruncationOverflow(
                f"right shift would move mass past coordinate {self.trunc}; increase the truncation"
            )
        out = np.zeros_like(x)
        out[1:] = x[:-1]
        return out


@dataclass(frozen=True, eq=False)
class LinearResolvent:
    """``J_M = (Id + M)^{-1}`` for a monotone matrix ``M``."""

    M: np.ndarray

    def __post_init__(self):
        M = _as_square(self.M)
        # <Mx, x> >= -tol ||x||^2 for all x  <=>  symmetric part has no eigenvalue below -tol
        if np.min(np.linalg.eigvalsh(0.5 * (M + M.T))) < -MATRIX_TOL:
            raise ValueError("LinearResolvent needs a monotone matrix")
        object.__setattr__(self, "M", M)

    @property
    def dim(self) -> int:
        return self.M.shape[0]

    def __call__(self, x) -> np.ndarray:
        return solve_shifted(self.M, _check_input(x, self.dim))


@dataclass(frozen=True, eq=False)
class Projection:
    set: ConvexSetSpec

    @property
    def dim(self) -> int:
        return self.set.dim

    def __call__(self, x) -> np.ndarray:
        return self.set.project(_check_input(x, self.dim))


@dataclass(frozen=True, eq=False)
class KMAveraged:
    """Krasnoselskii-Mann relaxation ``(1 - lam) Id + lam * base``."""

    base: "OperatorSpec"
    lam: float

    def __post_init__(self):
        if not 0.0 < self.lam <= 1.0:
            raise ValueError(f"KM parameter must lie in (0, 1], got {self.lam}")

    @property
    def dim(self) -> int:
        return self.base.dim

    def __call__(self, x) -> np.ndarray:
        x = _check_input(x, self.dim)
        return (1.0 - self.lam) * x + self.lam * self.base(x)


OperatorSpec = Union[
    PlanarRotationAveraged, SkewResolvent, RightShiftAveraged, LinearResolvent, Projection, KMAveraged
]


def apply(op: OperatorSpec, x) -> np.ndarray:
    return op(x)


def solve_shifted(M: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Solve ``(I + M) y = x`` by LU with partial pivoting."""
    K = np.eye(M.shape[0]) + M
    if np.linalg.cond(K) > 1e12:
        raise SingularSystem("I + M is numerically singular")
    try:
        return np.linalg.solve(K, x)
    except np.linalg.LinAlgError as exc:
        raise SingularSystem(str(exc)) from exc


def resolvent_formula_check(A, x) -> float:
    """Distance between ``(I + A)^{-1} x`` and the closed form ``1/2 x - 1/2 A x``."""
    J = SkewResolvent(A)
    x = _check_input(x, J.dim)
    return norm(solve_shifted(J.A, x) - J(x))


def orthogonality_defect(op: OperatorSpec, x) -> float:
    """``|<T x, x - T x>|``, which vanishes for ``T = 1/2 Id + 1/2 (isometry)``."""
    if not isinstance(op, (PlanarRotationAveraged, SkewResolvent, RightShiftAveraged)):
        raise UnsupportedVariant(f"orthogonality defect undefined for {type(op).__name__}")
    x = np.asarray(x, dtype=np.float64)
    Tx = op(x)
    return abs(float(np.dot(Tx, x - Tx)))
