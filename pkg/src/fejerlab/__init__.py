"""Fejer monotone iteration laboratory.

Generate fixed-point traces of averaged and resolvent operators, certify
Fejer monotonicity, and measure the directions along which the iterates
approach their limit. Closed forms of the right-shift and rational-rotation
examples are checked exactly in :mod:`fejerlab.exact`.
"""

from .errors import FejerLabError
from .fejer import IterationTrace, iterate
from .operators import (
    KMAveraged,
    LinearResolvent,
    PlanarRotationAveraged,
    Projection,
    RightShiftAveraged,
    SkewResolvent,
    apply,
)
from .sets import Ball, Box, PointCloudHull, Polyhedron, Singleton

__all__ = [
    "FejerLabError",
    "IterationTrace",
    "iterate",
    "KMAveraged",
    "LinearResolvent",
    "PlanarRotationAveraged",
    "Projection",
    "RightShiftAveraged",
    "SkewResolvent",
    "apply",
    "Ball",
    "Box",
    "PointCloudHull",
    "Polyhedron",
    "Singleton",
]
