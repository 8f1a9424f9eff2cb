"""Exact rational verification of the shift and rational-rotation examples.

The averaged right shift ``T = 1/2 Id + 1/2 R`` started at ``e_1`` has the
closed form ``x_n = 2^{-n} sum_k C(n, k) e_{k+1}``; everything here is
computed with Python integers and :class:`fractions.Fraction`, so identities
are checked with zero tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Mapping

import numpy as np

from .errors import DegenerateTheta


def binomial(n: int, k: int) -> int:
    """Exact ``C(n, k)`` by the multiplicative formula; 0 outside ``0 <= k <= n``."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if k < 0 or k > n:
        return 0
    k = min(k, n - k)
    c = 1
    for i in range(1, k + 1):
        c = c * (n - k + i) // i
    return c


def binomial_row(n: int) -> list[int]:
    """``[C(n, 0), ..., C(n, n)]``."""
    row = [1]
    for k in range(n):
        row.append(row[-1] * (n - k) // (k + 1))
    return row


def vandermonde_check(m: int, n: int, r: int) -> bool:
    """``C(m+n, r) == sum_k C(m, k) C(n, r-k)``, exactly."""
    if min(m, n, r) < 0:
        raise ValueError("m, n, r must be >= 0")
    return binomial(m + n, r) == sum(binomial(m, k) * binomial(n, r - k) for k in range(r + 1))


class QVector(Mapping):
    """Sparse exact vector over the basis ``e_1, e_2, ...`` (indices start at 1)."""

    __slots__ = ("_entries",)

    def __init__(self, entries=None):
        clean = {}
        for k, v in dict(entries or {}).items():
            if int(k) != k or k < 1:
                raise ValueError(f"basis indices start at 1, got {k}")
            v = Fraction(v)
            if v != 0:
                clean[int(k)] = v
        self._entries = clean

    def __getitem__(self, k: int) -> Fraction:
        return self._entries.get(k, Fraction(0))

    def __iter__(self) -> Iterator[int]:
        return iter(sorted(self._entries))

    def __len__(self) -> int:
        return len(self._entries)

    def __contains__(self, k) -> bool:
        return k in self._entries

    def __eq__(self, other) -> bool:
        if isinstance(other, QVector):
            return self._entries == other._entries
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self._entries.items()))

    def __repr__(self) -> str:
        body = ", ".join(f"{k}: {v}" for k, v in sorted(self._entries.items()))
        return f"QVector({{{body}}})"

    def __sub__(self, other: "QVector") -> "QVector":
        keys = set(self._entries) | set(other._entries)
        return QVector({k: self[k] - other[k] for k in keys})

    def __add__(self, other: "QVector") -> "QVector":
        keys = set(self._entries) | set(other._entries)
        return QVector({k: self[k] + other[k] for k in keys})

    def scale(self, c) -> "QVector":
        c = Fraction(c)
        return QVector({k: c * v for k, v in self._entries.items()})

    def dot(self, other: "QVector") -> Fraction:
        small, big = sorted((self._entries, other._entries), key=len)
        return sum((v * big[k] for k, v in small.items() if k in big), Fraction(0))

    def norm_sq(self) -> Fraction:
        return sum((v * v for v in self._entries.values()), Fraction(0))

    def support(self) -> frozenset:
        return frozenset(self._entries)

    def to_array(self, dim: int) -> np.ndarray:
        out = np.zeros(dim)
        for k, v in self._entries.items():
            if k > dim:
                raise ValueError(f"entry at index {k} does not fit in dim {dim}")
            out[k - 1] = float(v)
        return out


def right_shift_exact(v: QVector) -> QVector:
    return QVector({k + 1: c for k, c in v.items()})


def shift_step_exact(v: QVector) -> QVector:
    """One exact application of ``1/2 Id + 1/2 R``."""
    return (v + right_shift_exact(v)).scale(Fraction(1, 2))


def shift_iterate_exact(n: int) -> QVector:
    """``x_n`` from the binomial closed form: ``e_{k+1} -> C(n, k) / 2^n``."""
    if n < 0:
        raise ValueError("n must be >= 0")
    den = 2**n
    return QVector({k + 1: Fraction(c, den) for k, c in enumerate(binomial_row(n))})


def shift_norm_sq_exact(n: int) -> Fraction:
    return Fraction(binomial(2 * n, n), 4**n)


def shift_inner_exact(n: int) -> Fraction:
    """Closed form of ``<x_n, x_{n+1}>``."""
    return Fraction(binomial(2 * n + 1, n), 2 * 4**n)


def shift_diff_norm_sq_exact(n: int) -> Fraction:
    """Closed form of ``||x_n - x_{n+1}||^2 = ||x_n||^2 / (2(n+1))``."""
    return shift_norm_sq_exact(n) / (2 * (n + 1))


def shift_diff_norm_sq_expanded(n: int) -> Fraction:
    """``||x_n||^2 + ||x_{n+1}||^2 - 2 <x_n, x_{n+1}>`` from the closed forms."""
    return shift_norm_sq_exact(n) + shift_norm_sq_exact(n + 1) - 2 * shift_inner_exact(n)


def shift_orthogonality_exact(n: int) -> Fraction:
    """``<x_{n+1}, x_n - x_{n+1}>`` by direct exact arithmetic."""
    xn, xn1 = shift_iterate_exact(n), shift_iterate_exact(n + 1)
    return xn1.dot(xn - xn1)


def shift_coordinate_sq(n: int, k: int) -> Fraction:
    """Square of the ``k``-th coordinate of ``x_n / ||x_n||``: ``C(n, k-1)^2 / C(2n, n)``."""
    if k < 1:
        raise ValueError("k starts at 1")
    return Fraction(binomial(n, k - 1) ** 2, binomial(2 * n, n))


def shift_coordinate_proxy(n: int, k: int) -> float:
    """``k``-th coordinate of ``x_n / ||x_n||``, i.e. ``C(n, k-1) / sqrt(C(2n, n))``."""
    if k < 1:
        raise ValueError("k starts at 1")
    num = binomial(n, k - 1)
    if num == 0:
        return 0.0
    # logs of big ints stay finite where the ratio itself would underflow
    return math.exp(math.log(num) - 0.5 * math.log(binomial(2 * n, n)))


def shift_step_numerators(n: int) -> list[int]:
    """Integer coordinates of ``2^{n+1} (x_n - x_{n+1})``: ``C(n, k) - C(n, k-1)``, k = 0..n+1."""
    row = binomial_row(n) + [0]
    return [row[k] - (row[k - 1] if k else 0) for k in range(n + 2)]


def step_direction_coordinate_sq(n: int, k: int) -> Fraction:
    """Square of the ``k``-th coordinate of ``(x_n - x_{n+1}) / ||x_n - x_{n+1}||``."""
    nums = shift_step_numerators(n)
    total = sum(c * c for c in nums)
    c = nums[k - 1] if 1 <= k <= len(nums) else 0
    return Fraction(c * c, total)


def stirling_ratio(n: int) -> float:
    """``sqrt(pi n) C(2n, n) / 4^n``, which tends to 1 (like ``1 - 1/(8n)``).

    ``C(2n, n) / 4^n = prod_{j<=n} (2j - 1)/(2j)`` is accumulated as a sum of
    logarithms, so large ``n`` neither overflows nor loses precision.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    log_central = math.fsum(math.log1p(-1.0 / (2 * j)) for j in range(1, n + 1))
    return math.exp(0.5 * math.log(math.pi * n) + log_central)


@dataclass(frozen=True)
class RotationClusters:
    """Distinct directions of the normalized rational-rotation iterates.

    ``angles`` are offsets from the direction of ``x_0`` as reduced fractions
    of a full turn, sorted ascending.
    """

    count: int
    angles: tuple
    period: int
    cos_sign: int


def cos_sign_of_turns(turns: Fraction) -> int:
    """Exact sign of ``cos(2 pi turns)``."""
    t = turns % 1
    if t in (Fraction(1, 4), Fraction(3, 4)):
        return 0
    return 1 if (t < Fraction(1, 4) or t > Fraction(3, 4)) else -1


def rational_rotation_cluster_count(k: int, l: int) -> RotationClusters:
    """Enumerate the directions of ``sign(cos theta)^n R_{n theta} x_0/||x_0||`` for ``theta = 2 pi k / l``.

    The state ``(n mod 2, n theta mod 2 pi)`` is followed exactly until it
    repeats; the distinct angles seen over that period are the cluster points.
    """
    if l <= 0:
        raise ValueError("l must be positive")
    turns = Fraction(k, l)
    sign = cos_sign_of_turns(turns)
    if sign == 0:
        raise DegenerateTheta(f"cos(2 pi * {turns}) = 0")
    flip = Fraction(1, 2) if sign < 0 else Fraction(0)
    seen_states = set()
    angles = set()
    n = 0
    while True:
        state = (n % 2 if sign < 0 else 0, (n * turns) % 1)
        if state in seen_states:
            break
        seen_states.add(state)
        angles.add((n * turns + n * flip) % 1)
        n += 1
    return RotationClusters(len(angles), tuple(sorted(angles)), n, sign)


def fraction_str(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"
