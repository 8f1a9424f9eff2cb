import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fejerlab.errors import DegenerateTheta
from fejerlab.exact import (
    QVector,
    binomial,
    binomial_row,
    rational_rotation_cluster_count,
    shift_coordinate_proxy,
    shift_coordinate_sq,
    shift_diff_norm_sq_exact,
    shift_diff_norm_sq_expanded,
    shift_inner_exact,
    shift_iterate_exact,
    shift_norm_sq_exact,
    shift_orthogonality_exact,
    shift_step_exact,
    step_direction_coordinate_sq,
    stirling_ratio,
    vandermonde_check,
)
from fejerlab.operators import PlanarRotationAveraged
from fejerlab.fejer import iterate

F = Fraction


def factorial_binomial(n, k):
    if k < 0 or k > n:
        return 0
    return math.factorial(n) // (math.factorial(k) * math.factorial(n - k))


def test_binomial_examples():
    assert binomial(5, 2) == 10
    assert binomial(7, 0) == 1
    assert binomial(3, 5) == 0 and binomial(3, -1) == 0
    c = binomial(200, 100)
    assert len(str(c)) == 59
    assert c == factorial_binomial(200, 100)


@given(st.integers(0, 300), st.integers(-3, 303))
def test_binomial_matches_factorial_oracle(n, k):
    assert binomial(n, k) == factorial_binomial(n, k)


@given(st.integers(0, 120))
def test_binomial_row(n):
    assert binomial_row(n) == [factorial_binomial(n, k) for k in range(n + 1)]


def test_vandermonde_examples():
    assert vandermonde_check(2, 2, 2)
    assert vandermonde_check(9, 4, 0)
    assert vandermonde_check(3, 4, 2)
    assert binomial(7, 2) == 6 + 12 + 3


@given(st.integers(0, 50), st.integers(0, 50), st.integers(0, 50))
def test_vandermonde_property(m, n, r):
    assert vandermonde_check(m, n, r)


def test_qvector_invariants():
    v = QVector({1: F(1, 2), 2: 0, 3: F(-1, 4)})
    assert len(v) == 2 and 2 not in v
    assert v[2] == 0
    assert (v - v) == QVector()
    with pytest.raises(ValueError):
        QVector({0: 1})


def test_shift_iterate_examples():
    assert shift_iterate_exact(0) == QVector({1: 1})
    assert shift_iterate_exact(1) == QVector({1: F(1, 2), 2: F(1, 2)})
    assert shift_iterate_exact(2) == QVector({1: F(1, 4), 2: F(1, 2), 3: F(1, 4)})


def test_shift_iterate_matches_exact_steps():
    x = QVector({1: 1})
    for n in range(40):
        assert x == shift_iterate_exact(n)
        assert len(x) == n + 1
        x_next = shift_step_exact(x)
        assert x_next != x
        x = x_next


def test_shift_norm_sq_examples():
    assert shift_norm_sq_exact(0) == 1
    assert shift_norm_sq_exact(1) == F(1, 2)
    assert shift_norm_sq_exact(2) == F(3, 8)


def test_shift_inner_examples():
    assert shift_inner_exact(0) == F(1, 2)
    assert shift_inner_exact(1) == F(3, 8)
    assert shift_inner_exact(2) == F(5, 16)
    for n in range(6):
        assert shift_inner_exact(n) == shift_iterate_exact(n).dot(shift_iterate_exact(n + 1))


def test_shift_diff_examples():
    assert shift_diff_norm_sq_exact(0) == F(1, 2)
    assert shift_diff_norm_sq_exact(1) == F(1, 8)
    assert shift_diff_norm_sq_exact(2) == F(1, 16)
    for n in range(6):
        direct = (shift_iterate_exact(n) - shift_iterate_exact(n + 1)).norm_sq()
        assert direct == shift_diff_norm_sq_exact(n) == shift_diff_norm_sq_expanded(n)


def test_shift_orthogonality_examples():
    for n in (0, 1, 10):
        assert shift_orthogonality_exact(n) == 0


def test_shift_coordinate_proxy_examples():
    assert shift_coordinate_proxy(0, 1) == 1
    assert shift_coordinate_proxy(2, 1) == pytest.approx(1 / math.sqrt(6), rel=1e-14)
    assert shift_coordinate_proxy(50, 1) < 1e-14
    assert shift_coordinate_sq(2, 1) == F(1, 6)
    assert shift_coordinate_proxy(3, 9) == 0


@given(st.integers(0, 60))
def test_normalized_iterate_has_unit_norm(n):
    assert sum(shift_coordinate_sq(n, k) for k in range(1, n + 2)) == 1
    assert sum(step_direction_coordinate_sq(n, k) for k in range(1, n + 3)) == 1


def test_stirling_examples():
    assert stirling_ratio(1) == pytest.approx(math.sqrt(math.pi) / 2, rel=1e-14)
    assert abs(stirling_ratio(100) - 1) <= 2e-3
    assert abs(stirling_ratio(10_000) - 1) <= 2e-5
    # leading correction
    assert stirling_ratio(100) == pytest.approx(1 - 1 / 800, abs=1e-5)


@given(st.integers(1, 60))
def test_stirling_matches_exact_central_binomial(n):
    exact = math.sqrt(math.pi * n) * binomial(2 * n, n) / 4**n
    assert stirling_ratio(n) == pytest.approx(exact, rel=1e-12)


def brute_force_count(k, l, steps=400):
    """Distinct angles of the normalized float iterates, rounded to 1e-6 of a turn."""
    tr = iterate(PlanarRotationAveraged.from_turns(k, l), [1, 0], steps, stop_tol=0.0)
    seen = set()
    for x in tr.points:
        a = (math.atan2(x[1], x[0]) / (2 * math.pi)) % 1
        seen.add(round(a, 6) % 1)
    return len(seen)


def test_rotation_count_examples():
    assert rational_rotation_cluster_count(1, 5).count == 5
    assert rational_rotation_cluster_count(1, 12).count == 12
    r = rational_rotation_cluster_count(1, 3)
    assert r.count == 6 and r.cos_sign == -1
    assert rational_rotation_cluster_count(2, 6).count == 6
    with pytest.raises(DegenerateTheta):
        rational_rotation_cluster_count(1, 4)


@pytest.mark.parametrize("k,l", [(1, 5), (1, 12), (1, 3), (2, 6), (2, 5), (3, 7), (5, 8)])
def test_rotation_count_matches_brute_force(k, l):
    assert rational_rotation_cluster_count(k, l).count == brute_force_count(k, l)


def test_rotation_k2_counts_frozen():
    # theta = 4 pi / 5 has cos < 0, so the sign flip doubles the orbit
    r = rational_rotation_cluster_count(2, 5)
    assert r.cos_sign == -1 and r.count == 10
    # with cos > 0 and k = 2 the orbit has l points only for odd l
    assert [rational_rotation_cluster_count(2, l).count for l in range(9, 17)] == [9, 5, 11, 6, 13, 7, 15, 8]


@given(st.integers(1, 30), st.integers(0, 60))
def test_rotation_count_bounds(l, k):
    try:
        r = rational_rotation_cluster_count(k, l)
    except DegenerateTheta:
        return
    assert r.count <= (l if r.cos_sign > 0 else 2 * l)
    assert len(set(r.angles)) == r.count
