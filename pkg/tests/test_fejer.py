import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fejerlab.errors import IndexOutOfRange, NotAFejerPoint
from fejerlab.fejer import (
    StopReason,
    audit_fejer_inequalities,
    audit_trace,
    fejer_violation,
    is_fejer_point,
    iterate,
    largest_fejer_halfspaces,
    trace_from_points,
)
from fejerlab.operators import KMAveraged, PlanarRotationAveraged, Projection, SkewResolvent
from fejerlab.sets import Ball, Box, Singleton

J2 = np.array([[0.0, 1.0], [-1.0, 0.0]])
HALVING = trace_from_points([[1, 0], [0.5, 0], [0.25, 0]])


def test_iterate_rotation_halves_norm():
    tr = iterate(PlanarRotationAveraged(math.pi / 3), [1, 0], 5)
    np.testing.assert_allclose(tr.norms, [2.0**-n for n in range(6)], rtol=1e-14)
    assert tr.stop_reason is StopReason.MAX_STEPS


def test_iterate_projection_onto_point_stops():
    tr = iterate(Projection(Singleton(np.zeros(2))), [3, -1], 10)
    assert len(tr) == 3
    np.testing.assert_array_equal(tr.points[1], [0, 0])
    assert tr.stop_reason is StopReason.STEP_BELOW_TOL


def test_iterate_skew_norms():
    tr = iterate(SkewResolvent(J2), [1, 0], 20)
    np.testing.assert_allclose(tr.norms, [2.0 ** (-n / 2) for n in range(21)], rtol=1e-13)


def test_trace_invariants():
    op = KMAveraged(Projection(Ball(np.zeros(3), 1.0)), 0.7)
    tr = iterate(op, [3, 1, -2], 50)
    for n in range(len(tr) - 1):
        np.testing.assert_allclose(tr.points[n + 1], op(tr.points[n]), atol=1e-12)
        assert tr.step_norms[n] == pytest.approx(np.linalg.norm(tr.points[n] - tr.points[n + 1]), abs=1e-14)


def test_halfspaces_examples():
    hs = largest_fejer_halfspaces(HALVING)
    assert len(hs) == 2
    assert hs[0].b / hs[0].a[0] == pytest.approx(0.75)
    assert hs[1].b / hs[1].a[0] == pytest.approx(0.375)
    assert largest_fejer_halfspaces(trace_from_points([[1, 1], [1, 1]])) == []
    (h,) = largest_fejer_halfspaces(trace_from_points([[1, 0], [0, 1]]))
    np.testing.assert_array_equal(h.a, [2, -2])
    assert h.b == 0


def test_fejer_violation_examples():
    assert fejer_violation(HALVING, [0, 0]) <= 0
    assert fejer_violation(HALVING, [1, 0]) == pytest.approx(0.5)
    tr = trace_from_points([[2, 2], [1, 1], [1, 1], [1, 1]])
    assert fejer_violation(tr, [1, 1]) <= 0


def test_audit_box_projection():
    tr = iterate(Projection(Box(-np.ones(2), np.ones(2))), [3, 3], 10)
    for n in range(len(tr) - 1):
        for m in range(n + 1, len(tr)):
            assert audit_fejer_inequalities(tr, [1, 1], [1, 1], n, m).ok()


def test_audit_constant_trace_is_zero():
    tr = trace_from_points([[1, 1]] * 4)
    s = audit_fejer_inequalities(tr, [1, 1], [1, 1], 0, 3)
    assert (s.consecutive, s.identity, s.cauchy_schwarz, s.telescoped) == (0, 0, 0, 0)


def test_audit_skew_telescoped():
    tr = iterate(SkewResolvent(J2), [1, 0], 10)
    s = audit_fejer_inequalities(tr, [0, 0], [0, 0], 0, 5)
    expected = 0.5 * np.dot(tr.points[0], tr.points[0]) - 0.5 * np.dot(tr.points[5], tr.points[5])
    assert s.telescoped == pytest.approx(expected, abs=1e-15)
    assert s.telescoped >= 0


def test_audit_errors():
    with pytest.raises(IndexOutOfRange):
        audit_fejer_inequalities(HALVING, [0, 0], [0, 0], 1, 1)
    with pytest.raises(IndexOutOfRange):
        audit_fejer_inequalities(HALVING, [0, 0], [0, 0], 0, 3)
    with pytest.raises(NotAFejerPoint):
        audit_fejer_inequalities(HALVING, [1, 0], [0, 0], 0, 1)


def test_audit_trace_matches_pointwise():
    tr = iterate(SkewResolvent(J2), [1, 2], 30)
    zbar = np.array([0.3, -0.2])
    bulk = audit_trace(tr, [0, 0], zbar, window=4)
    pointwise = [audit_fejer_inequalities(tr, [0, 0], zbar, n, m)
                 for n in range(len(tr) - 1) for m in range(n + 1, min(n + 4, len(tr) - 1) + 1)]
    assert bulk.telescoped == pytest.approx(min(s.telescoped for s in pointwise), abs=1e-15)
    assert bulk.consecutive == pytest.approx(min(s.consecutive for s in pointwise), abs=1e-15)


def random_trace(rng, dim):
    if dim == 2 and rng.random() < 0.5:
        op = PlanarRotationAveraged(float(rng.uniform(0.1, 3.0)))
    else:
        op = KMAveraged(Projection(Box(-np.ones(dim), np.ones(dim))), float(rng.uniform(0.2, 1.0)))
    return iterate(op, rng.normal(scale=4, size=dim), 40)


@given(st.integers(0, 2**32 - 1), st.integers(2, 6))
def test_halfspace_equivalence(seed, dim):
    rng = np.random.default_rng(seed)
    tr = random_trace(rng, dim)
    hs = largest_fejer_halfspaces(tr)
    for z in rng.normal(scale=2, size=(20, dim)):
        in_all = all(h.contains(z, 1e-12) for h in hs)
        if abs(fejer_violation(tr, z)) > 1e-9:  # away from the boundary the two must agree
            assert in_all == (fejer_violation(tr, z) <= 1e-12)


@given(st.integers(0, 2**32 - 1), st.floats(0, 1))
def test_fejer_set_convex(seed, lam):
    rng = np.random.default_rng(seed)
    tr = iterate(Projection(Box(-np.ones(2), np.ones(2))), rng.normal(scale=5, size=2), 10)
    z1, z2 = Box(-np.ones(2), np.ones(2)).sample(rng, 2)
    assert is_fejer_point(tr, z1) and is_fejer_point(tr, z2)
    assert is_fejer_point(tr, lam * z1 + (1 - lam) * z2)


@given(st.integers(0, 2**32 - 1))
def test_fejer_union(seed):
    rng = np.random.default_rng(seed)
    C1 = Ball(np.array([0.5, 0.0]), 0.4)
    C2 = Box(np.array([-1.0, -1.0]), np.array([0.0, 0.0]))
    tr = iterate(Projection(Box(-np.ones(2), np.ones(2))), rng.normal(scale=5, size=2), 10)
    pts1, pts2 = C1.sample(rng, 10), C2.sample(rng, 10)
    if all(is_fejer_point(tr, z) for z in pts1) and all(is_fejer_point(tr, z) for z in pts2):
        assert all(is_fejer_point(tr, z) for z in np.vstack([pts1, pts2]))


@given(st.integers(0, 2**32 - 1))
def test_subsequence_keeps_fejer(seed):
    rng = np.random.default_rng(seed)
    box = Box(-np.ones(3), np.ones(3))
    tr = iterate(KMAveraged(Projection(box), 0.5), rng.normal(scale=5, size=3), 40)
    idx = np.sort(rng.choice(len(tr), size=min(len(tr), 8), replace=False))
    for z in box.sample(rng, 5):
        assert fejer_violation(tr.subsequence(idx), z) <= fejer_violation(tr, z) + 1e-12
