import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fejerlab.asymptotics import (
    DirectionRecord,
    Kind,
    cluster_directions,
    direction_sequences,
    limsup_polar_residual,
    max_angular_gap,
    no_zigzag_check,
    normal_cone_distance,
    normal_cone_generators,
    polar_residual,
    running_tail_max,
    support_function,
    tail,
)
from fejerlab.errors import AllDegenerate, EmptyTail, NotARay, ZbarNotInSet
from fejerlab.fejer import iterate, trace_from_points
from fejerlab.operators import PlanarRotationAveraged, Projection, SkewResolvent
from fejerlab.sets import Ball, Box, Polyhedron, Singleton

J2 = np.array([[0.0, 1.0], [-1.0, 0.0]])
HALF = Polyhedron.from_rows([([0.0, 1.0], 0.0)])
SQUARE = Box(-np.ones(2), np.ones(2))


def recs(dirs, kind=Kind.TO_LIMIT):
    return [DirectionRecord(i, kind, np.asarray(d, dtype=float), 0.0) for i, d in enumerate(dirs)]


def at_degrees(*degs):
    return recs([[math.cos(math.radians(a)), math.sin(math.radians(a))] for a in degs])


def test_direction_sequences_collinear():
    dirs = direction_sequences(trace_from_points([[1, 0], [0.5, 0], [0.25, 0]]), [0, 0])
    assert len(dirs.of_kind(Kind.STEP_DIFF)) == 2
    assert len(dirs.of_kind(Kind.TO_LIMIT)) == 3
    for r in dirs:
        np.testing.assert_array_equal(r.dir, [1, 0])
        assert r.polar_residual == 0


def test_direction_sequences_skew_orthogonal():
    tr = iterate(SkewResolvent(J2), [1, 0], 60)
    dirs = direction_sequences(tr, [0, 0])
    step = {r.n: r.dir for r in dirs.of_kind(Kind.STEP_DIFF)}
    limit = {r.n: r.dir for r in dirs.of_kind(Kind.TO_LIMIT)}
    for n in step:
        if n + 1 in limit:
            assert abs(np.dot(limit[n + 1], step[n])) <= 1e-12


def test_direction_sequences_degenerate():
    with pytest.raises(AllDegenerate):
        direction_sequences(trace_from_points([[1, 1], [1, 1]]), [1, 1])
    dirs = direction_sequences(trace_from_points([[2, 0], [1, 0], [1, 0]]), [1, 0])
    assert dirs.skipped_step == 1 and dirs.skipped_limit == 2


def test_support_function_examples():
    assert support_function(Singleton(np.array([1.0, 2.0])), [0, 1]) == 2
    assert support_function(Ball(np.zeros(2), 1.0), [0.6, 0.8]) == pytest.approx(1)
    assert support_function(SQUARE, [1, -1]) == 2


def test_polar_residual_examples():
    zb = np.array([0.3, -2.0])
    for d in ([1, 0], [0.6, -0.8]):
        assert polar_residual(Singleton(zb), zb, d) == 0
    assert polar_residual(SQUARE, [1, 0], [1, 0]) == 0
    assert polar_residual(SQUARE, [1, 0], [0, 1]) == 1
    assert polar_residual(HALF, [0, 0], [1, 0]) == math.inf


def test_normal_cone_distance_examples():
    assert normal_cone_distance(HALF, [0, 0], [0, 1]) == pytest.approx(0, abs=1e-12)
    assert normal_cone_distance(HALF, [0, 0], [1, 0]) == pytest.approx(math.sqrt(2))
    assert normal_cone_distance(HALF, [0, 0], [0, -1]) == pytest.approx(2)


def test_normal_cone_trivial_and_errors():
    assert normal_cone_distance(SQUARE, [0, 0], [1, 0]) == math.inf
    with pytest.raises(ZbarNotInSet):
        normal_cone_distance(HALF, [0, 1], [0, 1])


def test_normal_cone_vertex():
    gens = normal_cone_generators(SQUARE, [1, 1])
    assert gens.shape == (2, 2)
    d = np.array([1.0, 1.0]) / math.sqrt(2)
    assert normal_cone_distance(SQUARE, [1, 1], d) == pytest.approx(0, abs=1e-12)
    # polar direction: nearest unit element is one of the two generators
    assert normal_cone_distance(SQUARE, [1, 1], -d) == pytest.approx(math.sqrt(2 + math.sqrt(2)), abs=1e-3)


def test_cluster_examples():
    est = cluster_directions(recs([[1, 0]] * 10), tail_fraction=1.0)
    assert len(est) == 1
    np.testing.assert_array_equal(est.representatives[0], [1, 0])
    assert est.counts == [10]


def test_cluster_rotation_fifth_turn():
    tr = iterate(PlanarRotationAveraged.from_turns(1, 5), [1, 0], 2000, stop_tol=1e-290)
    dirs = direction_sequences(tr, [0, 0])
    est = cluster_directions(dirs.of_kind(Kind.TO_LIMIT), 0.5, 1e-3)
    assert len(est) == 5


def test_cluster_count_grows_for_irrational_angle():
    tr = iterate(PlanarRotationAveraged(1.0), [1, 0], 5000, stop_tol=1e-290)
    limit = direction_sequences(tr, [0, 0]).of_kind(Kind.TO_LIMIT)
    coarse = len(cluster_directions(limit, 1.0, 0.2))
    fine = len(cluster_directions(limit, 1.0, 0.05))
    assert fine > coarse


def test_cluster_invariants():
    rng = np.random.default_rng(3)
    raw = rng.normal(size=(200, 3))
    records = recs(raw / np.linalg.norm(raw, axis=1, keepdims=True))
    est = cluster_directions(records, 0.5, 0.4)
    assert sum(est.counts) == 100
    R = est.representatives
    dist = np.linalg.norm(R[:, None] - R[None, :], axis=2)
    assert np.all(dist[np.triu_indices(len(R), 1)] >= 0.4)
    again = cluster_directions(records, 0.5, 0.4)
    assert np.array_equal(again.representatives, R) and again.counts == est.counts


def test_cluster_errors():
    with pytest.raises(EmptyTail):
        cluster_directions([], 0.5)
    with pytest.raises(ValueError):
        cluster_directions(recs([[1, 0]]), 0.5, 0.0)


def test_max_angular_gap_examples():
    assert max_angular_gap(at_degrees(0, 90, 180, 270), 1.0) == pytest.approx(90)
    assert max_angular_gap(at_degrees(45), 1.0) == 360
    assert max_angular_gap(at_degrees(350, 10), 1.0) == pytest.approx(340)


def test_max_angular_gap_dense_rotation():
    theta = 2 * math.pi * (math.sqrt(2) - 1)
    tr = iterate(PlanarRotationAveraged(theta), [1, 0], 5000, stop_tol=1e-290)
    limit = direction_sequences(tr, [0, 0]).of_kind(Kind.TO_LIMIT)
    assert max_angular_gap(limit, 0.5) < 10


def test_no_zigzag_halfspace():
    tr = trace_from_points([[0, 2.0**-n] for n in range(40)])
    rep = no_zigzag_check(tr, [0, 0], HALF)
    np.testing.assert_array_equal(rep.limit_dir, [0, 1])
    assert rep.max_dev_stepdiff == 0 and rep.max_dev_tolimit == 0


def test_no_zigzag_not_a_ray():
    tr = iterate(Projection(SQUARE), [3, 3], 5)
    with pytest.raises(NotARay):
        no_zigzag_check(tr, [1, 1], SQUARE)
    tr = iterate(PlanarRotationAveraged(1.0), [1, 0], 50)
    with pytest.raises(NotARay):
        no_zigzag_check(tr, [0, 0], Singleton(np.zeros(2)))


def test_tail_and_running_max():
    r = recs([[1, 0]] * 5)
    assert [x.n for x in tail(r, 0.5)] == [2, 3, 4]
    np.testing.assert_array_equal(running_tail_max([3, 1, 2, 0]), [3, 2, 2, 0])
    with pytest.raises(ValueError):
        tail(r, 0.0)


def test_polar_limsup_box_face():
    tr = iterate(Projection(Box(np.array([-1.0, -1.0]), np.array([1.0, 1.0]))), [3, 0.5], 5)
    dirs = direction_sequences(tr, [1, 0.5], SQUARE)
    assert limsup_polar_residual(dirs.records) <= 1e-12


@given(st.floats(0, 2 * math.pi), st.floats(-1, 1))
def test_distance_zero_iff_in_cone(alpha, x):
    d = np.array([math.cos(alpha), math.sin(alpha)])
    dist = normal_cone_distance(HALF, [x, 0], d)
    expected = np.linalg.norm(d - np.array([0.0, 1.0]))
    assert dist == pytest.approx(expected, abs=1e-9)
