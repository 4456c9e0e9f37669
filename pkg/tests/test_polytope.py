import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.spatial import ConvexHull

from qubitmed.bloch import ensemble_from_arrays
from qubitmed.oracle import random_ensemble
from qubitmed.polytope import (
    HIGHER,
    POINT,
    SEGMENT,
    TRIANGLE,
    affine_dimension,
    build_polytope,
    extreme_points,
)

from conftest import trine_vectors

Z = np.array([0.0, 0, 1])


def test_identical_states_are_a_point():
    v = np.array([0.1, 0.2, 0.3])
    poly = build_polytope(ensemble_from_arrays(np.full(3, 1 / 3), [v, v, v]))
    assert poly.shape.kind == POINT
    assert str(poly.shape) == "Point(0)"
    assert poly.dimension == 0


def test_antipodal_pair_is_a_segment():
    poly = build_polytope(ensemble_from_arrays([0.5, 0.5], [Z, -Z]))
    assert str(poly.shape) == "Segment(0,1)"


def test_trine_is_a_triangle():
    poly = build_polytope(ensemble_from_arrays(np.full(3, 1 / 3), trine_vectors()))
    assert str(poly.shape) == "Triangle(0,1,2)"
    assert poly.dimension == 2


def test_affine_dimension():
    assert affine_dimension([[0.1, 0.2, 0.3]]) == 0
    assert affine_dimension([[0, 0, 0.5], [0, 0, -0.5]]) == 1
    assert affine_dimension(trine_vectors() / 3) == 2
    assert affine_dimension(np.vstack([np.eye(3), np.zeros(3)]) * 0.5) == 3


def test_interior_point_is_not_extreme():
    pts = np.vstack([trine_vectors() / 3, [0.0, 0.0, 0.0]])
    assert extreme_points(pts) == ((0, 1, 2), 2)


def test_duplicates_keep_lowest_index():
    pts = np.array([[0, 0, 0.2], [0, 0, -0.2], [0, 0, 0.2]])
    assert extreme_points(pts) == ((0, 1), 1)


def test_collinear_middle_point_is_dropped():
    ens = ensemble_from_arrays([0.4, 0.3, 0.3], [Z, -Z, np.zeros(3)])
    poly = build_polytope(ens)
    assert str(poly.shape) == "Segment(0,1)"


def test_needle_triangle_becomes_segment():
    pts = np.array([[0.3, 0, 0], [-0.3, 0, 0], [0.0, 1e-11, 0]])
    q = np.full(3, 1 / 3)
    poly = build_polytope(ensemble_from_arrays(q, pts / q[:, None]))
    assert poly.shape.kind == SEGMENT
    assert poly.shape.indices == (0, 1)


def test_tetrahedron_is_higher():
    tet = np.array([[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]]) / np.sqrt(3)
    poly = build_polytope(ensemble_from_arrays(np.full(4, 0.25), tet))
    assert poly.shape.kind == HIGHER
    assert str(poly.shape) == "Higher(4)"


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.integers(5, 8))
def test_extreme_points_match_qhull(seed, n):
    ens = random_ensemble(seed, n, 0.0, 1.0)
    pts = ens.points
    if affine_dimension(pts) < 3:
        return
    hull = ConvexHull(pts)
    # skip near-degenerate hulls where the two tolerances may disagree
    for i in range(n):
        if i in hull.vertices:
            continue
        eq = hull.equations
        if np.max(eq[:, :3] @ pts[i] + eq[:, 3]) > -1e-6:
            return
    extreme, dim = extreme_points(pts)
    assert dim == 3
    assert set(extreme) == set(int(i) for i in hull.vertices)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 6))
def test_shape_matches_extreme_count(seed, n):
    poly = build_polytope(random_ensemble(seed, n))
    expected = {1: POINT, 2: SEGMENT, 3: TRIANGLE}.get(len(poly.extreme_indices), HIGHER)
    assert poly.shape.kind == expected
    assert poly.dimension <= min(n - 1, 3)
