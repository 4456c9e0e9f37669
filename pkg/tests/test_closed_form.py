import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qubitmed.bloch import ensemble_from_arrays, trace_norm_weighted_diff
from qubitmed.closed_form import (
    make_symmetric_ensemble,
    pair_values,
    solve_pair,
    solve_pair_reduction,
    solve_point,
    solve_three,
    solve_triangle,
    symmetric_guess_formula,
    triangle_geometry,
)
from qubitmed.errors import Infeasible, Unrealizable, WrongShape
from qubitmed.hyperbola import triangle_conditions, triangle_feasible
from qubitmed.kkt import geometric_kkt_verify
from qubitmed.oracle import dual_solve, kkt_residuals, primal_check, random_ensemble

from conftest import point_ensemble, trine_vectors

Z, X = np.array([0.0, 0, 1]), np.array([1.0, 0, 0])
DEG = math.pi / 180


def identical(priors, v=(0.2, -0.1, 0.4)):
    return ensemble_from_arrays(priors, np.tile(v, (len(priors), 1)))


def test_point():
    ens = identical([1 / 3, 1 / 3, 1 / 3])
    sol = solve_point(ens)
    assert sol.p_guess == 1 / 3
    assert str(sol.branch) == "PointBranch(0)"
    assert primal_check(ens, sol.povm).p_corr == pytest.approx(1 / 3, abs=1e-15)


def test_point_with_distinct_priors():
    ens = point_ensemble(11, 4)
    sol = solve_point(ens)
    assert sol.p_guess == ens.priors[0]
    assert sol.povm.nonzero.tolist() == [True, False, False, False]


@pytest.mark.parametrize("priors", [[0.9, 0.1], [0.4, 0.3, 0.1, 0.1, 0.1]])
def test_identical_states_unequal_priors(priors):
    # q_i v differ, so the weighted points span a segment; every pair is infeasible
    ens = identical(priors)
    with pytest.raises(WrongShape):
        solve_point(ens)
    sol = solve_pair_reduction(ens)
    assert sol.p_guess == pytest.approx(priors[0], abs=1e-15)
    assert primal_check(ens, sol.povm).p_corr == pytest.approx(priors[0], abs=1e-15)


def test_point_rejects_other_shapes():
    with pytest.raises(WrongShape):
        solve_point(ensemble_from_arrays([0.5, 0.5], [Z, -Z]))


def test_pair_orthogonal():
    pair = solve_pair(0.5, Z, 0.5, -Z)
    assert pair.p_guess == 1.0 and pair.feasible
    # element a = projector onto +z; complementary direction points away from u_a
    np.testing.assert_allclose(pair.w_a, -Z)
    np.testing.assert_allclose(pair.w_b, Z)
    assert pair.r_a == pytest.approx(0.5) and pair.r_b == pytest.approx(0.5)


def test_pair_boundary():
    pair = solve_pair(0.7, Z, 0.3, Z)
    assert pair.p_guess == pytest.approx(0.7, abs=1e-15)
    assert pair.feasible
    assert pair.r_a == pytest.approx(0.0, abs=1e-15)


def test_pair_z_x():
    expected = 0.5 * (1 + math.sqrt(2) / 2)
    pair = solve_pair(0.5, Z, 0.5, X)
    assert pair.p_guess == pytest.approx(expected, abs=1e-15)
    ens = ensemble_from_arrays([0.5, 0.5], [Z, X])
    assert dual_solve(ens)[0] == pytest.approx(expected, abs=1e-12)
    assert 0.5 * (1 + trace_norm_weighted_diff(0.5, Z, 0.5, X)) == pytest.approx(expected, abs=1e-15)


def test_pair_infeasible_returns_prior():
    pair = solve_pair(0.8, 0.1 * Z, 0.2, 0.1 * X)
    assert not pair.feasible
    assert pair.p_guess == 0.8


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_pair_matches_helstrom(seed):
    ens = random_ensemble(seed, 2)
    (qa, qb), (va, vb) = ens.priors, ens.vectors
    pair = solve_pair(qa, va, qb, vb)
    helstrom = 0.5 * (qa + qb + trace_norm_weighted_diff(qa, va, qb, vb))
    assert pair.p_guess == pytest.approx(helstrom, abs=1e-12)
    sol = solve_pair_reduction(ens)
    assert primal_check(ens, sol.povm).p_corr == pytest.approx(sol.p_guess, abs=1e-12)
    assert kkt_residuals(ens, sol).max() < 1e-10


def test_pair_reduction_enumerates():
    ens = ensemble_from_arrays([0.4, 0.3, 0.3], [Z, -Z, np.zeros(3)])
    # by hand: (1,2) -> (0.7+0.7)/2, (1,3) -> (0.7+0.4)/2, (2,3) -> (0.6+0.3)/2
    expected = {(0, 1): 0.7, (0, 2): 0.55, (1, 2): 0.45}
    for k, val in pair_values(ens).items():
        assert val == pytest.approx(expected[k], abs=1e-15)
    sol = solve_pair_reduction(ens)
    assert sol.p_guess == pytest.approx(0.7)
    assert str(sol.branch) == "PairBranch(0,1)"
    assert sol.povm.weights[2] == 0.0


def test_pair_reduction_identical_states():
    sol = solve_pair_reduction(identical([0.5, 0.3, 0.2]))
    assert sol.p_guess == 0.5


def test_pair_reduction_tie_is_lexicographic():
    ens = ensemble_from_arrays([0.5, 0.5], [Z, -Z])
    assert str(solve_pair_reduction(ens).branch) == "PairBranch(0,1)"


def test_trine_geometry(trine):
    g = triangle_geometry(trine)
    for side in (g.l1, g.l2, g.l3):
        assert side == pytest.approx(math.sqrt(3) / 3, abs=1e-15)
    assert g.e1 == 0 and g.e2 == 0
    assert g.theta1 == pytest.approx(60 * DEG, abs=1e-12)
    assert g.chi == pytest.approx(30 * DEG, abs=1e-12)
    assert triangle_feasible(g)


def test_unequal_trine_geometry_by_coordinates():
    q = np.array([0.5, 0.3, 0.2])
    ens = ensemble_from_arrays(q, trine_vectors())
    g = triangle_geometry(ens)
    # u_i = q_i (cos a_i, sin a_i, 0): distances by the law of cosines at 120 degrees
    def side(a, b):
        return math.sqrt(a * a + b * b + a * b)
    assert g.l1 == pytest.approx(side(0.5, 0.3), abs=1e-15)
    assert g.l2 == pytest.approx(side(0.5, 0.2), abs=1e-15)
    assert g.l3 == pytest.approx(side(0.3, 0.2), abs=1e-15)
    assert (g.e1, g.e2) == pytest.approx((0.2, 0.3), abs=1e-15)
    u = ens.points
    cos1 = np.dot(u[1] - u[0], u[2] - u[0]) / (g.l1 * g.l2)
    assert g.theta1 == pytest.approx(math.acos(cos1), abs=1e-12)


@settings(max_examples=50)
@given(st.floats(0.05, 0.95), st.floats(0.0, 0.04), st.floats(2.0, 3.0))
def test_isosceles_equal_gaps(h, gap, spread):
    # u2, u3 mirror each other about the x axis and share a prior
    q1 = (1 + 2 * gap) / 3
    q2 = (1 - gap) / 3
    half = spread / 2
    u = np.array([[h * q1, 0, 0], [-0.3 * math.cos(half), 0.3 * math.sin(half), 0], [-0.3 * math.cos(half), -0.3 * math.sin(half), 0]])
    u[1:] *= q2 / 0.34
    ens = ensemble_from_arrays([q1, q2, q2], u / np.array([q1, q2, q2])[:, None])
    g = triangle_geometry(ens)
    if g.chi is not None:
        assert g.chi == pytest.approx(g.theta1 / 2, abs=1e-9)


def nearly_coincident():
    # pure states always have l1 >= e1; short Bloch vectors make the gap dominate
    v = np.array([0.1, 0.0, 0.0])
    vectors = np.array([v, v + [0, 1e-3, 0], v + [0, 0, 1e-3]])
    return ensemble_from_arrays([0.98, 0.01, 0.01], vectors)


def test_condition_one_fails():
    g = triangle_geometry(nearly_coincident())
    assert g.l1 < g.e1
    assert triangle_conditions(g)["sides"] is False
    assert not triangle_feasible(g)


def test_trine_solution(trine):
    sol = solve_triangle(trine)
    assert sol.p_guess == pytest.approx(2 / 3, abs=1e-15)
    np.testing.assert_allclose(sol.complementary.r, 1 / 3, atol=1e-15)
    np.testing.assert_allclose(sol.povm.weights, 1 / 3, atol=1e-15)
    np.testing.assert_allclose(sol.complementary.w, -trine_vectors(), atol=1e-15)
    assert dual_solve(trine)[0] == pytest.approx(2 / 3, abs=1e-12)
    assert str(sol.branch) == "TriangleBranch(0,1,2)"


def test_symmetric_mixed_triangle():
    ens = make_symmetric_ensemble(0.8, -0.3)
    sol = solve_three(ens)
    assert sol.branch.kind == "triangle"
    assert sol.p_guess == pytest.approx(symmetric_guess_formula(0.8, -0.3), abs=1e-12)
    assert dual_solve(ens)[0] == pytest.approx(sol.p_guess, abs=1e-10)


def test_random_feasible_triangles_are_primal_exact():
    hits = 0
    for seed in range(400):
        ens = random_ensemble(seed, 3, 0.7, 1.0)
        sol = solve_three(ens)
        if sol.branch.kind != "triangle":
            continue
        hits += 1
        assert primal_check(ens, sol.povm).p_corr == pytest.approx(sol.p_guess, abs=1e-9)
        assert geometric_kkt_verify(ens, sol.complementary, 1e-10).passed
    assert hits >= 5


def test_triangle_raises_when_infeasible():
    with pytest.raises(Infeasible):
        solve_triangle(nearly_coincident())
    assert solve_three(nearly_coincident()).p_guess == 0.98


def test_solve_three_dispatch(trine):
    assert solve_three(identical([1 / 3, 1 / 3, 1 / 3])).branch.kind == "point"
    assert solve_three(identical([0.5, 0.3, 0.2])).p_guess == 0.5
    collinear = ensemble_from_arrays([0.4, 0.3, 0.3], [Z, -Z, 0.1 * Z])
    assert solve_three(collinear).branch.kind == "pair"
    assert solve_three(trine).branch.kind == "triangle"
    assert solve_three(point_ensemble(5)).branch.kind == "point"
    with pytest.raises(WrongShape):
        solve_three(ensemble_from_arrays([0.5, 0.5], [Z, -Z]))


def test_symmetric_generator():
    trine = make_symmetric_ensemble(1.0, -0.5)
    np.testing.assert_allclose(trine.vectors[:, 2], 0, atol=1e-15)
    same = make_symmetric_ensemble(0.6, 0.6)
    np.testing.assert_allclose(same.vectors, np.tile(same.vectors[0], (3, 1)), atol=1e-15)
    v = make_symmetric_ensemble(0.8, 0.2).vectors
    gram = v @ v.T
    np.testing.assert_allclose(np.diag(gram), 0.8, atol=1e-15)
    np.testing.assert_allclose(gram[~np.eye(3, dtype=bool)], 0.2, atol=1e-15)


@pytest.mark.parametrize("r, gamma", [(1.2, 0.0), (0.5, 0.6), (0.8, -0.5), (-0.1, -0.1)])
def test_unrealizable(r, gamma):
    with pytest.raises(Unrealizable):
        make_symmetric_ensemble(r, gamma)


def test_symmetric_formula():
    assert symmetric_guess_formula(1.0, -0.5) == pytest.approx(2 / 3, abs=1e-15)
    assert symmetric_guess_formula(0.7, 0.7) == pytest.approx(1 / 3, abs=1e-15)
    assert symmetric_guess_formula(0.8, 0.2) == pytest.approx((1 + math.sqrt(0.4)) / 3, abs=1e-15)
    assert symmetric_guess_formula(0.8, 0.2) == pytest.approx(0.54415, abs=1e-5)
    ens = make_symmetric_ensemble(0.8, 0.2)
    assert solve_three(ens).p_guess == pytest.approx(symmetric_guess_formula(0.8, 0.2), abs=1e-12)
