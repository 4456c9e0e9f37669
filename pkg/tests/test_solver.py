from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.spatial.transform import Rotation

from qubitmed.bloch import ensemble_from_arrays
from qubitmed.closed_form import solve_three
from qubitmed.errors import TooManyStates
from qubitmed.oracle import dual_solve, kkt_residuals, primal_check, random_ensemble
from qubitmed.polytope import build_polytope
from qubitmed.solver import solve_n

from conftest import interior_ensemble, point_ensemble, trine_vectors

TETRA = np.array([[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]]) / np.sqrt(3)


def subset_scan(ens):
    """max over three-state subsets of mass * three-state value."""
    best = 0.0
    for idx in combinations(range(ens.n), 3):
        sub, mass = ens.subset(idx)
        best = max(best, mass * solve_three(sub).p_guess)
    return best


@pytest.mark.parametrize("n", [1, 2, 3, 5, 8])
def test_identical_states(n):
    priors = np.arange(n, 0, -1, dtype=float)
    priors /= priors.sum()
    ens = ensemble_from_arrays(priors, np.tile([0.1, 0.5, -0.2], (n, 1)))
    assert solve_n(ens).p_guess == pytest.approx(priors[0], abs=1e-15)


def test_point_shape_any_n():
    ens = point_ensemble(2, 6)
    sol = solve_n(ens)
    assert str(sol.branch) == "PointBranch(0)"
    assert sol.p_guess == ens.priors[0]


def test_interior_fourth_state():
    ens = interior_ensemble(0)
    assert build_polytope(ens).shape.kind == "triangle"
    sol = solve_n(ens)
    assert sol.p_guess == pytest.approx(subset_scan(ens), abs=1e-12)
    assert sol.p_guess == pytest.approx(dual_solve(ens)[0], abs=1e-7)
    assert sol.branch.kind == "subset"


def test_interior_state_can_be_needed():
    # trine plus a heavy maximally mixed state: the best subset keeps the mixed state
    q = np.array([1 / 6, 1 / 6, 1 / 6, 0.5])
    ens = ensemble_from_arrays(q, np.vstack([trine_vectors(), np.zeros(3)]))
    sol = solve_n(ens)
    assert sol.p_guess == pytest.approx(0.5, abs=1e-12)
    assert dual_solve(ens)[0] == pytest.approx(0.5, abs=1e-12)
    extreme_only, mass = ens.subset(build_polytope(ens).extreme_indices)
    assert mass * solve_three(extreme_only).p_guess == pytest.approx(1 / 3)


def test_tetrahedron():
    ens = ensemble_from_arrays(np.full(4, 0.25), TETRA)
    sol = solve_n(ens)
    assert sol.branch.kind == "numeric"
    assert sol.p_guess == pytest.approx(0.5, abs=1e-9)
    assert abs(primal_check(ens, sol.povm).p_corr - sol.p_guess) < 1e-7
    np.testing.assert_allclose(sol.povm.weights, 0.25, atol=1e-7)


def test_too_many_states():
    with pytest.raises(TooManyStates):
        solve_n(random_ensemble(0, 9))


def test_branch_tags_are_flat():
    tag = str(solve_n(random_ensemble(1, 6)).branch)
    assert tag.count("SubsetBranch") <= 1


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 5))
def test_matches_oracle_and_realizes_value(seed, n):
    ens = random_ensemble(seed, n)
    sol = solve_n(ens)
    assert sol.p_guess == pytest.approx(dual_solve(ens)[0], abs=1e-7)
    assert primal_check(ens, sol.povm).p_corr == pytest.approx(sol.p_guess, abs=1e-9)
    assert ens.priors.max() <= sol.p_guess <= 1.0
    assert kkt_residuals(ens, sol).max() < 1e-7


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(2, 5))
def test_rotation_invariance(seed, n):
    ens = random_ensemble(seed, n)
    rot = Rotation.random(random_state=seed).as_matrix()
    turned = ensemble_from_arrays(ens.priors, ens.vectors @ rot.T)
    assert solve_n(turned).p_guess == pytest.approx(solve_n(ens).p_guess, abs=1e-9)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(2, 5))
def test_monotone_in_subsets(seed, n):
    ens = random_ensemble(seed, n)
    value = solve_n(ens).p_guess
    assert value >= ens.priors.max() - 1e-15
    for size in range(1, n):
        for idx in combinations(range(n), size):
            sub, mass = ens.subset(idx)
            assert value >= mass * solve_n(sub).p_guess - 1e-9
