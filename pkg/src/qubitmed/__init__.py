"""Minimum-error discrimination of qubit mixed states.

Closed-form solutions for intrinsic polytopes with one, two or three extreme
points, a numerical dual oracle for everything else, and verifiers for the
optimality conditions.
"""
__version__ = "0.1.0"

from .bloch import (
    WeightedEnsemble,
    bloch_to_density,
    density_to_bloch,
    ensemble_from_arrays,
    trace_norm_weighted_diff,
    validate_ensemble,
)
from .closed_form import (
    make_symmetric_ensemble,
    solve_pair,
    solve_pair_reduction,
    solve_point,
    solve_three,
    solve_triangle,
    symmetric_guess_formula,
    triangle_feasible,
    triangle_geometry,
)
from .hyperbola import TriangleGeometry, compute_chi, curves_intersect, hyperbola_radius, origin_inside_triangle
from .kkt import extract_complementary, geometric_kkt_verify, recover_povm
from .oracle import dual_solve, kkt_residuals, primal_check, random_ensemble
from .polytope import affine_dimension, build_polytope
from .solution import Branch, ComplementarySolution, DiscriminationSolution, DualCertificate, Povm
from .solver import solve_n
