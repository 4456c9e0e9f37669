"""
More states than extreme points
===============================

With four or more states the optimum is the best subset, scaled by the prior
mass it carries. A state inside the triangle of the others can still be the
one that matters: here a heavy maximally mixed state beats the pure trine.
"""

import numpy as np

from qubitmed import build_polytope, ensemble_from_arrays, solve_n
from qubitmed.closed_form import solve_three
from qubitmed.oracle import dual_solve

angles = np.deg2rad([0, 120, 240])
trine = np.column_stack([np.cos(angles), np.sin(angles), np.zeros(3)])

for heavy in (0.1, 0.25, 0.5):
    q = np.append(np.full(3, (1 - heavy) / 3), heavy)
    ens = ensemble_from_arrays(q, np.vstack([trine, np.zeros(3)]))
    poly = build_polytope(ens)
    sub, mass = ens.subset(poly.extreme_indices)
    sol = solve_n(ens)
    print(f"mixed prior {heavy:.2f}: polytope {poly.shape}, extreme points alone give {mass * solve_three(sub).p_guess:.4f}")
    print(f"    solve_n {sol.p_guess:.4f} via {sol.branch}, oracle {dual_solve(ens)[0]:.4f}")

# the tetrahedron has four extreme points; the numeric branch takes over
tet = np.array([[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]]) / np.sqrt(3)
sol = solve_n(ensemble_from_arrays(np.full(4, 0.25), tet))
print("\ntetrahedron:", sol.branch, sol.p_guess, "weights", np.round(sol.povm.weights, 6))
