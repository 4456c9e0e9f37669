"""
Two states: the Helstrom measurement
====================================

For two weighted states the optimum is the Helstrom bound. When the weighted
Bloch points are closer than the prior gap, guessing the likelier state
cannot be beaten.
"""

import numpy as np

from qubitmed import ensemble_from_arrays, trace_norm_weighted_diff
from qubitmed.closed_form import solve_pair, solve_pair_reduction
from qubitmed.oracle import dual_solve, primal_check

z, x = np.array([0.0, 0, 1]), np.array([1.0, 0, 0])

# orthogonal pure states are perfectly distinguishable
pair = solve_pair(0.5, z, 0.5, -z)
print("orthogonal:", pair.p_guess, "w_a =", pair.w_a)

# states at 90 degrees on the Bloch sphere
pair = solve_pair(0.5, z, 0.5, x)
print("z vs x:", pair.p_guess, "Helstrom:", 0.5 * (1 + trace_norm_weighted_diff(0.5, z, 0.5, x)))

# sweep the prior of a pair of mixed states and watch the switch to q1
print("\n q1     p_guess  feasible  oracle")
va, vb = 0.4 * z, 0.4 * x
for q1 in np.linspace(0.5, 0.9, 9):
    pair = solve_pair(q1, va, 1 - q1, vb)
    ens = ensemble_from_arrays([q1, 1 - q1], [va, vb])
    print(f"{q1:.2f}  {pair.p_guess:.6f}  {str(pair.feasible):8s}  {dual_solve(ens)[0]:.6f}")

# the measurement itself: projectors along the difference direction
ens = ensemble_from_arrays([0.6, 0.4], [z, x])
sol = solve_pair_reduction(ens)
for m in sol.povm.matrices():
    print(np.round(m, 4))
print("primal value:", primal_check(ens, sol.povm).p_corr, "claimed:", sol.p_guess)
