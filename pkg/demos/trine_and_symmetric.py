"""
Trine states and the symmetric family
=====================================

Three equal-prior states whose Bloch vectors share a self overlap ``r`` and a
cross overlap ``gamma`` have a closed-form guessing probability. The planar
pure trine is the case ``r = 1``, ``gamma = -1/2``.
"""

import numpy as np

from qubitmed.closed_form import make_symmetric_ensemble, solve_three, symmetric_guess_formula
from qubitmed.oracle import dual_solve

trine = make_symmetric_ensemble(1.0, -0.5)
sol = solve_three(trine)
print("trine:", sol.branch, sol.p_guess)
print("weights:", sol.povm.weights)
print("complementary directions (should be -v_i):")
print(np.round(sol.complementary.w, 12))

# a coarse table over the realizable region
print("\n  r    gamma   formula   closed    oracle")
for r in (0.4, 0.7, 1.0):
    for gamma in np.linspace(-r / 2, r, 4, endpoint=False):
        ens = make_symmetric_ensemble(r, gamma)
        print(
            f"{r:.1f}  {gamma:+.3f}  {symmetric_guess_formula(r, gamma):.6f}"
            f"  {solve_three(ens).p_guess:.6f}  {dual_solve(ens)[0]:.6f}"
        )

# identical states (r == gamma) give nothing beyond guessing
print("\nr = gamma:", solve_three(make_symmetric_ensemble(0.6, 0.6)).p_guess)
