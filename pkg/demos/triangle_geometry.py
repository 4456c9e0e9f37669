"""
Inside the three-state closed form
==================================

The triangle branch places the origin of the complementary triangle on the
intersection of two hyperbola branches. This walks through the geometry for
one ensemble and shows each feasibility condition.
"""

import math

import numpy as np

from qubitmed import ensemble_from_arrays
from qubitmed.closed_form import solve_three, triangle_geometry
from qubitmed.hyperbola import hyperbola_radius, origin_bound, triangle_conditions

angles = np.deg2rad([0, 120, 240])
vectors = np.column_stack([np.cos(angles), np.sin(angles), np.zeros(3)])
ens = ensemble_from_arrays([0.4, 0.33, 0.27], vectors)

g = triangle_geometry(ens)
print(f"sides l1={g.l1:.4f} l2={g.l2:.4f} l3={g.l3:.4f}, gaps e1={g.e1:.2f} e2={g.e2:.2f}")
print(f"angle at T1: {math.degrees(g.theta1):.2f} deg, chi = {math.degrees(g.chi):.2f} deg")

r1 = hyperbola_radius(g.l1, g.e1, g.chi)
print(f"r1 = {r1:.6f}, ray meets the far edge at {origin_bound(g):.6f}")
print("conditions:", triangle_conditions(g))

sol = solve_three(ens)
print("branch:", sol.branch, "p_guess =", sol.p_guess, "= q1 + r1 =", ens.priors[0] + r1)
print("radii:", sol.complementary.r, "weights:", sol.povm.weights)

# short Bloch vectors with a dominant prior fail the side condition first
print("\nshrink  q1    sides  curves inside  branch")
for shrink in (1.0, 0.6, 0.3, 0.1):
    for q1 in (0.4, 0.6):
        rest = (1 - q1) / 2
        e = ensemble_from_arrays([q1, rest, rest], shrink * vectors)
        g = triangle_geometry(e)
        c = triangle_conditions(g)
        print(f"{shrink:5.1f}  {q1:.1f}   {c['sides']!s:6s} {c['curves']!s:6s} {c['inside']!s:6s} {solve_three(e).branch}")
