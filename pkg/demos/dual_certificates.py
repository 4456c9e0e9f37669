"""
Certificates and residuals
==========================

Every answer comes with a dual operator ``K`` that dominates each weighted
state, so ``tr K`` bounds any measurement from above. Random measurements
never beat it, and the optimal one meets it.
"""

import numpy as np

from qubitmed import kkt_residuals, random_ensemble, solve_n
from qubitmed.oracle import dual_solve, primal_check, random_povm

ens = random_ensemble(seed=7, n=5, purity_min=0.3, purity_max=1.0)
sol = solve_n(ens)
print("p_guess", sol.p_guess, "branch", sol.branch)

K = sol.certificate.matrix()
print("tr K =", np.trace(K).real)
for q, rho in zip(ens.priors, ens.densities()):
    print("  min eig of K - q rho:", f"{np.linalg.eigvalsh(K - q * rho).min():+.2e}")

res = kkt_residuals(ens, sol)
print("KKT residuals:", res)

# weak duality in action
rng = np.random.default_rng(0)
values = [primal_check(ens, random_povm(rng, ens.n)).p_corr for _ in range(2000)]
print(f"best of 2000 random POVMs: {max(values):.4f} <= {dual_solve(ens)[0]:.4f}")
