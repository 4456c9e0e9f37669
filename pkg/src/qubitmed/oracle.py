"""Independent numerical checks: the dual problem, primal values and KKT residuals.

The dual problem ``min tr K`` subject to ``K >= q_i rho_i`` is, for qubits,
the minimisation of

    f(m) = max_i (q_i + |m - q_i v_i|)

over Bloch-space points ``m = 2k`` with ``K = k0 I + k . sigma``.  This is the
smallest ball enclosing the balls ``B(q_i v_i, q_i)``.  It is solved here
without any of the closed-form geometry:

1. exact check of the corner candidates ``m = q_i v_i``;
2. a central-cut ellipsoid method from ``m0 = sum q_i^2 v_i / sum q_i^2``,
   which keeps a certified lower bound ``f(c) - sqrt(g' P g)``;
3. a Newton polish of the tight constraints on the affine hull of the
   leading candidates, certified by a convex combination of subgradients.

The iteration schedule is fixed, so results are deterministic.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np
from scipy.optimize import nnls

from .bloch import WeightedEnsemble, ensemble_from_arrays, pauli_operator
from .errors import InvalidPovm, NoConvergence
from .solution import DiscriminationSolution, DualCertificate, Povm

MAX_EVALUATIONS = 10**6
WARM_GAP = 1e-7
POLISH_EVERY = 40


def dual_objective(ens: WeightedEnsemble, m) -> float:
    return float(np.max(ens.priors + np.linalg.norm(np.asarray(m) - ens.points, axis=1)))


def _values(u, q, m):
    return q + np.sqrt(np.sum((m - u) ** 2, axis=1))


def _newton_tight(u, q, active, m_start, t_start, iters=40):
    """Solve ``|m - u_i| + q_i = t`` for ``i`` in ``active`` with ``m`` in their affine hull."""
    base = u[active[0]]
    span = u[active[1:]] - base
    _, sv, vt = np.linalg.svd(span, full_matrices=False)
    basis = vt[sv > 1e-14 * max(1.0, sv[0] if len(sv) else 1.0)]
    y = basis @ (m_start - base)
    t = t_start
    ua, qa = u[active], q[active]
    for it in range(iters):
        m = base + basis.T @ y
        diff = m - ua
        dist = np.sqrt(np.sum(diff**2, axis=1))
        if np.any(dist == 0.0):
            return None
        resid = dist + qa - t
        worst = np.max(np.abs(resid))
        if worst <= 1e-16 * (1.0 + abs(t)):
            break
        # a right active set converges quadratically from a warm start
        if it >= 10 and worst > 1e-6:
            return None
        jac = np.hstack([(diff / dist[:, None]) @ basis.T, -np.ones((len(active), 1))])
        try:
            if jac.shape[0] != jac.shape[1]:
                raise np.linalg.LinAlgError
            step = np.linalg.solve(jac, -resid)
        except np.linalg.LinAlgError:
            step = np.linalg.lstsq(jac, -resid, rcond=None)[0]
        y = y + step[:-1]
        t = t + step[-1]
        if np.max(np.abs(step)) < 1e-16:
            break
    return base + basis.T @ y


def _certified_lower_bound(u, q, m, candidates) -> float:
    """Lower bound on ``min f`` from subgradients at ``m``.

    For weights ``lam`` on ``candidates`` the affine minorant
    ``sum lam_i (f_i(m) + g_i . (x - m))`` is at least
    ``sum lam_i f_i(m) - |sum lam_i g_i| (|m| + 1)`` over the unit ball,
    which contains every minimiser.
    """
    diff = m - u[candidates]
    dist = np.sqrt(np.sum(diff**2, axis=1))
    if np.any(dist == 0.0):
        return -np.inf
    g = diff / dist[:, None]
    heavy = 1e3
    a = np.vstack([g.T, heavy * np.ones(len(candidates))])
    b = np.array([0.0, 0.0, 0.0, heavy])
    lam, _ = nnls(a, b)
    if lam.sum() <= 0.0:
        return -np.inf
    lam = lam / lam.sum()
    fi = q[candidates] + dist
    balance = float(np.linalg.norm(lam @ g))
    return float(lam @ fi) - balance * (float(np.linalg.norm(m)) + 1.0)


def _polish(u, q, m, best_f):
    """Try Newton on the leading constraints; return ``(m, f, lower_bound)``."""
    vals = _values(u, q, m)
    order = np.argsort(-vals, kind="stable")
    best = (m, best_f, -np.inf)
    tried = set()

    def attempt(active):
        nonlocal best
        tried.add(active)
        cand = _newton_tight(u, q, np.array(active), m, best_f)
        if cand is None or not np.all(np.isfinite(cand)):
            return
        cand_vals = _values(u, q, cand)
        f_cand = float(np.max(cand_vals))
        near = np.flatnonzero(cand_vals >= f_cand - 1e-9)
        lb = _certified_lower_bound(u, q, cand, near)
        if f_cand - lb < best[1] - best[2]:
            best = (cand, f_cand, lb)

    for k in range(2, min(4, len(q)) + 1):
        for extra in range(0, min(2, len(q) - k) + 1):
            pool = order[: k + extra]
            for active in combinations(sorted(pool), k):
                if active not in tried:
                    attempt(active)
            if best[1] - best[2] < 1e-13:
                return best
    return best


@dataclass(frozen=True)
class DualResult:
    p_guess: float
    certificate: DualCertificate
    gap_estimate: float
    evaluations: int


def dual_solve_full(ens: WeightedEnsemble, tol: float = 1e-12, max_evals: int = MAX_EVALUATIONS) -> DualResult:
    tol = max(tol, 1e-12)
    u, q = np.asarray(ens.points), np.asarray(ens.priors)
    q_max = float(np.max(q))
    evals = 0

    for i in np.flatnonzero(q == q_max):
        f_corner = float(np.max(_values(u, q, u[i])))
        evals += 1
        if f_corner - q_max <= tol:
            return DualResult(q_max, DualCertificate.from_center(q_max, u[i]), f_corner - q_max, evals)

    v = np.asarray(ens.vectors)
    c = (q**2) @ v / np.sum(q**2)
    p_mat = 4.0 * np.eye(3)
    n = 3.0
    best_m, best_f = c.copy(), np.inf
    lower = q_max
    it = 0
    while evals < max_evals:
        vals = _values(u, q, c)
        evals += 1
        k = int(np.argmax(vals))
        f_c = float(vals[k])
        if f_c < best_f:
            best_m, best_f = c.copy(), f_c
        diff = c - u[k]
        dist = float(np.linalg.norm(diff))
        if dist == 0.0:
            lower = best_f
            break
        g = diff / dist
        pg = p_mat @ g
        gpg = float(g @ pg)
        lower = max(lower, f_c - np.sqrt(max(gpg, 0.0)))
        it += 1
        if best_f - lower <= WARM_GAP or (it % POLISH_EVERY == 0 and best_f - lower <= 1e-3):
            m_p, f_p, lb_p = _polish(u, q, best_m, best_f)
            evals += 1
            if f_p <= best_f:
                best_m, best_f = m_p, f_p
            lower = max(lower, lb_p)
            if best_f - lower <= tol:
                break
        if gpg <= 1e-300:
            break
        gt = pg / np.sqrt(gpg)
        c = c - gt / (n + 1.0)
        p_mat = (n * n / (n * n - 1.0)) * (p_mat - (2.0 / (n + 1.0)) * np.outer(gt, gt))
        p_mat = 0.5 * (p_mat + p_mat.T)
    gap = best_f - lower
    if gap > tol:
        raise NoConvergence(f"dual gap estimate {gap:.3e} > {tol:.1e} after {evals} evaluations")
    value = min(max(best_f, q_max), 1.0)
    return DualResult(value, DualCertificate.from_center(value, best_m), gap, evals)


def dual_solve(ens: WeightedEnsemble, tol: float = 1e-12) -> tuple[float, DualCertificate]:
    """Guessing probability and optimal dual operator, computed numerically."""
    res = dual_solve_full(ens, tol)
    return res.p_guess, res.certificate


@dataclass(frozen=True)
class PrimalReport:
    p_corr: float
    completeness: float
    positivity: float


def primal_check(ens: WeightedEnsemble, povm: Povm) -> PrimalReport:
    """Success probability ``sum_i q_i p_i (1 - v_i . w_i)`` of a measurement."""
    if len(povm) != ens.n:
        raise InvalidPovm(f"POVM has {len(povm)} elements for {ens.n} states")
    completeness = povm.completeness_residual()
    if completeness > 1e-8:
        raise InvalidPovm(f"elements do not sum to the identity (residual {completeness:.3e})")
    overlap = np.sum(ens.vectors * povm.directions, axis=1)
    p_corr = float(np.sum(ens.priors * povm.weights * (1.0 - overlap)))
    return PrimalReport(p_corr, completeness, povm.positivity_residual())


@dataclass(frozen=True)
class KKTResiduals:
    povm_completeness: float
    povm_positivity: float
    stationarity: float
    slackness: float

    def max(self) -> float:
        return max(self.povm_completeness, self.povm_positivity, self.stationarity, self.slackness)


def kkt_residuals(ens: WeightedEnsemble, solution: DiscriminationSolution) -> KKTResiduals:
    """Operator-level KKT residuals of a primal/dual pair.

    Stationarity compares ``r_i rho~_i - r_j rho~_j`` with ``q_j rho_j - q_i rho_i``
    in operator norm; slackness is ``max_i |r_i tr(rho~_i M_i)|``.
    """
    cs = solution.complementary
    povm = solution.povm
    rho = [pauli_operator(0.5, 0.5 * v) for v in ens.vectors]
    dual_side = [
        np.zeros((2, 2), complex) if f else r * pauli_operator(0.5, 0.5 * w)
        for r, w, f in zip(cs.r, cs.w, cs.free)
    ]
    stationarity = 0.0
    for i, j in combinations(range(ens.n), 2):
        lhs = dual_side[i] - dual_side[j]
        rhs = ens.priors[j] * rho[j] - ens.priors[i] * rho[i]
        stationarity = max(stationarity, float(np.linalg.norm(lhs - rhs, ord=2)))
    slackness = max(
        abs(float(np.trace(d @ m).real)) for d, m in zip(dual_side, povm.matrices())
    )
    return KKTResiduals(
        povm.completeness_residual(), povm.positivity_residual(), stationarity, slackness
    )


def random_ensemble(seed: int, n: int, purity_min: float = 0.0, purity_max: float = 1.0) -> WeightedEnsemble:
    """Reproducible random ensemble drawn with numpy's PCG64 generator.

    Priors are normalised standard exponentials (a flat Dirichlet draw);
    Bloch vectors are isotropic with length uniform in ``[purity_min, purity_max]``.
    """
    if not 0.0 <= purity_min <= purity_max <= 1.0:
        raise ValueError("need 0 <= purity_min <= purity_max <= 1")
    rng = np.random.Generator(np.random.PCG64(seed))
    priors = rng.standard_exponential(n)
    priors = priors / priors.sum()
    dirs = rng.standard_normal((n, 3))
    dirs /= np.linalg.norm(dirs, axis=1)[:, None]
    radii = rng.uniform(purity_min, purity_max, n)
    return ensemble_from_arrays(priors, dirs * radii[:, None])


def random_povm(rng: np.random.Generator, n: int) -> Povm:
    """Random valid POVM ``S^{-1/2} A_i S^{-1/2}`` from random positive ``A_i``.

    About half the ``A_i`` are rank one; draws whose sum ``S`` is close to
    singular are repeated.
    """
    while True:
        mats = []
        for _ in range(n):
            g = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
            if rng.random() < 0.5:
                g[:, 1] = 0.0
            mats.append(g @ g.conj().T)
        evals, evecs = np.linalg.eigh(sum(mats))
        if evals[0] > 1e-6 * evals[-1]:
            break
    inv_sqrt = evecs @ np.diag(evals**-0.5) @ evecs.conj().T
    return Povm.from_matrices([inv_sqrt @ a @ inv_sqrt for a in mats])
