"""Geometric optimality conditions in Bloch space.

For an ensemble with weighted points ``u_i = q_i v_i`` a candidate
``{r_i, w_i}`` must satisfy

(i)   ``r_i w_i - r_j w_j = u_j - u_i`` for all pairs,
(ii)  some strictly positive ``p`` with ``sum p_i w_i = 0`` and ``sum p_i = 1``,
(iii) ``|w_i| = 1``,
(iv)  ``r_i - r_j = q_j - q_i``.

These hold exactly when an optimal measurement can use every element.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np
from scipy.optimize import linprog, nnls

from .bloch import WeightedEnsemble
from .errors import DegenerateRadius, NoValidPovm
from .solution import ComplementarySolution, DualCertificate, Povm

FREE_RADIUS = 1e-12
ACTIVE_NORM = 1.0 - 1e-7
POVM_RESIDUAL = 1e-9


@dataclass(frozen=True)
class GeometricKKTReport:
    congruence: float
    min_weight: float
    unit_norm: float
    radius_gap: float
    tol: float

    @property
    def interior(self) -> bool:
        return self.min_weight > self.tol

    @property
    def passed(self) -> bool:
        return (
            self.congruence < self.tol
            and self.unit_norm < self.tol
            and self.radius_gap < self.tol
            and self.interior
        )

    def failures(self) -> list[str]:
        out = []
        if self.congruence >= self.tol:
            out.append("congruence")
        if not self.interior:
            out.append("interior")
        if self.unit_norm >= self.tol:
            out.append("unit_norm")
        if self.radius_gap >= self.tol:
            out.append("radius_gap")
        return out


def max_min_weight(directions) -> float:
    """Largest ``s`` such that weights ``p_i >= s`` balance ``directions``.

    Solves ``max s`` subject to ``sum p_i w_i = 0``, ``sum p_i = 1``,
    ``p_i >= s``.  Returns ``-inf`` when no nonnegative balance exists.
    """
    w = np.atleast_2d(np.asarray(directions, dtype=float))
    n = len(w)
    # variables (p_1..p_n, s); minimise -s
    c = np.zeros(n + 1)
    c[-1] = -1.0
    a_eq = np.zeros((4, n + 1))
    a_eq[:3, :n] = w.T
    a_eq[3, :n] = 1.0
    b_eq = np.array([0.0, 0.0, 0.0, 1.0])
    a_ub = np.hstack([-np.eye(n), np.ones((n, 1))])
    b_ub = np.zeros(n)
    bounds = [(0, None)] * n + [(None, None)]
    res = linprog(c, A_ub=a_ub, b_ub=b_ub, A_eq=a_eq, b_eq=b_eq, bounds=bounds, method="highs")
    if res.status != 0:
        return -np.inf
    return float(res.x[-1])


def geometric_kkt_verify(ens: WeightedEnsemble, cs: ComplementarySolution, tol: float = 1e-8):
    """Residuals of the four geometric conditions for a candidate ``cs``.

    Entries flagged ``free`` have ``r_i = 0`` and may point anywhere; for the
    interior test they count as balanced whenever another index exists,
    because a free unit vector of adjustable weight can cancel any sum.
    """
    u = ens.points
    q = ens.priors
    r, w = np.asarray(cs.r, float), np.asarray(cs.w, float)
    free = np.asarray(cs.free, bool)
    n = ens.n
    congruence = radius_gap = 0.0
    for i, j in combinations(range(n), 2):
        ti = np.zeros(3) if free[i] else r[i] * w[i]
        tj = np.zeros(3) if free[j] else r[j] * w[j]
        congruence = max(congruence, float(np.linalg.norm(ti - tj - (u[j] - u[i]))))
        radius_gap = max(radius_gap, abs(r[i] - r[j] - (q[j] - q[i])))
    bound = ~free
    unit = float(np.max(np.abs(np.linalg.norm(w[bound], axis=1) - 1.0))) if bound.any() else 0.0
    if free.any():
        min_weight = 1.0 / n if n > 1 else -np.inf
    else:
        min_weight = max_min_weight(w)
    return GeometricKKTReport(congruence, min_weight, unit, radius_gap, tol)


def extract_complementary(
    ens: WeightedEnsemble, cert: DualCertificate, tol: float = 1e-9, strict: bool = True
) -> ComplementarySolution:
    """Read ``{r_i, w_i}`` off a dual certificate.

    ``r_i = 2 k0 - q_i`` and ``w_i = (2k - q_i v_i) / r_i``.  Radii at most
    ``FREE_RADIUS`` are treated as zero and flagged free; radii between that
    and ``tol`` leave ``w_i`` too ill-conditioned to report; with
    ``strict=False`` they are returned anyway.
    """
    r = cert.value - ens.priors
    diff = cert.center[None, :] - ens.points
    free = r <= FREE_RADIUS
    shaky = (~free) & (r < tol)
    if strict and shaky.any():
        raise DegenerateRadius(f"radii {r[shaky]} are too small to fix a direction")
    r = np.where(free, 0.0, r)
    w = np.zeros_like(diff)
    w[~free] = diff[~free] / r[~free, None]
    return ComplementarySolution(r=r, w=w, free=free)


def recover_povm(ens: WeightedEnsemble, cs: ComplementarySolution) -> Povm:
    """Smallest-residual measurement compatible with ``cs``.

    A free entry (``r_i = 0``) carries the whole identity, which is optimal
    since the objective is then ``q_i``.  Otherwise weights on the active set
    ``|w_i| = 1`` solve ``sum p_i w_i = 0``, ``sum p_i = 1`` by NNLS.
    """
    free = np.flatnonzero(cs.free)
    if len(free):
        return Povm.identity_on(ens.n, int(free[0]))
    norms = np.linalg.norm(cs.w, axis=1)
    active = np.flatnonzero(norms > ACTIVE_NORM)
    if len(active) == 0:
        raise NoValidPovm("no complementary direction reaches the unit sphere")
    dirs = cs.w[active] / norms[active, None]
    a = np.vstack([dirs.T, np.ones(len(active))])
    b = np.array([0.0, 0.0, 0.0, 1.0])
    p, residual = nnls(a, b)
    if residual >= POVM_RESIDUAL:
        raise NoValidPovm(f"active directions cannot balance (residual {residual:.3e})")
    p = p / p.sum()
    weights, directions = np.zeros(ens.n), np.zeros((ens.n, 3))
    weights[active] = p
    directions[active] = dirs
    return Povm(weights, directions)
