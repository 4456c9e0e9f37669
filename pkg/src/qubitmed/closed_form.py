"""Analytic solutions when the intrinsic polytope is a point, segment or triangle."""
from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .bloch import WeightedEnsemble, ensemble_from_arrays
from .errors import Infeasible, Unrealizable, WrongShape
from .hyperbola import (
    NoIntersection,
    TriangleGeometry,
    hyperbola_radius,
    triangle_conditions,
    triangle_feasible,
)
from .kkt import extract_complementary
from .polytope import POINT, SEGMENT, TRIANGLE, build_polytope
from .solution import (
    PAIR_BRANCH,
    POINT_BRANCH,
    TRIANGLE_BRANCH,
    Branch,
    ComplementarySolution,
    DiscriminationSolution,
    DualCertificate,
    Povm,
)

TIE_TOL = 1e-12
UNIT_TOL = 1e-10

__all__ = [
    "PairSolution",
    "make_symmetric_ensemble",
    "solve_pair",
    "solve_pair_reduction",
    "solve_point",
    "solve_three",
    "solve_triangle",
    "symmetric_guess_formula",
    "triangle_conditions",
    "triangle_feasible",
    "triangle_geometry",
]


@dataclass(frozen=True)
class PairSolution:
    p_guess: float
    r_a: float
    r_b: float
    w_a: np.ndarray
    w_b: np.ndarray
    feasible: bool


def _complementary(ens, cert, overrides=()) -> ComplementarySolution:
    cs = extract_complementary(ens, cert, strict=False)
    r, w, free = cs.r.copy(), cs.w.copy(), cs.free.copy()
    for i, ri, wi in overrides:
        r[i], w[i], free[i] = ri, wi, False
    return ComplementarySolution(r, w, free)


def solve_point(ens: WeightedEnsemble) -> DiscriminationSolution:
    """All weighted points coincide: guess the most likely state."""
    poly = build_polytope(ens)
    if poly.shape.kind != POINT:
        raise WrongShape(f"expected a point polytope, got {poly.shape}")
    cert = DualCertificate.from_center(ens.priors[0], ens.points[0])
    return DiscriminationSolution(
        p_guess=float(ens.priors[0]),
        povm=Povm.identity_on(ens.n, 0),
        complementary=_complementary(ens, cert),
        branch=Branch(POINT_BRANCH, (0,)),
        certificate=cert,
    )


def solve_pair(qa: float, va, qb: float, vb) -> PairSolution:
    """Two-state optimum for weighted points ``qa va`` and ``qb vb`` with ``qa >= qb``.

    When ``|qa va - qb vb| >= qa - qb`` both measurement elements are used and
    the complementary directions are antipodal.  Otherwise only the first
    element survives, ``r_a = 0`` and ``w_a`` is undetermined (returned as 0).
    """
    ua = qa * np.asarray(va, float)
    ub = qb * np.asarray(vb, float)
    diff = ub - ua
    dist = float(np.linalg.norm(diff))
    gap = qa - qb
    if dist > 0.0 and dist >= gap:
        w_a = diff / dist
        return PairSolution(
            p_guess=0.5 * (qa + qb + dist),
            r_a=0.5 * (dist - gap),
            r_b=0.5 * (dist + gap),
            w_a=w_a,
            w_b=-w_a,
            feasible=True,
        )
    w_b = -diff / gap if gap > 0.0 else np.zeros(3)
    return PairSolution(float(qa), 0.0, gap, np.zeros(3), w_b, False)


def _pair_solution(ens: WeightedEnsemble, a: int, b: int) -> DiscriminationSolution:
    q, v = ens.priors, ens.vectors
    pair = solve_pair(q[a], v[a], q[b], v[b])
    branch = Branch(PAIR_BRANCH, (a, b))
    if not pair.feasible:
        cert = DualCertificate.from_center(q[a], ens.points[a])
        return DiscriminationSolution(
            p_guess=float(q[a]),
            povm=Povm.identity_on(ens.n, a),
            complementary=_complementary(ens, cert),
            branch=branch,
            certificate=cert,
        )
    center = ens.points[a] + pair.r_a * pair.w_a
    cert = DualCertificate.from_center(pair.p_guess, center)
    weights, directions = np.zeros(ens.n), np.zeros((ens.n, 3))
    weights[[a, b]] = 0.5
    directions[a], directions[b] = pair.w_a, pair.w_b
    cs = _complementary(ens, cert, [(a, pair.r_a, pair.w_a), (b, pair.r_b, pair.w_b)])
    return DiscriminationSolution(
        p_guess=float(pair.p_guess),
        povm=Povm(weights, directions),
        complementary=cs,
        branch=branch,
        certificate=cert,
    )


def pair_values(ens: WeightedEnsemble) -> dict[tuple[int, int], float]:
    q, v = ens.priors, ens.vectors
    return {
        (i, j): solve_pair(q[i], v[i], q[j], v[j]).p_guess
        for i, j in combinations(range(ens.n), 2)
    }


def solve_pair_reduction(ens: WeightedEnsemble) -> DiscriminationSolution:
    """Best two-state sub-problem over every pair of states.

    Ties within ``TIE_TOL`` go to the lexicographically smallest pair.
    """
    if ens.n == 1:
        return solve_point(ens)
    values = pair_values(ens)
    best = max(values.values())
    a, b = min(k for k, val in values.items() if val >= best - TIE_TOL)
    return _pair_solution(ens, a, b)


def triangle_geometry(ens: WeightedEnsemble) -> TriangleGeometry:
    """Side lengths, gaps and angles of a three-state ensemble.

    ``chi`` is filled in when the two hyperbola branches meet and left as
    ``None`` otherwise.
    """
    if ens.n != 3:
        raise WrongShape(f"triangle geometry needs three states, got {ens.n}")
    u1, u2, u3 = ens.points
    q1, q2, q3 = ens.priors
    g = TriangleGeometry.from_sides(
        float(np.linalg.norm(u2 - u1)),
        float(np.linalg.norm(u3 - u1)),
        float(np.linalg.norm(u3 - u2)),
        float(q1 - q2),
        float(q1 - q3),
    )
    try:
        return g.with_chi()
    except NoIntersection:
        return g


def solve_triangle(ens: WeightedEnsemble, g: TriangleGeometry | None = None) -> DiscriminationSolution:
    """Closed form when every element of the optimal measurement is nonzero."""
    if g is None:
        g = triangle_geometry(ens)
    if g.chi is None or not triangle_feasible(g):
        raise Infeasible(f"triangle conditions fail: {triangle_conditions(g)}")
    l1, l2, e1, e2, t1, chi = g.l1, g.l2, g.e1, g.e2, g.theta1, g.chi
    u1, u2, u3 = ens.points
    r1 = hyperbola_radius(l1, e1, chi)
    r = np.array([r1, r1 + e1, r1 + e2])

    s1, sc, sd = math.sin(t1), math.sin(chi), math.sin(t1 - chi)
    w1 = sd / (l1 * s1) * (u2 - u1) + sc / (l2 * s1) * (u3 - u1)
    w2 = (r1 * w1 - (u2 - u1)) / r[1]
    w3 = (r1 * w1 - (u3 - u1)) / r[2]
    w = np.array([w1, w2, w3])
    norms = np.linalg.norm(w, axis=1)
    if np.max(np.abs(norms - 1.0)) > UNIT_TOL:
        raise RuntimeError(f"complementary directions off the unit sphere: {norms}")
    w = w / norms[:, None]

    den = l1 * l2 * s1 + e2 * l1 * sc + e1 * l2 * sd
    if den <= 0.0:
        raise RuntimeError(f"nonpositive weight denominator {den!r}")
    p = np.array([l1 * l2 * s1 - r1 * l1 * sc - r1 * l2 * sd, r[1] * l2 * sd, r[2] * l1 * sc]) / den
    p = p / p.sum()

    p_guess = float(ens.priors[0] + r1)
    cert = DualCertificate.from_center(p_guess, u1 + r1 * w[0])
    return DiscriminationSolution(
        p_guess=p_guess,
        povm=Povm(p, w),
        complementary=ComplementarySolution(r, w),
        branch=Branch(TRIANGLE_BRANCH, (0, 1, 2)),
        certificate=cert,
        extra={"geometry": g},
    )


def solve_three(ens: WeightedEnsemble) -> DiscriminationSolution:
    """Three states: point, pair reduction, or the triangle closed form."""
    if ens.n != 3:
        raise WrongShape(f"solve_three needs three states, got {ens.n}")
    kind = build_polytope(ens).shape.kind
    if kind == POINT:
        return solve_point(ens)
    if kind == TRIANGLE:
        g = triangle_geometry(ens)
        if g.chi is not None and triangle_feasible(g):
            return solve_triangle(ens, g)
    elif kind != SEGMENT:
        raise WrongShape(f"three points cannot form {kind}")
    return solve_pair_reduction(ens)


def _check_symmetric(self_overlap: float, cross_overlap: float) -> None:
    r, gamma = self_overlap, cross_overlap
    if not (0.0 <= r <= 1.0 and gamma <= r and gamma >= -0.5 * r):
        raise Unrealizable(f"no three Bloch vectors with v.v = {r}, v_i.v_j = {gamma}")


def make_symmetric_ensemble(self_overlap: float, cross_overlap: float) -> WeightedEnsemble:
    """Equal-prior states with ``v_i . v_i = self_overlap`` and ``v_i . v_j = cross_overlap``.

    The vectors sit on a cone around z at azimuths 0, 120 and 240 degrees.
    """
    _check_symmetric(self_overlap, cross_overlap)
    a = math.sqrt(max(2.0 * (self_overlap - cross_overlap) / 3.0, 0.0))
    h = math.sqrt(max((self_overlap + 2.0 * cross_overlap) / 3.0, 0.0))
    angles = 2.0 * np.pi * np.arange(3) / 3.0
    vectors = np.column_stack([a * np.cos(angles), a * np.sin(angles), np.full(3, h)])
    gram = vectors @ vectors.T
    expected = np.where(np.eye(3, dtype=bool), self_overlap, cross_overlap)
    if np.max(np.abs(gram - expected)) > 1e-12:
        raise Unrealizable(f"generated Gram matrix deviates: {gram}")
    return ensemble_from_arrays(np.full(3, 1.0 / 3.0), vectors)


def symmetric_guess_formula(self_overlap: float, cross_overlap: float) -> float:
    _check_symmetric(self_overlap, cross_overlap)
    t = 1.0 - cross_overlap
    s = 1.0 - self_overlap
    return (1.0 + math.sqrt(2.0 * (t - s) / 3.0)) / 3.0
