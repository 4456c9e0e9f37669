"""Hyperbola-branch geometry behind the three-state closed form.

Given two points ``T`` and ``T'`` at distance ``l``, the branch
``|P - T'| - |P - T| = e`` is described in polar form around ``T`` by
:func:`hyperbola_radius`.  A triangle ``T1 T2 T3`` carries two such branches,
one per edge leaving ``T1``; their common point ``O`` is the candidate origin
of the complementary-state triangle.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional

from .errors import DegenerateHyperbola, NoIntersection, Unbounded

ACOS_CLAMP = 1e-12


def _acos(x: float) -> float:
    if abs(x) > 1.0 + ACOS_CLAMP:
        raise NoIntersection(f"arccos argument {x!r} outside [-1, 1]")
    return math.acos(min(1.0, max(-1.0, x)))


@dataclass(frozen=True)
class TriangleGeometry:
    """Side lengths, prior gaps and angles of a weighted triangle.

    ``l1 = |u2 - u1|``, ``l2 = |u3 - u1|``, ``l3 = |u3 - u2|`` for weighted
    points ``u_i = q_i v_i`` in descending-prior order; ``e1 = q1 - q2`` and
    ``e2 = q1 - q3``.  ``theta1``/``theta2`` are interior angles at ``T1``/``T2``.
    The ``chi`` fields stay ``None`` when the branches do not intersect.
    """

    l1: float
    l2: float
    l3: float
    e1: float
    e2: float
    theta1: float
    theta2: float
    chi1: Optional[float] = None
    chi2: Optional[float] = None
    chi: Optional[float] = None

    @classmethod
    def from_sides(cls, l1: float, l2: float, l3: float, e1: float, e2: float) -> "TriangleGeometry":
        theta1 = _acos((l1 * l1 + l2 * l2 - l3 * l3) / (2.0 * l1 * l2))
        theta2 = _acos((l1 * l1 + l3 * l3 - l2 * l2) / (2.0 * l1 * l3))
        return cls(l1, l2, l3, e1, e2, theta1, theta2)

    @classmethod
    def from_angle(cls, l1: float, l2: float, theta1: float, e1: float, e2: float) -> "TriangleGeometry":
        l3 = math.sqrt(max(l1 * l1 + l2 * l2 - 2.0 * l1 * l2 * math.cos(theta1), 0.0))
        theta2 = _acos((l1 * l1 + l3 * l3 - l2 * l2) / (2.0 * l1 * l3))
        return cls(l1, l2, l3, e1, e2, theta1, theta2)

    def with_chi(self) -> "TriangleGeometry":
        """Copy with the chi fields filled in; raises :class:`NoIntersection`."""
        chi1, chi2, chi = compute_chi(self)
        return replace(self, chi1=chi1, chi2=chi2, chi=chi)


def hyperbola_radius(l: float, e: float, theta: float) -> float:
    """Distance from ``T`` to the branch ``r' - r = e`` along angle ``theta``."""
    if l <= e:
        raise DegenerateHyperbola(f"l = {l!r} <= e = {e!r}")
    den = l * math.cos(theta) + e
    if den <= 0.0:
        raise Unbounded(f"l cos(theta) + e = {den!r} <= 0")
    return (l * l - e * e) / (2.0 * den)


def chi_equation_sides(g: TriangleGeometry, chi: float) -> tuple[float, float]:
    """Both sides of the branch-intersection equation at angle ``chi``.

    Left: radius along ``chi`` of the branch on edge ``T1T2``.  Right: radius
    along ``theta1 - chi`` of the branch on edge ``T1T3``.
    """
    lhs = (g.l1**2 - g.e1**2) / (2.0 * (g.l1 * math.cos(chi) + g.e1))
    rhs = (g.l2**2 - g.e2**2) / (2.0 * (g.l2 * math.cos(g.theta1 - chi) + g.e2))
    return lhs, rhs


def compute_chi(g: TriangleGeometry) -> tuple[float, float, float]:
    """Angle ``chi = angle(O T1 T2)`` of the branch intersection.

    Returns ``(chi1, chi2, chi)`` with ``chi = chi2 - chi1``.  Raises
    :class:`NoIntersection` when the branches miss each other inside the
    open wedge ``(0, theta1)``.
    """
    l1, l2, e1, e2, t1 = g.l1, g.l2, g.e1, g.e2, g.theta1
    if not (l1 > e1 and l2 > e2):
        raise NoIntersection("a side is not longer than its prior gap")
    a1 = l1 * l1 - e1 * e1
    a2 = l2 * l2 - e2 * e2
    den_sq = l1**2 * a2**2 + l2**2 * a1**2 - 2.0 * l1 * l2 * a1 * a2 * math.cos(t1)
    den = math.sqrt(max(den_sq, 0.0))
    if den == 0.0:
        raise NoIntersection("degenerate angle")
    chi1 = _acos((l1 * a2 - l2 * a1 * math.cos(t1)) / den)
    chi2 = _acos((e2 * a1 - e1 * a2) / den)
    chi = chi2 - chi1
    if not 0.0 < chi < t1:
        raise NoIntersection(f"chi = {chi!r} outside (0, theta1 = {t1!r})")
    if l1 * math.cos(chi) + e1 <= 0.0 or l2 * math.cos(t1 - chi) + e2 <= 0.0:
        raise NoIntersection("intersection lies on the opposite branch")
    return chi1, chi2, chi


def curves_intersect(g: TriangleGeometry) -> bool:
    l1, l2, e1, e2, c = g.l1, g.l2, g.e1, g.e2, math.cos(g.theta1)
    return (l1 * c + e1) / (l1 + e1) < (l1 - e1) / (l2 - e2) and (l2 * c + e2) / (
        l2 + e2
    ) < (l2 - e2) / (l1 - e1)


def intersection_case(g: TriangleGeometry) -> int:
    """Which of the four angle regimes ``cos(theta1)`` falls in (1 to 4).

    The regimes compare ``cos(theta1)`` with ``-e1/l1`` and ``-e2/l2``.
    """
    c = math.cos(g.theta1)
    above1, above2 = c > -g.e1 / g.l1, c > -g.e2 / g.l2
    return {(True, True): 1, (True, False): 2, (False, True): 3, (False, False): 4}[
        (above1, above2)
    ]


def curves_intersect_by_case(g: TriangleGeometry) -> bool:
    """Same predicate as :func:`curves_intersect`, evaluated case by case."""
    l1, l2, e1, e2, c = g.l1, g.l2, g.e1, g.e2, math.cos(g.theta1)
    ratio = (l2 - e2) / (l1 - e1)
    low = (l2 * c + e2) / (l2 + e2)
    case = intersection_case(g)
    if case == 4:
        return True
    # case 3 has l1 cos(theta1) + e1 <= 0, where the upper bound is infinite
    if case == 3:
        return low < ratio
    high = (l1 + e1) / (l1 * c + e1)
    if case == 2:
        return ratio < high
    return low < ratio < high


def origin_bound(g: TriangleGeometry) -> float:
    """Length of ``T1 G``, where the ray ``T1 -> O`` meets edge ``T2 T3``."""
    s = math.sin(g.chi + g.theta2)
    if s <= 0.0:
        return math.inf
    return g.l1 * math.sin(g.theta2) / s


def origin_inside_triangle(g: TriangleGeometry, r1: float) -> bool:
    return r1 < origin_bound(g)


def triangle_conditions(g: TriangleGeometry) -> dict[str, bool]:
    """Evaluate the three feasibility conditions separately.

    ``sides``: ``l1 > e1`` and ``l2 > e2``; ``curves``: the branches meet;
    ``inside``: their meeting point lies inside the triangle.  Later keys are
    ``False`` whenever an earlier one fails.
    """
    out = {"sides": g.l1 > g.e1 and g.l2 > g.e2, "curves": False, "inside": False}
    if not out["sides"]:
        return out
    out["curves"] = curves_intersect(g)
    if not out["curves"]:
        return out
    try:
        chi = g.chi if g.chi is not None else compute_chi(g)[2]
        r1 = hyperbola_radius(g.l1, g.e1, chi)
    except (NoIntersection, Unbounded):
        return out
    out["inside"] = origin_inside_triangle(replace(g, chi=chi), r1)
    return out


def triangle_feasible(g: TriangleGeometry) -> bool:
    return all(triangle_conditions(g).values())
