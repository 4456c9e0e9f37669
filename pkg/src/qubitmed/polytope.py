"""Intrinsic polytope: the convex hull of the weighted Bloch points ``q_i v_i``.

The number of extreme points decides which closed form applies.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np
from scipy.optimize import linprog

from .bloch import WeightedEnsemble

#: Relative geometric tolerance for degeneracy decisions.
EPS_GEOM = 1e-9


@dataclass(frozen=True)
class Shape:
    """Polytope shape tag: ``kind`` is point, segment, triangle or higher."""

    kind: str
    indices: tuple[int, ...]

    def __str__(self) -> str:
        if self.kind == "higher":
            return f"Higher({len(self.indices)})"
        return f"{self.kind.capitalize()}({','.join(map(str, self.indices))})"


POINT, SEGMENT, TRIANGLE, HIGHER = "point", "segment", "triangle", "higher"


@dataclass(frozen=True, eq=False)
class IntrinsicPolytope:
    points: np.ndarray
    extreme_indices: tuple[int, ...]
    shape: Shape
    dimension: int


def affine_dimension(points, eps: float = EPS_GEOM) -> int:
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if len(pts) < 2:
        return 0
    centered = pts - pts.mean(axis=0)
    sv = np.linalg.svd(centered, compute_uv=False)
    scale = float(np.max(np.linalg.norm(pts, axis=1))) + 1.0
    return int(np.sum(sv > eps * scale))


def _in_hull(point, others, eps: float) -> bool:
    """L1 distance from ``point`` to conv(``others``) is at most ``eps``.

    Variables are the convex weights and a split slack ``s+ - s-``.
    """
    k, d = others.shape
    c = np.concatenate([np.zeros(k), np.ones(2 * d)])
    a_eq = np.zeros((d + 1, k + 2 * d))
    a_eq[:d, :k] = others.T
    a_eq[:d, k : k + d] = -np.eye(d)
    a_eq[:d, k + d :] = np.eye(d)
    a_eq[d, :k] = 1.0
    b_eq = np.concatenate([point, [1.0]])
    res = linprog(c, A_eq=a_eq, b_eq=b_eq, bounds=(0, None), method="highs")
    return bool(res.status == 0 and res.fun <= eps)


def _farthest_pair(points, indices) -> tuple[int, int]:
    best, pair = -1.0, (indices[0], indices[-1])
    for i, j in combinations(indices, 2):
        dist = float(np.linalg.norm(points[i] - points[j]))
        if dist > best:
            best, pair = dist, (i, j)
    return tuple(sorted(pair))


def extreme_points(points, eps: float = EPS_GEOM) -> tuple[tuple[int, ...], int]:
    """Indices of the extreme points and the affine dimension of the hull.

    Duplicates (closer than ``eps``) are represented by the lowest index.
    """
    pts = np.asarray(points, dtype=float)
    unique: list[int] = []
    for i in range(len(pts)):
        if all(np.linalg.norm(pts[i] - pts[j]) >= eps for j in unique):
            unique.append(i)
    dim = affine_dimension(pts[unique], eps)
    if dim == 0:
        return (unique[0],), 0
    if dim == 1:
        return _farthest_pair(pts, unique), 1
    if len(unique) == dim + 1:
        return tuple(unique), dim
    scale = float(np.max(np.linalg.norm(pts, axis=1))) + 1.0
    extreme = []
    for i in unique:
        others = pts[[j for j in unique if j != i]]
        if not _in_hull(pts[i], others, eps * scale):
            extreme.append(i)
    return tuple(extreme), dim


def build_polytope(ens: WeightedEnsemble, eps: float = EPS_GEOM) -> IntrinsicPolytope:
    pts = ens.points
    extreme, dim = extreme_points(pts, eps)
    if len(extreme) == 1:
        shape = Shape(POINT, extreme)
    elif len(extreme) == 2:
        shape = Shape(SEGMENT, extreme)
    elif len(extreme) == 3:
        a, b, c = (pts[i] for i in extreme)
        longest = max(np.linalg.norm(b - a), np.linalg.norm(c - a), np.linalg.norm(c - b))
        # thin triangles: the triangle formulas divide by sin(theta_1)
        if np.linalg.norm(np.cross(b - a, c - a)) <= eps * longest**2:
            extreme = _farthest_pair(pts, extreme)
            shape = Shape(SEGMENT, extreme)
        else:
            shape = Shape(TRIANGLE, extreme)
    else:
        shape = Shape(HIGHER, extreme)
    return IntrinsicPolytope(points=pts, extreme_indices=extreme, shape=shape, dimension=dim)
