"""Result types shared by the closed-form solvers, the oracle and the verifiers."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .bloch import WeightedEnsemble, pauli_components, pauli_operator


@dataclass(frozen=True, eq=False)
class Povm:
    """Qubit POVM with elements ``M_i = p_i (I - w_i . sigma)``.

    ``|w_i| <= 1`` keeps every element positive.  Rank-one elements have unit
    ``w_i``; the identity element is ``p = 1, w = 0``.  Zero elements have
    ``p_i = 0`` and carry no meaningful direction.
    """

    weights: np.ndarray
    directions: np.ndarray

    @classmethod
    def identity_on(cls, n: int, index: int) -> "Povm":
        weights = np.zeros(n)
        weights[index] = 1.0
        return cls(weights, np.zeros((n, 3)))

    @classmethod
    def from_matrices(cls, mats) -> "Povm":
        weights, directions = [], []
        for m in mats:
            scalar, vec = pauli_components(m)
            weights.append(scalar)
            directions.append(-vec / scalar if scalar > 0 else np.zeros(3))
        return cls(np.array(weights), np.array(directions))

    def __len__(self) -> int:
        return len(self.weights)

    @property
    def nonzero(self) -> np.ndarray:
        return self.weights > 0.0

    def matrices(self) -> list[np.ndarray]:
        return [pauli_operator(p, -p * w) for p, w in zip(self.weights, self.directions)]

    def completeness_residual(self) -> float:
        """Max deviation of ``sum_i M_i`` from the identity, in Pauli components."""
        total = float(np.sum(self.weights)) - 1.0
        vec = np.sum(self.weights[:, None] * self.directions, axis=0)
        return max(abs(total), float(np.max(np.abs(vec))))

    def positivity_residual(self) -> float:
        """How far the smallest element eigenvalue ``p (1 - |w|)`` is below zero."""
        lows = self.weights * (1.0 - np.linalg.norm(self.directions, axis=1))
        return max(0.0, -float(np.min(np.minimum(lows, self.weights))))

    def embed(self, n: int, indices) -> "Povm":
        """Place this POVM on positions ``indices`` of an ``n``-element POVM."""
        weights, directions = np.zeros(n), np.zeros((n, 3))
        weights[list(indices)] = self.weights
        directions[list(indices)] = self.directions
        return Povm(weights, directions)


@dataclass(frozen=True, eq=False)
class ComplementarySolution:
    """Dual-side data: ``K = q_i rho_i + r_i rho~_i`` with ``rho~_i = (I + w_i.sigma)/2``.

    ``free[i]`` marks entries with ``r_i = 0``, whose direction is unconstrained.
    """

    r: np.ndarray
    w: np.ndarray
    free: np.ndarray = None

    def __post_init__(self):
        if self.free is None:
            object.__setattr__(self, "free", np.zeros(len(self.r), dtype=bool))


@dataclass(frozen=True, eq=False)
class DualCertificate:
    """Dual operator ``K = k0 I + k . sigma``; ``tr K = 2 k0`` bounds the guessing probability."""

    k0: float
    k: np.ndarray

    @classmethod
    def from_center(cls, value: float, center) -> "DualCertificate":
        """Certificate for objective ``value`` at Bloch-space point ``center = 2k``."""
        return cls(0.5 * float(value), 0.5 * np.asarray(center, dtype=float))

    @property
    def value(self) -> float:
        return 2.0 * self.k0

    @property
    def center(self) -> np.ndarray:
        return 2.0 * self.k

    def matrix(self) -> np.ndarray:
        return pauli_operator(self.k0, self.k)

    def violation(self, ens: WeightedEnsemble) -> float:
        """Largest violation of ``K - q_i rho_i >= 0`` (negative when strictly feasible)."""
        slack = self.k0 - 0.5 * ens.priors
        dist = np.linalg.norm(self.k - 0.5 * ens.points, axis=1)
        return float(np.max(dist - slack))

    def scaled(self, factor: float) -> "DualCertificate":
        return DualCertificate(self.k0 * factor, self.k * factor)


POINT_BRANCH = "point"
PAIR_BRANCH = "pair"
TRIANGLE_BRANCH = "triangle"
SUBSET_BRANCH = "subset"
NUMERIC_BRANCH = "numeric"


@dataclass(frozen=True)
class Branch:
    """Which solution path produced a result.

    ``indices`` are sorted-ensemble positions.  A subset branch wraps the
    branch its sub-ensemble took in ``inner``, with inner indices expressed
    in the parent's positions.
    """

    kind: str
    indices: tuple[int, ...] = ()
    inner: Optional["Branch"] = None

    def __str__(self) -> str:
        name = {
            POINT_BRANCH: "PointBranch",
            PAIR_BRANCH: "PairBranch",
            TRIANGLE_BRANCH: "TriangleBranch",
            SUBSET_BRANCH: "SubsetBranch",
            NUMERIC_BRANCH: "NumericBranch",
        }[self.kind]
        text = f"{name}({','.join(map(str, self.indices))})"
        if self.inner is not None:
            text += f"[{self.inner}]"
        return text

    @property
    def leaf(self) -> "Branch":
        return self.inner.leaf if self.inner is not None else self

    def mapped(self, indices) -> "Branch":
        """Re-express positions through ``indices`` (sub-ensemble to parent)."""
        inner = self.inner.mapped(indices) if self.inner is not None else None
        return Branch(self.kind, tuple(indices[i] for i in self.indices), inner)


@dataclass(frozen=True, eq=False)
class DiscriminationSolution:
    p_guess: float
    povm: Povm
    complementary: Optional[ComplementarySolution]
    branch: Branch
    certificate: DualCertificate
    extra: dict = field(default_factory=dict)
