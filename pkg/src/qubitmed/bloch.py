"""Qubit states in the Pauli basis and the weighted-ensemble data model.

A qubit density matrix is ``rho = (I + v . sigma) / 2`` with a real Bloch
vector ``v``, ``|v| <= 1``.  Bloch vectors are plain ``numpy`` arrays of
shape ``(3,)``; density matrices are complex ``(2, 2)`` arrays.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import BadPriors, NonPhysicalBloch, NonPhysicalDensity

#: Slack used by every physicality check.
EPS_VALID = 1e-12

IDENTITY = np.eye(2, dtype=complex)
PAULI = np.array(
    [
        [[0, 1], [1, 0]],
        [[0, -1j], [1j, 0]],
        [[1, 0], [0, -1]],
    ],
    dtype=complex,
)


def pauli_operator(scalar: float, vector) -> np.ndarray:
    """Return ``scalar * I + vector . sigma`` without any validation."""
    vector = np.asarray(vector, dtype=float)
    return scalar * IDENTITY + np.tensordot(vector, PAULI, axes=1)


def pauli_components(op: np.ndarray) -> tuple[float, np.ndarray]:
    """Inverse of :func:`pauli_operator` for a Hermitian 2x2 matrix."""
    op = np.asarray(op, dtype=complex)
    scalar = 0.5 * np.trace(op).real
    vector = np.array([0.5 * np.trace(op @ s).real for s in PAULI])
    return scalar, vector


def as_bloch(v) -> np.ndarray:
    v = np.asarray(v, dtype=float).reshape(-1)
    if v.shape != (3,) or not np.all(np.isfinite(v)):
        raise NonPhysicalBloch(f"Bloch vector must be 3 finite reals, got {v!r}")
    return v


def check_bloch(v, eps: float = EPS_VALID) -> np.ndarray:
    """Validate a physical Bloch vector.

    Vectors whose norm exceeds one by at most ``eps`` are rescaled onto the
    unit sphere; anything longer raises :class:`NonPhysicalBloch`.
    """
    v = as_bloch(v)
    norm = float(np.linalg.norm(v))
    if norm > 1.0 + eps:
        raise NonPhysicalBloch(f"|v| = {norm!r} exceeds 1")
    if norm > 1.0:
        v = v / norm
    return v


def bloch_to_density(v) -> np.ndarray:
    v = check_bloch(v)
    return 0.5 * pauli_operator(1.0, v)


def density_to_bloch(rho, eps: float = EPS_VALID) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (2, 2) or not np.all(np.isfinite(rho)):
        raise NonPhysicalDensity("density matrix must be a finite 2x2 array")
    if np.max(np.abs(rho - rho.conj().T)) > eps:
        raise NonPhysicalDensity("density matrix is not Hermitian")
    herm = 0.5 * (rho + rho.conj().T)
    trace = np.trace(herm).real
    if abs(trace - 1.0) > eps:
        raise NonPhysicalDensity(f"trace {trace!r} != 1")
    if np.min(np.linalg.eigvalsh(herm)) < -eps:
        raise NonPhysicalDensity("density matrix has a negative eigenvalue")
    _, half = pauli_components(herm)
    return check_bloch(2.0 * half, eps)


def trace_norm_weighted_diff(qa: float, va, qb: float, vb) -> float:
    """Trace norm of ``qa * rho_a - qb * rho_b``.

    The difference is ``a0 I + a . sigma`` with eigenvalues ``a0 +- |a|``.
    """
    a0 = 0.5 * (qa - qb)
    a = 0.5 * float(np.linalg.norm(qa * as_bloch(va) - qb * as_bloch(vb)))
    return abs(a0 + a) + abs(a0 - a)


@dataclass(frozen=True, eq=False)
class WeightedEnsemble:
    """A discrimination instance ``{q_i, rho_i}`` with priors sorted descending.

    ``original_index[k]`` is the position in the caller's input of the state
    stored at sorted position ``k``.
    """

    priors: np.ndarray
    vectors: np.ndarray
    original_index: tuple[int, ...]

    def __post_init__(self):
        for arr in (self.priors, self.vectors):
            arr.setflags(write=False)

    @property
    def n(self) -> int:
        return len(self.priors)

    def __len__(self) -> int:
        return self.n

    @property
    def points(self) -> np.ndarray:
        """Weighted Bloch points ``q_i v_i``, shape ``(N, 3)``."""
        return self.priors[:, None] * self.vectors

    def densities(self) -> list[np.ndarray]:
        return [bloch_to_density(v) for v in self.vectors]

    def subset(self, indices: Sequence[int]) -> tuple["WeightedEnsemble", float]:
        """Restrict to sorted positions ``indices`` and renormalise the priors.

        Returns the sub-ensemble and its prior mass.  The sub-ensemble keeps the
        sorted order, and its ``original_index`` refers to positions in *this*
        ensemble.
        """
        idx = tuple(sorted(indices))
        mass = float(np.sum(self.priors[list(idx)]))
        sub = WeightedEnsemble(
            priors=self.priors[list(idx)] / mass,
            vectors=self.vectors[list(idx)].copy(),
            original_index=idx,
        )
        return sub, mass

    def to_input_order(self, values: Sequence) -> list:
        """Reorder per-state ``values`` from sorted order back to input order."""
        out = [None] * self.n
        for k, orig in enumerate(self.original_index):
            out[orig] = values[k]
        return out


def validate_ensemble(entries: Iterable, eps: float = EPS_VALID) -> WeightedEnsemble:
    """Build a :class:`WeightedEnsemble` from ``(prior, state)`` pairs.

    ``state`` may be a Bloch vector or a 2x2 density matrix.  Priors must be
    positive and sum to one within ``eps``; they are then rescaled to sum to
    one exactly.  Ties keep input order.
    """
    priors, vectors = [], []
    for prior, state in entries:
        state = np.asarray(state)
        if state.shape == (2, 2):
            v = density_to_bloch(state, eps)
        else:
            v = check_bloch(state, eps)
        priors.append(float(prior))
        vectors.append(v)
    if not priors:
        raise BadPriors("ensemble is empty")
    q = np.array(priors)
    if not np.all(np.isfinite(q)) or np.any(q <= 0.0):
        raise BadPriors(f"priors must be positive, got {priors}")
    total = float(np.sum(q))
    if abs(total - 1.0) > eps:
        raise BadPriors(f"priors sum to {total!r}, not 1")
    q = q / total
    order = sorted(range(len(q)), key=lambda i: -q[i])
    return WeightedEnsemble(
        priors=q[order],
        vectors=np.array(vectors)[order],
        original_index=tuple(order),
    )


def ensemble_from_arrays(priors, vectors) -> WeightedEnsemble:
    return validate_ensemble(zip(np.asarray(priors, float), np.asarray(vectors, float)))
