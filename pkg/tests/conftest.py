import numpy as np
import pytest

from qubitmed.bloch import ensemble_from_arrays
from qubitmed.oracle import random_ensemble

ACCEPTANCE_LINES: list[str] = []


def record(criterion: str, ok: bool, detail: str) -> None:
    ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] {criterion}: {detail}")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def trine_vectors():
    angles = 2 * np.pi * np.arange(3) / 3
    return np.column_stack([np.cos(angles), np.sin(angles), np.zeros(3)])


def random_unit(rng, n):
    x = rng.standard_normal((n, 3))
    return x / np.linalg.norm(x, axis=1)[:, None]


def point_ensemble(seed, n=3):
    """Distinct priors whose weighted points coincide exactly."""
    rng = np.random.default_rng(seed)
    q = np.sort(rng.dirichlet(np.ones(n)))[::-1]
    target = random_unit(rng, 1)[0] * rng.uniform(0.0, q[-1])
    return ensemble_from_arrays(q, target[None, :] / q[:, None])


def interior_ensemble(seed):
    """Four states whose fourth weighted point lies strictly inside the other three's triangle."""
    rng = np.random.default_rng(10_000 + seed)
    while True:
        base = random_ensemble(seed, 3, 0.3, 1.0)
        u = base.points
        if np.linalg.norm(np.cross(u[1] - u[0], u[2] - u[0])) > 1e-3:
            break
        seed += 7919
    lam = rng.dirichlet(np.ones(3))
    x = lam @ u
    q4 = np.linalg.norm(x) + rng.uniform(0.01, 0.5)
    priors = np.append(base.priors, q4)
    vectors = np.vstack([base.vectors, x / q4])
    return ensemble_from_arrays(priors / priors.sum(), vectors)


@pytest.fixture
def trine():
    return ensemble_from_arrays(np.full(3, 1 / 3), trine_vectors())


def random_geometry(rng):
    """Triangle geometry with sorted-prior gaps ``0 <= e1 <= e2`` and sides at least the gaps."""
    from qubitmed.hyperbola import TriangleGeometry

    l1, l2 = rng.uniform(0.05, 1.0, 2)
    theta1 = rng.uniform(0.02, np.pi - 0.02)
    e2 = rng.uniform(0.0, l2)
    e1 = rng.uniform(0.0, min(e2, l1))
    return TriangleGeometry.from_angle(l1, l2, theta1, e1, e2)
