"""N-state dispatcher: closed forms where they apply, numerics beyond them.

The guessing probability obeys the subset reduction

    P(ens) = max over S of  mass(S) * P(ens restricted to S, priors renormalised)

whenever the optimal measurement leaves some element at zero.  Point and
segment polytopes are solved by their closed forms for any number of states.
A triangle polytope is planar; the dual optimum is then pinned by at most three
tight constraints, so the maximum over three-state subsets is exact.  With four
or more extreme points the dual oracle supplies the value, and proper subsets
are still searched so that an exact closed-form branch wins whenever it attains
the same value.
"""
from __future__ import annotations

from itertools import combinations

import numpy as np

from .bloch import WeightedEnsemble
from .closed_form import solve_pair_reduction, solve_point, solve_three
from .errors import TooManyStates
from .kkt import extract_complementary, recover_povm
from .oracle import dual_solve
from .polytope import POINT, SEGMENT, TRIANGLE, build_polytope
from .solution import NUMERIC_BRANCH, SUBSET_BRANCH, Branch, DiscriminationSolution

MAX_STATES = 8
SUBSET_MATCH = 1e-9
TIE_TOL = 1e-12


def lift_solution(
    parent: WeightedEnsemble, indices, mass: float, sub: DiscriminationSolution
) -> DiscriminationSolution:
    """Express a sub-ensemble solution as a solution of ``parent``.

    The measurement is padded with zero elements; the dual operator scales by
    the prior mass of the subset.  A sub-ensemble that was itself solved on a
    subset keeps only the innermost subset in its branch tag.
    """
    indices = tuple(indices)
    cert = sub.certificate.scaled(mass)
    inner = sub.branch.mapped(indices)
    # nested subsets collapse to the innermost one
    branch = inner if inner.kind == SUBSET_BRANCH else Branch(SUBSET_BRANCH, indices, inner)
    return DiscriminationSolution(
        p_guess=mass * sub.p_guess,
        povm=sub.povm.embed(parent.n, indices),
        complementary=extract_complementary(parent, cert, strict=False),
        branch=branch,
        certificate=cert,
    )


def _best(candidates: list[DiscriminationSolution]) -> DiscriminationSolution:
    top = max(c.p_guess for c in candidates)
    return next(c for c in candidates if c.p_guess >= top - TIE_TOL)


def _best_triple(ens: WeightedEnsemble) -> DiscriminationSolution:
    candidates = []
    for idx in combinations(range(ens.n), 3):
        sub, mass = ens.subset(idx)
        candidates.append(lift_solution(ens, idx, mass, solve_three(sub)))
    return _best(candidates)


def _numeric(ens: WeightedEnsemble, tol: float) -> DiscriminationSolution:
    value, cert = dual_solve(ens, tol)
    cs = extract_complementary(ens, cert, strict=False)
    return DiscriminationSolution(
        p_guess=value,
        povm=recover_povm(ens, cs),
        complementary=cs,
        branch=Branch(NUMERIC_BRANCH, tuple(range(ens.n))),
        certificate=cert,
    )


def _solve(ens: WeightedEnsemble, tol: float, memo: dict, key: tuple) -> DiscriminationSolution:
    if key in memo:
        return memo[key]
    if ens.n == 1:
        sol = solve_point(ens)
    else:
        kind = build_polytope(ens).shape.kind
        if kind == POINT:
            sol = solve_point(ens)
        elif kind == SEGMENT:
            sol = solve_pair_reduction(ens)
        elif kind == TRIANGLE:
            sol = solve_three(ens) if ens.n == 3 else _best_triple(ens)
        else:
            numeric = _numeric(ens, tol)
            subsets = []
            for size in range(ens.n - 1, 0, -1):
                for idx in combinations(range(ens.n), size):
                    sub, mass = ens.subset(idx)
                    sub_key = tuple(key[i] for i in idx)
                    subsets.append(lift_solution(ens, idx, mass, _solve(sub, tol, memo, sub_key)))
            best_subset = _best(subsets)
            sol = best_subset if best_subset.p_guess >= numeric.p_guess - SUBSET_MATCH else numeric
    memo[key] = sol
    return sol


def solve_n(ens: WeightedEnsemble, tol: float = 1e-12) -> DiscriminationSolution:
    """Optimal guessing probability and measurement for up to eight qubit states.

    ``tol`` is the gap tolerance handed to the dual oracle when no closed form
    covers the instance.
    """
    if ens.n > MAX_STATES:
        raise TooManyStates(f"{ens.n} states exceed the limit of {MAX_STATES}")
    sol = _solve(ens, tol, {}, tuple(range(ens.n)))
    lo = float(np.max(ens.priors))
    if not lo <= sol.p_guess <= 1.0:
        clamped = min(max(sol.p_guess, lo), 1.0)
        sol = DiscriminationSolution(clamped, sol.povm, sol.complementary, sol.branch, sol.certificate, sol.extra)
    return sol
