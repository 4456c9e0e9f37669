"""Command-line front end.

Exit codes: 0 success, 1 input error, 2 verification failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from collections import Counter

import numpy as np

from .closed_form import make_symmetric_ensemble, solve_three, symmetric_guess_formula, triangle_geometry
from .errors import QubitMedError, Unrealizable
from .hyperbola import hyperbola_radius, origin_bound, triangle_conditions
from .oracle import dual_solve, primal_check, random_ensemble
from .polytope import TRIANGLE, build_polytope
from .reports import ProblemError, dumps, load_problem, solution_report
from .solution import DualCertificate, Povm
from .solver import solve_n

EXIT_OK, EXIT_INPUT, EXIT_VERIFY = 0, 1, 2


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    if rows:
        writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
    return buf.getvalue()


def _render(doc: dict, rows: list[dict], fmt: str) -> str:
    return _csv(rows) if fmt == "csv" else dumps(doc)


def cmd_solve(args) -> int:
    problem = load_problem(args.problem)
    opts = problem.options
    oracle_tol = args.oracle_tol if args.oracle_tol is not None else opts.get("oracle_tol", 1e-12)
    tol = args.tol if args.tol is not None else opts.get("tol", 1e-7)
    kkt_tol = args.kkt_tol if args.kkt_tol is not None else opts.get("kkt_tol", 1e-8)
    verify = args.verify if args.verify is not None else bool(opts.get("verify", True))
    ens = problem.ensemble
    sol = solve_n(ens, oracle_tol)
    oracle_value = dual_solve(ens, oracle_tol)[0] if verify else None
    report = solution_report(ens, sol, problem.digest, oracle_value)
    rows = [
        {
            "index": s["index"],
            "prior": s["prior"],
            "p": s["povm"]["p"],
            "wx": s["povm"]["w"][0],
            "wy": s["povm"]["w"][1],
            "wz": s["povm"]["w"][2],
            "r": s["complementary"]["r"],
        }
        for s in report["states"]
    ]
    _emit(_render(report, rows, args.format), args.out)
    if verify:
        res = report["residuals"]
        worst_kkt = max(res["kkt"].values())
        if res["duality_gap"] > tol or res["primal_gap"] > tol or worst_kkt > kkt_tol:
            print(
                f"verification failed: duality gap {res['duality_gap']:.3e}, "
                f"primal gap {res['primal_gap']:.3e}, KKT residual {worst_kkt:.3e}",
                file=sys.stderr,
            )
            return EXIT_VERIFY
    return EXIT_OK


def _condition_message(cond: dict, g) -> str:
    if not cond["sides"]:
        return "infeasible: l1 <= e1" if g.l1 <= g.e1 else "infeasible: l2 <= e2"
    if not cond["curves"]:
        return "infeasible: hyperbola branches do not intersect"
    if not cond["inside"]:
        return "infeasible: branch intersection lies outside the triangle"
    return "feasible"


def cmd_classify(args) -> int:
    problem = load_problem(args.problem)
    ens = problem.ensemble
    poly = build_polytope(ens)
    to_input = ens.original_index
    doc = {
        "shape": poly.shape.kind,
        "shape_tag": str(type(poly.shape)(poly.shape.kind, tuple(sorted(to_input[i] for i in poly.shape.indices)))),
        "extreme_indices": sorted(to_input[i] for i in poly.extreme_indices),
        "affine_dimension": poly.dimension,
    }
    if poly.shape.kind == TRIANGLE and ens.n == 3:
        g = triangle_geometry(ens)
        cond = triangle_conditions(g)
        geo = {
            "vertex_order": list(to_input),
            "l1": g.l1,
            "l2": g.l2,
            "l3": g.l3,
            "e1": g.e1,
            "e2": g.e2,
            "theta1": g.theta1,
            "theta2": g.theta2,
            "theta1_deg": math.degrees(g.theta1),
            "theta2_deg": math.degrees(g.theta2),
        }
        if g.chi is not None:
            r1 = hyperbola_radius(g.l1, g.e1, g.chi)
            geo.update(
                chi=g.chi,
                chi1=g.chi1,
                chi2=g.chi2,
                chi_deg=math.degrees(g.chi),
                r1=r1,
                origin_bound=origin_bound(g) if math.isfinite(origin_bound(g)) else None,
            )
        doc["triangle"] = geo
        doc["conditions"] = cond
        doc["status"] = _condition_message(cond, g)
    _emit(dumps(doc), args.out)
    return EXIT_OK


def symmetric_row(r: float, gamma: float, oracle_tol: float = 1e-12) -> dict:
    try:
        formula = symmetric_guess_formula(r, gamma)
        ens = make_symmetric_ensemble(r, gamma)
    except Unrealizable:
        return {"r": r, "gamma": gamma, "realizable": False, "formula": None,
                "solve_three": None, "oracle": None, "discrepancy": None}
    closed = solve_three(ens).p_guess
    oracle = dual_solve(ens, oracle_tol)[0]
    spread = max(formula, closed, oracle) - min(formula, closed, oracle)
    return {"r": r, "gamma": gamma, "realizable": True, "formula": formula,
            "solve_three": closed, "oracle": oracle, "discrepancy": spread}


def symmetric_grid(n_r: int, n_gamma: int, r_min: float = 0.2, r_max: float = 1.0):
    """Realizable grid with ``r > gamma``: gamma runs from ``-r/2`` up to (excluding) ``r``."""
    for r in np.linspace(r_min, r_max, n_r):
        for gamma in np.linspace(-0.5 * r, r, n_gamma + 1)[:-1]:
            yield float(r), float(gamma)


def cmd_symmetric(args) -> int:
    if args.sweep:
        points = list(symmetric_grid(args.sweep[0], args.sweep[1]))
    elif args.r is not None and args.gamma is not None:
        points = [(args.r, args.gamma)]
    else:
        print("give R GAMMA or --sweep NR NGAMMA", file=sys.stderr)
        return EXIT_INPUT
    rows = [symmetric_row(r, g, args.oracle_tol) for r, g in points]
    gaps = [row["discrepancy"] for row in rows if row["realizable"]]
    worst = max(gaps) if gaps else 0.0
    doc = {"rows": rows, "max_discrepancy": worst}
    _emit(_render(doc, rows, args.format), args.out)
    return EXIT_VERIFY if worst > args.tol else EXIT_OK


def cmd_fuzz(args) -> int:
    lo, hi = args.purity
    branches: Counter = Counter()
    failures, worst = [], 0.0
    rows = []
    for seed in range(args.seed, args.seed + args.seeds):
        ens = random_ensemble(seed, args.n, lo, hi)
        sol = solve_n(ens, args.oracle_tol)
        oracle = dual_solve(ens, args.oracle_tol)[0]
        gap = abs(sol.p_guess - oracle)
        kind = sol.branch.leaf.kind
        branches[kind] += 1
        worst = max(worst, gap)
        if gap > args.tol:
            failures.append(seed)
        rows.append({"seed": seed, "p_guess": sol.p_guess, "oracle": oracle, "gap": gap, "branch": str(sol.branch)})
    doc = {
        "n": args.n,
        "seeds": [args.seed, args.seed + args.seeds],
        "purity": [lo, hi],
        "max_gap": worst,
        "branches": dict(sorted(branches.items())),
        "failures": failures,
    }
    _emit(_render(doc, rows, args.format), args.out)
    return EXIT_VERIFY if failures else EXIT_OK


def cmd_verify(args) -> int:
    """Re-check a report's measurement and dual operator against its problem."""
    problem = load_problem(args.problem)
    ens = problem.ensemble
    try:
        with open(args.report, encoding="utf-8") as fh:
            report = json.load(fh)
        by_index = {s["index"]: s for s in report["states"]}
        ordered = [by_index[i] for i in ens.original_index]
        povm = Povm(
            np.array([s["povm"]["p"] for s in ordered], float),
            np.array([s["povm"]["w"] for s in ordered], float),
        )
        k0 = float(report["certificate"]["k0"])
        k = np.array(report["certificate"]["k"], float)
        p_guess = float(report["p_guess"])
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise ProblemError(f"{args.report}: unreadable report ({exc})") from None
    cert = DualCertificate(k0, k)
    primal = primal_check(ens, povm)
    doc = {
        "p_guess": p_guess,
        "primal_value": primal.p_corr,
        "dual_value": cert.value,
        "certificate_violation": cert.violation(ens),
        "positivity": primal.positivity,
        "completeness": primal.completeness,
    }
    ok = (
        abs(primal.p_corr - p_guess) <= args.tol
        and abs(cert.value - p_guess) <= args.tol
        and doc["certificate_violation"] <= args.tol
        and primal.positivity <= args.tol
    )
    doc["verified"] = ok
    _emit(dumps(doc), args.out)
    return EXIT_OK if ok else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qubitmed", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, fmt=True):
        p.add_argument("--out", help="write to this file instead of stdout")
        if fmt:
            p.add_argument("--format", choices=("json", "csv"), default="json")

    p = sub.add_parser("solve", help="solve a problem file")
    p.add_argument("problem")
    common(p)
    p.add_argument("--verify", dest="verify", action="store_true", default=None)
    p.add_argument("--no-verify", dest="verify", action="store_false")
    p.add_argument("--tol", type=float, default=None, help="oracle agreement tolerance (1e-7)")
    p.add_argument("--kkt-tol", type=float, default=None, help="KKT residual tolerance (1e-8)")
    p.add_argument("--oracle-tol", type=float, default=None, help="dual gap tolerance (1e-12)")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("classify", help="report polytope shape and triangle conditions")
    p.add_argument("problem")
    common(p, fmt=False)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("symmetric", help="symmetric three-state family")
    p.add_argument("r", type=float, nargs="?")
    p.add_argument("gamma", type=float, nargs="?")
    p.add_argument("--sweep", type=int, nargs=2, metavar=("NR", "NGAMMA"))
    p.add_argument("--tol", type=float, default=1e-7)
    p.add_argument("--oracle-tol", type=float, default=1e-12)
    common(p)
    p.set_defaults(func=cmd_symmetric)

    p = sub.add_parser("fuzz", help="random ensembles against the dual oracle")
    p.add_argument("--seeds", type=int, default=100)
    p.add_argument("--seed", type=int, default=0, help="first seed")
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--purity", type=float, nargs=2, default=(0.0, 1.0), metavar=("MIN", "MAX"))
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--oracle-tol", type=float, default=1e-12)
    common(p)
    p.set_defaults(func=cmd_fuzz)

    p = sub.add_parser("verify", help="re-check a solution report")
    p.add_argument("problem")
    p.add_argument("report")
    p.add_argument("--tol", type=float, default=1e-9)
    common(p, fmt=False)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "seeds", 1) is not None and getattr(args, "seeds", 1) < 1:
        print("--seeds must be positive", file=sys.stderr)
        return EXIT_INPUT
    try:
        return args.func(args)
    except (ProblemError, QubitMedError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
