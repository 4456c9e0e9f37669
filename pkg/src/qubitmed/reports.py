"""Problem files in, solution reports out.

Problem file (JSON, UTF-8)::

    {"schema": 1,
     "states": [{"prior": 0.5, "bloch": [0, 0, 1]},
                {"prior": 0.5, "rho": [[[0.5, 0], [0, 0]], [[0, 0], [0.5, 0]]]}],
     "options": {"oracle_tol": 1e-12, "verify": true}}

``rho`` entries are ``[re, im]`` pairs.  Reports list states in input order.
"""
from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from typing import Any, Optional

import numpy as np

from . import __version__
from .bloch import WeightedEnsemble, validate_ensemble
from .errors import QubitMedError
from .oracle import kkt_residuals, primal_check
from .solution import DiscriminationSolution

SCHEMA_VERSION = 1
OPTION_KEYS = {"oracle_tol", "verify", "tol", "kkt_tol"}


class ProblemError(QubitMedError, ValueError):
    """A problem or report file could not be parsed or validated."""


@dataclass
class ProblemFile:
    ensemble: WeightedEnsemble
    options: dict = field(default_factory=dict)
    digest: str = ""


def _parse_rho(raw, where: str) -> np.ndarray:
    try:
        arr = np.array(raw, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ProblemError(f"{where}: rho must be numeric: {exc}") from None
    if arr.shape != (2, 2, 2):
        raise ProblemError(f"{where}: rho must be a 2x2 matrix of [re, im] pairs")
    return arr[..., 0] + 1j * arr[..., 1]


def parse_problem(text: str) -> ProblemFile:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProblemError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise ProblemError("top level must be a JSON object")
    if doc.get("schema") != SCHEMA_VERSION:
        raise ProblemError(f"unsupported schema {doc.get('schema')!r}; expected {SCHEMA_VERSION}")
    states = doc.get("states")
    if not isinstance(states, list) or not states:
        raise ProblemError("'states' must be a nonempty list")
    entries = []
    for k, rec in enumerate(states):
        where = f"states[{k}]"
        if not isinstance(rec, dict) or "prior" not in rec:
            raise ProblemError(f"{where}: expected an object with a 'prior'")
        if ("bloch" in rec) == ("rho" in rec):
            raise ProblemError(f"{where}: give exactly one of 'bloch' or 'rho'")
        prior = rec["prior"]
        if isinstance(prior, bool) or not isinstance(prior, (int, float)):
            raise ProblemError(f"{where}: prior must be a number")
        if "bloch" in rec:
            state = rec["bloch"]
            if not (isinstance(state, list) and len(state) == 3):
                raise ProblemError(f"{where}: bloch must be a list of three numbers")
            try:
                state = np.array(state, dtype=float)
            except (TypeError, ValueError):
                raise ProblemError(f"{where}: bloch must be a list of three numbers") from None
        else:
            state = _parse_rho(rec["rho"], where)
        entries.append((float(prior), state))
    try:
        ens = validate_ensemble(entries)
    except QubitMedError as exc:
        raise ProblemError(f"states: {exc}") from None
    options = doc.get("options", {}) or {}
    if not isinstance(options, dict) or set(options) - OPTION_KEYS:
        raise ProblemError(f"options: allowed keys are {sorted(OPTION_KEYS)}")
    digest = hashlib.sha256(text.encode("utf-8")).hexdigest()
    return ProblemFile(ens, options, digest)


def load_problem(path: str) -> ProblemFile:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ProblemError(f"{path}: {exc.strerror}") from None
    except UnicodeDecodeError:
        raise ProblemError(f"{path}: not UTF-8") from None
    return parse_problem(text)


def problem_document(ens: WeightedEnsemble, options: Optional[dict] = None) -> dict:
    """Problem-file dictionary for an ensemble, states in input order."""
    states = ens.to_input_order(
        [{"prior": float(q), "bloch": [float(x) for x in v]} for q, v in zip(ens.priors, ens.vectors)]
    )
    doc = {"schema": SCHEMA_VERSION, "states": states}
    if options:
        doc["options"] = options
    return doc


def _floats(a) -> list:
    return [float(x) for x in np.asarray(a, float).ravel()]


def _matrix(m) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(m)]


def _finite(obj: Any) -> Any:
    if isinstance(obj, float) and not math.isfinite(obj):
        raise ValueError(f"non-finite value {obj!r} in report")
    if isinstance(obj, dict):
        return {k: _finite(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_finite(v) for v in obj]
    return obj


def solution_report(
    ens: WeightedEnsemble,
    sol: DiscriminationSolution,
    digest: str = "",
    oracle_value: Optional[float] = None,
    seed: Optional[int] = None,
) -> dict:
    primal = primal_check(ens, sol.povm)
    kkt = kkt_residuals(ens, sol)
    cs = sol.complementary
    mats = sol.povm.matrices()
    per_state = []
    for k in range(ens.n):
        per_state.append(
            {
                "index": ens.original_index[k],
                "prior": float(ens.priors[k]),
                "bloch": _floats(ens.vectors[k]),
                "povm": {
                    "p": float(sol.povm.weights[k]),
                    "w": _floats(sol.povm.directions[k]),
                    "matrix": _matrix(mats[k]),
                },
                "complementary": {
                    "r": float(cs.r[k]),
                    "w": _floats(cs.w[k]),
                    "free": bool(cs.free[k]),
                },
            }
        )
    residuals = {
        "primal_value": primal.p_corr,
        "completeness": primal.completeness,
        "positivity": primal.positivity,
        "primal_gap": abs(primal.p_corr - sol.p_guess),
        "certificate_violation": max(0.0, sol.certificate.violation(ens)),
        "kkt": {
            "completeness": kkt.povm_completeness,
            "positivity": kkt.povm_positivity,
            "stationarity": kkt.stationarity,
            "slackness": kkt.slackness,
        },
    }
    if oracle_value is not None:
        residuals["oracle_value"] = float(oracle_value)
        residuals["duality_gap"] = abs(float(oracle_value) - sol.p_guess)
    report = {
        "schema": SCHEMA_VERSION,
        "p_guess": float(sol.p_guess),
        "branch": str(sol.branch.mapped(ens.original_index)),
        "states": ens.to_input_order(per_state),
        "certificate": {"k0": float(sol.certificate.k0), "k": _floats(sol.certificate.k)},
        "residuals": residuals,
        "provenance": {"input_sha256": digest, "tool": "qubitmed", "version": __version__, "seed": seed},
    }
    return _finite(report)


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2, allow_nan=False) + "\n"
