"""End-to-end experiment runs: iterate, analyse, check contracts, write artifacts."""

from __future__ import annotations

import logging
from pathlib import Path

import numpy as np

from . import asymptotics as asy
from .config import ExperimentConfig
from .errors import NotAFejerPoint, NotARay, UnsupportedVariant, ZbarNotInSet
from .exact import rational_rotation_cluster_count
from .fejer import audit_trace, fejer_violation, iterate
from .io import write_directions_csv, write_json, write_trace_csv
from .operators import PlanarRotationAveraged, RightShiftAveraged, SkewResolvent, orthogonality_defect
from .vectorspace import row_norms
from .oracle import check_float_consistency, check_shift_identities, oracle_report

log = logging.getLogger(__name__)

POLAR_LIMSUP_MAX = 1e-6
NCONE_TAIL_MEAN_MAX = 1e-4
ZIGZAG_FINAL_MAX = 1e-6
AUDIT_TOL = 1e-10
ORTHOGONALITY_MAX = 1e-12


def contract(value, op: str, threshold) -> dict:
    checks = {
        "<=": lambda a, b: a <= b,
        "<": lambda a, b: a < b,
        ">=": lambda a, b: a >= b,
        "==": lambda a, b: a == b,
    }
    return {"value": value, "op": op, "threshold": threshold, "pass": bool(checks[op](value, threshold))}


def normalized_orthogonality(points: np.ndarray) -> float:
    """``max_n |<x_{n+1}/||x_{n+1}||, (x_n - x_{n+1})/||x_n - x_{n+1}||>|`` over nondegenerate steps."""
    nxt = points[1:]
    step = points[:-1] - points[1:]
    a = row_norms(nxt)
    b = row_norms(step)
    ok = (a > 1e-300) & (b > 1e-300)
    if not np.any(ok):
        return 0.0
    vals = np.einsum("ij,ij->i", nxt[ok] / a[ok, None], step[ok] / b[ok, None])
    return float(np.max(np.abs(vals)))


def _clusters_json(est: asy.ClusterEstimate) -> list:
    return [{"rep": rep, "count": c} for rep, c in zip(est.representatives, est.counts)]


def run_trace_experiment(cfg: ExperimentConfig, out_dir: Path) -> dict:
    an = cfg.analysis
    rng = np.random.default_rng(cfg.seed)
    trace = iterate(cfg.operator, cfg.x0, cfg.max_steps, cfg.stop_tol)
    zbar = trace.points[-1] if isinstance(cfg.zbar, str) else cfg.zbar
    Z = cfg.Z
    dirs = asy.direction_sequences(trace, zbar, Z, an.active_tol)
    write_trace_csv(trace, out_dir / "trace.csv")
    write_directions_csv(dirs, out_dir / "directions.csv")

    contracts = {}
    summary = {
        "name": cfg.name,
        "experiment": cfg.experiment,
        "seed": cfg.seed,
        "trace_length": len(trace),
        "stop_reason": trace.stop_reason.value,
        "zbar": zbar,
        "skipped_step_directions": dirs.skipped_step,
        "skipped_limit_directions": dirs.skipped_limit,
    }

    # Fejer monotonicity with respect to sampled points of Z
    fejer_tol = trace.fejer_tol()
    candidates = list(Z.sample(rng, an.fejer_samples))
    if Z.contains(zbar, an.active_tol):
        candidates.append(np.asarray(zbar))
    violation = max(fejer_violation(trace, z) for z in candidates)
    summary["fejer_violation_max"] = violation
    summary["fejer_tol"] = fejer_tol
    contracts["fejer_violation_max"] = contract(violation, "<=", fejer_tol)

    # Consecutive and telescoped Fejer inequalities, about zbar and a random center
    centers = [np.asarray(zbar), np.asarray(zbar) + rng.standard_normal(trace.dim)]
    worst = {"consecutive": np.inf, "identity": 0.0, "cauchy_schwarz": np.inf, "telescoped": np.inf}
    for z in candidates:
        for center in centers:
            try:
                s = audit_trace(trace, z, center, an.audit_window, fejer_tol)
            except NotAFejerPoint:
                continue
            worst["consecutive"] = min(worst["consecutive"], s.consecutive)
            worst["cauchy_schwarz"] = min(worst["cauchy_schwarz"], s.cauchy_schwarz)
            worst["telescoped"] = min(worst["telescoped"], s.telescoped)
            worst["identity"] = max(worst["identity"], abs(s.identity))
    summary["audit"] = worst
    min_slack = min(worst["consecutive"], worst["cauchy_schwarz"], worst["telescoped"])
    contracts["audit_min_slack"] = contract(min_slack, ">=", -AUDIT_TOL)
    contracts["audit_identity_residual"] = contract(worst["identity"], "<=", AUDIT_TOL)

    # Directional asymptotics
    limsup = asy.limsup_polar_residual(dirs.records, an.tail_fraction)
    summary["limsup_polar_residual"] = limsup
    contracts["limsup_polar_residual"] = contract(
        limsup, "<=", cfg.expect.get("limsup_polar_residual_max", POLAR_LIMSUP_MAX))

    to_limit = dirs.of_kind(asy.Kind.TO_LIMIT)
    steps = dirs.of_kind(asy.Kind.STEP_DIFF)
    clusters = asy.cluster_directions(to_limit, an.tail_fraction, an.epsilon) if to_limit else None
    summary["clusters"] = _clusters_json(clusters) if clusters else []
    summary["clusters_step_diff"] = (
        _clusters_json(asy.cluster_directions(steps, an.tail_fraction, an.epsilon)) if steps else []
    )
    summary["max_angular_gap"] = (
        asy.max_angular_gap(to_limit, an.tail_fraction) if trace.dim == 2 and to_limit else None
    )
    if "max_angular_gap_deg" in cfg.expect:
        contracts["max_angular_gap"] = contract(summary["max_angular_gap"], "<", cfg.expect["max_angular_gap_deg"])
    if "clusters" in cfg.expect:
        contracts["cluster_count"] = contract(len(summary["clusters"]), "==", cfg.expect["clusters"])

    ncone = [r.ncone_dist for r in asy.tail(dirs.records, an.tail_fraction)]
    if ncone and all(v is not None for v in ncone):
        trivial = any(np.isinf(v) for v in ncone)
        summary["normal_cone_trivial"] = trivial
        mean = float(np.mean(ncone))
        summary["tail_mean_ncone_dist"] = mean
        if not trivial:
            contracts["tail_mean_ncone_dist"] = contract(mean, "<=", NCONE_TAIL_MEAN_MAX)
    else:
        summary["tail_mean_ncone_dist"] = None

    try:
        nz = asy.no_zigzag_check(trace, zbar, Z, an.tail_fraction, an.active_tol)
    except (NotARay, UnsupportedVariant, ZbarNotInSet) as exc:
        summary["no_zigzag"] = {"applicable": False, "reason": str(exc)}
    else:
        summary["no_zigzag"] = {
            "applicable": True,
            "limit_dir": nz.limit_dir,
            "max_dev_stepdiff": nz.max_dev_stepdiff,
            "max_dev_tolimit": nz.max_dev_tolimit,
            "final_dev_stepdiff": nz.final_dev_stepdiff,
            "final_dev_tolimit": nz.final_dev_tolimit,
        }
        contracts["no_zigzag_final_dev"] = contract(
            max(nz.final_dev_stepdiff, nz.final_dev_tolimit), "<=", ZIGZAG_FINAL_MAX)

    op = cfg.operator
    if isinstance(op, (PlanarRotationAveraged, SkewResolvent, RightShiftAveraged)):
        pts = trace.points
        absolute = max(
            orthogonality_defect(op, x) / (1.0 + float(np.dot(x, x))) for x in pts[:-1]
        )
        normalized = normalized_orthogonality(pts)
        summary["orthogonality_defect"] = {"absolute_scaled": absolute, "normalized": normalized}
        contracts["orthogonality_defect"] = contract(max(absolute, normalized), "<=", ORTHOGONALITY_MAX)

    if isinstance(op, PlanarRotationAveraged) and op.turns is not None:
        exact = rational_rotation_cluster_count(op.turns.numerator, op.turns.denominator)
        summary["exact_cluster_count"] = exact.count
        contracts["cluster_count_matches_exact"] = contract(len(summary["clusters"]), "==", exact.count)

    if cfg.experiment == "shift" and cfg.mode == "exact":
        results = check_shift_identities(cfg.max_steps)
        results.append(check_float_consistency(min(cfg.max_steps, 60)))
        summary["oracle"] = {"identities": [r.to_json() for r in results]}
        for r in results:
            contracts[f"oracle_{r.name}"] = contract(r.passed, "==", True)

    summary["contracts"] = contracts
    summary["pass"] = all(c["pass"] for c in contracts.values())
    return summary


def run_oracle_experiment(cfg: ExperimentConfig, out_dir: Path) -> dict:
    report = oracle_report(cfg.oracle_max_n)
    write_json(report, out_dir / "oracle.json")
    contracts = {f"oracle_{r['name']}": contract(r["pass"], "==", True) for r in report["identities"]}
    return {
        "name": cfg.name,
        "experiment": "oracle",
        "seed": cfg.seed,
        "oracle": report,
        "contracts": contracts,
        "pass": all(c["pass"] for c in contracts.values()),
    }


def run(cfg: ExperimentConfig, out_dir) -> dict:
    """Run one experiment, write ``summary.json`` (plus CSVs) into ``out_dir``."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    log.info("running %s (%s) -> %s", cfg.name, cfg.experiment, out_dir)
    if cfg.experiment == "oracle":
        summary = run_oracle_experiment(cfg, out_dir)
    else:
        summary = run_trace_experiment(cfg, out_dir)
    write_json(summary, out_dir / "summary.json")
    return summary
