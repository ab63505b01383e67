"""Report payloads, canonical serialization, and round-trip audits.

Canonical JSON is sorted, two-space indented, UTF-8, and ends with a single
newline; floats use repr (shortest round-trip) and infinities appear as the
JSON-extension literals Infinity / -Infinity that ``json.loads`` accepts
back.  Nothing in a payload depends on wall-clock time, so rerunning a
command with the same config and seed rewrites byte-identical files.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
from typing import Optional

from .criteria import (
    CriterionReport,
    VERDICT_SATISFIED,
    VERDICT_VIOLATED,
    decide_verdict,
)
from .experiments import ExperimentReport, recompute_verdicts
from .orbits import (
    DensityReport,
    OrbitTrace,
    ReturnSetReport,
    TransitivityWitness,
    classify_return_steps,
)

REPORT_SCHEMA = "shiftdyn-report-v1"


def _jsonable(value):
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, (str, int, bool)) or value is None:
        return value
    if isinstance(value, float):
        return value
    if hasattr(value, "item"):  # numpy scalars
        return _jsonable(value.item())
    raise TypeError(f"cannot serialize {type(value).__name__} into a report")


def canonical_json(payload: dict) -> str:
    return json.dumps(_jsonable(payload), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _fmt_cell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    if value is None:
        return ""
    return str(value)


def rows_to_csv(header: list, rows: list) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt_cell(cell) for cell in row])
    return buf.getvalue()


def write_report(text: str, out_dir, stem: str, extension: str) -> str:
    os.makedirs(out_dir, exist_ok=True)
    path = os.path.join(out_dir, f"{stem}.{extension}")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    return path


# ---------------------------------------------------------------------------
# Payload builders
# ---------------------------------------------------------------------------

def criterion_payload(report: CriterionReport) -> dict:
    return {
        "schema": REPORT_SCHEMA,
        "kind": "criterion",
        "criterion_kind": report.kind,
        "verdict": report.verdict,
        "tol": report.tol,
        "count": report.count,
        "iterates": list(report.iterates),
        "forward_log_trace": list(report.forward_log_trace),
        "backward_log_trace": list(report.backward_log_trace),
        "invariance_trace": [bool(b) for b in report.invariance_trace],
        "convention": report.convention,
        "witness": report.witness,
        "notes": list(report.notes),
        "details": {k: _jsonable(v) for k, v in report.details.items()},
    }


def criterion_csv(report: CriterionReport) -> str:
    rows = [
        [k, n, fwd, back, inv]
        for k, (n, fwd, back, inv) in enumerate(
            zip(
                report.iterates,
                report.forward_log_trace,
                report.backward_log_trace,
                report.invariance_trace,
            ),
            start=1,
        )
    ]
    return rows_to_csv(["k", "n_k", "forward_log", "backward_log", "invariant"], rows)


def orbit_payload(trace: OrbitTrace) -> dict:
    return {
        "schema": REPORT_SCHEMA,
        "kind": "orbit",
        "length": trace.length,
        "log_norms": [float(x) for x in trace.log_norms],
        "log_dists": None if trace.log_dists is None else [float(x) for x in trace.log_dists],
        "death_step": trace.death_step,
    }


def orbit_csv(trace: OrbitTrace) -> str:
    rows = []
    for step in range(trace.length + 1):
        dist = None if trace.log_dists is None else float(trace.log_dists[step])
        rows.append([step, float(trace.log_norms[step]), dist])
    return rows_to_csv(["step", "log_norm", "log_dist"], rows)


def density_payload(report: DensityReport) -> dict:
    return {
        "schema": REPORT_SCHEMA,
        "kind": "density",
        "length": report.length,
        "tolerance": report.tolerance,
        "coverage": report.coverage,
        "rows": [
            {
                "target_index": r.target_index,
                "target_norm": r.target_norm,
                "best_step": r.best_step,
                "best_distance": r.best_distance,
                "hit": bool(r.hit),
            }
            for r in report.rows
        ],
    }


def density_csv(report: DensityReport) -> str:
    rows = [
        [r.target_index, r.target_norm, r.best_step, r.best_distance, bool(r.hit)]
        for r in report.rows
    ]
    return rows_to_csv(
        ["target_index", "target_norm", "best_step", "best_distance", "hit"], rows
    )


def witness_payload(witness: TransitivityWitness, tol: float) -> dict:
    ok = (
        witness.err_near <= tol
        and witness.err_far <= tol
        and witness.invariant_ok
        and witness.z_in_subspace
    )
    return {
        "schema": REPORT_SCHEMA,
        "kind": "witness",
        "step": witness.step,
        "tol": tol,
        "err_near": witness.err_near,
        "err_far": witness.err_far,
        "invariant_ok": bool(witness.invariant_ok),
        "z_in_subspace": bool(witness.z_in_subspace),
        "ok": bool(ok),
    }


def witness_csv(payload: dict) -> str:
    row = [
        payload["step"],
        payload["err_near"],
        payload["err_far"],
        payload["invariant_ok"],
        payload["z_in_subspace"],
        payload["ok"],
    ]
    return rows_to_csv(
        ["step", "err_near", "err_far", "invariant_ok", "z_in_subspace", "ok"], [row]
    )


def returnset_payload(
    report: ReturnSetReport, min_tail: int = 10, infinite_fraction: float = 0.1
) -> dict:
    return {
        "schema": REPORT_SCHEMA,
        "kind": "returnset",
        "horizon": report.horizon,
        "near_radius": report.near_radius,
        "far_radius": report.far_radius,
        "members": list(report.members),
        "classification": report.classification,
        "cofinite_from": report.cofinite_from,
        "min_tail": min_tail,
        "infinite_fraction": infinite_fraction,
    }


def returnset_csv(report: ReturnSetReport) -> str:
    return rows_to_csv(["n"], [[n] for n in report.members])


def example32_payload(result) -> dict:
    return {
        "schema": REPORT_SCHEMA,
        "kind": "example32",
        "certificate": result.certificate.describe(),
        "left_weights": result.left_weights.describe(),
        "right_weights": result.right_weights.describe(),
        "left_iterates": list(result.left_iterates),
        "right_iterates": list(result.right_iterates),
    }


def experiment_payload(report: ExperimentReport) -> dict:
    return {
        "schema": REPORT_SCHEMA,
        "kind": "experiment",
        "name": report.name,
        "seed": report.seed,
        "config": _jsonable(report.config),
        "status": report.status,
        "verdicts": dict(report.verdicts),
        "traces": _jsonable(report.traces),
        "notes": list(report.notes),
    }


def experiment_csv(report: ExperimentReport) -> str:
    rows = [[check, verdict] for check, verdict in report.verdicts.items()]
    return rows_to_csv(["check", "verdict"], rows)


# ---------------------------------------------------------------------------
# Round-trip audit: verdicts must be recomputable from the payload alone
# ---------------------------------------------------------------------------

def recheck_payload(payload: dict) -> Optional[dict]:
    """Re-derive the verdict-bearing fields of a serialized report.

    Returns {"matches": bool, "recomputed": ...} for report kinds that carry
    a verdict, None for purely descriptive kinds (orbit).
    """
    kind = payload.get("kind")
    if kind == "criterion":
        return _recheck_criterion(payload)
    if kind == "experiment":
        recomputed = recompute_verdicts(payload["name"], payload["traces"])
        return {"matches": recomputed == payload["verdicts"], "recomputed": recomputed}
    if kind == "returnset":
        classification, cofinite_from = classify_return_steps(
            payload["members"],
            payload["horizon"],
            payload["min_tail"],
            payload["infinite_fraction"],
        )
        matches = (
            classification == payload["classification"]
            and cofinite_from == payload["cofinite_from"]
        )
        return {
            "matches": matches,
            "recomputed": {"classification": classification, "cofinite_from": cofinite_from},
        }
    if kind == "witness":
        ok = (
            payload["err_near"] <= payload["tol"]
            and payload["err_far"] <= payload["tol"]
            and payload["invariant_ok"]
            and payload["z_in_subspace"]
        )
        return {"matches": ok == payload["ok"], "recomputed": {"ok": ok}}
    if kind == "density":
        rows = payload["rows"]
        coverage = (
            sum(1 for r in rows if r["hit"]) / len(rows) if rows else 0.0
        )
        return {"matches": coverage == payload["coverage"], "recomputed": {"coverage": coverage}}
    if kind == "example32":
        cert = payload["certificate"]
        ok = (
            cert["left_verdict"] == VERDICT_SATISFIED
            and cert["right_verdict"] == VERDICT_SATISFIED
            and cert["min_max_forward_log2"] >= math.log2(cert["floor"]) - 1e-12
            and cert["min_max_backward_log2"] >= math.log2(cert["floor"]) - 1e-12
        )
        return {"matches": ok == cert["ok"], "recomputed": {"ok": ok}}
    return None


def _recheck_criterion(payload: dict) -> dict:
    witness = payload.get("witness")
    if witness is not None and witness.get("reason") == "approximant-outside-subspace":
        verdict = VERDICT_VIOLATED
    elif not payload["forward_log_trace"]:
        # nothing was evaluated (empty dense-set sample); stays undecided
        verdict = "undecided"
    else:
        details = payload.get("details") or {}
        if "approximant_norm_log_trace" in details:
            traces = [
                payload["forward_log_trace"],
                details["approximant_norm_log_trace"],
                details["approximant_residual_log_trace"],
            ]
        else:
            traces = [payload["forward_log_trace"], payload["backward_log_trace"]]
        verdict, _ = decide_verdict(
            traces,
            payload["invariance_trace"],
            payload["iterates"],
            payload["tol"],
        )
    return {"matches": verdict == payload["verdict"], "recomputed": {"verdict": verdict}}
