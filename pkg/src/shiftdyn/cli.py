"""Command-line interface.

Exit codes: 0 pass/satisfied, 1 violation/fail, 2 undecided or incomplete,
64 config or usage error (with a line-anchored diagnostic when the offending
node can be located in the config file).  Reports go to --out (default
./reports) under deterministic names with no timestamps, so identical
invocations rewrite identical bytes.
"""

from __future__ import annotations

import argparse
import inspect
import json
import sys

from .config import (
    ConfigError,
    load_config,
    locate_path_line,
    parse_iterates,
    parse_operator,
    parse_subspace,
    parse_vector,
    parse_vector_list,
)
from .criteria import (
    ConstructionError,
    CriterionDataError,
    VERDICT_SATISFIED,
    VERDICT_UNDECIDED,
    build_example32_weights,
    eval_direct_sum_criterion,
    eval_forward_criterion,
)
from .experiments import EXPERIMENT_RUNNERS, run_experiment
from .operators import (
    DirectSumOp,
    NotInvertibleError,
    UnsupportedOperatorError,
)
from .orbits import compute_orbit, density_report, return_set, transitivity_witness
from .spaces import BILATERAL, CoordinateSubspace, DirectSumSubspace, SpaceMismatchError
from . import reports as rpt

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_UNDECIDED = 2
EXIT_CONFIG = 64

_VERDICT_EXIT = {
    VERDICT_SATISFIED: EXIT_PASS,
    "violated": EXIT_FAIL,
    VERDICT_UNDECIDED: EXIT_UNDECIDED,
}

_STATUS_EXIT = {"pass": EXIT_PASS, "fail": EXIT_FAIL, "undecided": EXIT_UNDECIDED}


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on usage errors; the report contract reserves 2."""

    def error(self, message):
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def build_parser() -> _Parser:
    parser = _Parser(prog="shiftdyn", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="JSON config file")
        p.add_argument("--horizon", type=int, help="steps / horizon override")
        p.add_argument("--tol", type=float, help="tolerance override")
        p.add_argument("--seed", type=int, help="seed override (experiments)")
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--out", default="./reports", help="report directory")
        p.add_argument(
            "--backward-index-convention",
            choices=("thm12", "thm13"),
            default="thm12",
            help="index convention for backward weight products",
        )
        return p

    common(sub.add_parser("criterion", help="weight-product transitivity test"))
    common(sub.add_parser("orbit", help="orbit log norms (and subspace distances)"))
    common(sub.add_parser("density", help="orbit coverage of a target list"))
    common(sub.add_parser("witness", help="two-point transitivity witness"))
    common(sub.add_parser("returnset", help="near-u/far-v return steps"))
    exp = common(sub.add_parser("experiment", help="named experiment suite"))
    exp.add_argument("name", choices=sorted(EXPERIMENT_RUNNERS))
    common(sub.add_parser("example32", help="opposed block-shift construction"))
    return parser


def _need_config(args) -> tuple[dict, str]:
    if not args.config:
        raise ConfigError("this command requires --config")
    return load_config(args.config)


def _emit(args, stem: str, payload: dict, csv_text: str) -> str:
    if args.format == "csv":
        return rpt.write_report(csv_text, args.out, stem, "csv")
    return rpt.write_report(rpt.canonical_json(payload), args.out, stem, "json")


def _cmd_criterion(args) -> int:
    cfg, _ = _need_config(args)
    op = parse_operator(cfg.get("operator"), "operator")
    subspace = parse_subspace(cfg.get("subspace"), "subspace")
    iterates = parse_iterates(cfg.get("iterates"), "iterates")
    tol = args.tol if args.tol is not None else float(cfg.get("tol", 1e-6))
    convention = args.backward_index_convention
    if isinstance(op, DirectSumOp):
        if not isinstance(subspace, DirectSumSubspace):
            raise ConfigError("direct-sum operator needs a direct-sum subspace", "subspace")
        pair = cfg.get("basis_index")
        if not (isinstance(pair, list) and len(pair) == 2):
            raise ConfigError("direct-sum criterion needs basis_index [left, right]", "basis_index")
        report = eval_direct_sum_criterion(
            op.left, op.right, subspace.left, subspace.right,
            int(pair[0]), int(pair[1]), iterates,
            count=len(iterates), tol=tol, convention=convention,
        )
    else:
        basis_index = cfg.get("basis_index", 0)
        if not isinstance(basis_index, int) or isinstance(basis_index, bool):
            raise ConfigError("basis_index must be an integer", "basis_index")
        report = eval_forward_criterion(
            op, subspace, basis_index, iterates,
            count=len(iterates), tol=tol, convention=convention,
        )
    path = _emit(args, "criterion", rpt.criterion_payload(report), rpt.criterion_csv(report))
    print(f"criterion: {report.verdict} ({len(report.iterates)} iterates) -> {path}")
    return _VERDICT_EXIT[report.verdict]


def _cmd_orbit(args) -> int:
    cfg, _ = _need_config(args)
    op = parse_operator(cfg.get("operator"), "operator")
    start = parse_vector(cfg.get("vector"), "vector")
    horizon = args.horizon if args.horizon is not None else int(cfg.get("horizon", 1000))
    subspace = None
    if "subspace" in cfg:
        subspace = parse_subspace(cfg["subspace"], "subspace")
    trace = compute_orbit(op, start, horizon, subspace, retain=False)
    path = _emit(args, "orbit", rpt.orbit_payload(trace), rpt.orbit_csv(trace))
    print(f"orbit: {horizon} steps -> {path}")
    return EXIT_PASS


def _cmd_density(args) -> int:
    cfg, _ = _need_config(args)
    op = parse_operator(cfg.get("operator"), "operator")
    start = parse_vector(cfg.get("vector"), "vector")
    targets = parse_vector_list(cfg.get("targets"), "targets")
    horizon = args.horizon if args.horizon is not None else int(cfg.get("horizon", 1000))
    tol = args.tol if args.tol is not None else float(cfg.get("tolerance", 1e-6))
    report = density_report(op, start, horizon, targets, tol)
    path = _emit(args, "density", rpt.density_payload(report), rpt.density_csv(report))
    print(f"density: coverage {report.coverage:.4f} of {len(targets)} targets -> {path}")
    floor = cfg.get("min_coverage")
    if floor is not None and report.coverage < float(floor):
        return EXIT_FAIL
    return EXIT_PASS


def _cmd_witness(args) -> int:
    cfg, _ = _need_config(args)
    op = parse_operator(cfg.get("operator"), "operator")
    subspace = parse_subspace(cfg.get("subspace"), "subspace")
    u = parse_vector(cfg.get("u"), "u")
    v = parse_vector(cfg.get("v"), "v")
    step = args.horizon if args.horizon is not None else cfg.get("step")
    if not isinstance(step, int) or isinstance(step, bool) or step < 1:
        raise ConfigError("step must be a positive integer (or pass --horizon)", "step")
    tol = args.tol if args.tol is not None else float(cfg.get("tol", 1e-6))
    witness = transitivity_witness(op, subspace, u, v, step)
    payload = rpt.witness_payload(witness, tol)
    path = _emit(args, "witness", payload, rpt.witness_csv(payload))
    print(
        f"witness: step {step} err_near {witness.err_near:.3e} "
        f"err_far {witness.err_far:.3e} -> {path}"
    )
    return EXIT_PASS if payload["ok"] else EXIT_FAIL


def _cmd_returnset(args) -> int:
    cfg, _ = _need_config(args)
    op = parse_operator(cfg.get("operator"), "operator")
    subspace = parse_subspace(cfg.get("subspace"), "subspace")
    u = parse_vector(cfg.get("u"), "u")
    v = parse_vector(cfg.get("v"), "v")
    horizon = args.horizon if args.horizon is not None else int(cfg.get("horizon", 1000))
    near = float(cfg.get("near_radius", 0.5))
    far = float(cfg.get("far_radius", 0.5))
    report = return_set(op, subspace, u, v, near, far, horizon)
    path = _emit(args, "returnset", rpt.returnset_payload(report), rpt.returnset_csv(report))
    print(
        f"returnset: {len(report.members)} members, {report.classification} -> {path}"
    )
    if report.classification in ("cofinite-beyond", "infinite-to-horizon"):
        return EXIT_PASS
    if report.classification == "finite":
        return EXIT_UNDECIDED
    return EXIT_FAIL


def _cmd_experiment(args) -> int:
    overrides = {}
    if args.config:
        cfg, _ = load_config(args.config)
        raw = cfg.get("overrides", {})
        if not isinstance(raw, dict):
            raise ConfigError("overrides must be an object", "overrides")
        overrides.update(raw)
    runner = EXPERIMENT_RUNNERS[args.name]
    params = inspect.signature(runner).parameters
    for flag in ("seed", "horizon", "tol"):
        value = getattr(args, flag)
        if value is not None and flag in params:
            overrides[flag] = value
    unknown = set(overrides) - set(params)
    if unknown:
        raise ConfigError(
            f"unknown override(s) for {args.name}: {', '.join(sorted(unknown))}",
            "overrides",
        )
    report = run_experiment(args.name, **overrides)
    path = _emit(
        args, f"experiment-{args.name}", rpt.experiment_payload(report),
        rpt.experiment_csv(report),
    )
    summary = ", ".join(f"{k}={v}" for k, v in report.verdicts.items())
    print(f"experiment {args.name}: {report.status} ({summary}) -> {path}")
    return _STATUS_EXIT[report.status]


def _cmd_example32(args) -> int:
    horizon = args.horizon if args.horizon is not None else 10_000
    tol = args.tol if args.tol is not None else 1e-6
    try:
        result = build_example32_weights(horizon, tol=tol)
    except ConstructionError as exc:
        print(f"example32: construction failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    whole = CoordinateSubspace.full(BILATERAL)
    from .operators import WeightedShift

    rows = []
    for side, weights, iterates in (
        ("left", result.left_weights, result.left_iterates),
        ("right", result.right_weights, result.right_iterates),
    ):
        rep = eval_forward_criterion(
            WeightedShift(weights, BILATERAL), whole, 0, iterates,
            count=len(iterates), tol=tol, convention=args.backward_index_convention,
        )
        for k, (n, fwd, back, inv) in enumerate(
            zip(rep.iterates, rep.forward_log_trace, rep.backward_log_trace,
                rep.invariance_trace),
            start=1,
        ):
            rows.append([side, k, n, fwd, back, inv])
    csv_text = rpt.rows_to_csv(
        ["component", "k", "n_k", "forward_log", "backward_log", "invariant"], rows
    )
    path = _emit(args, "example32", rpt.example32_payload(result), csv_text)
    cert = result.certificate
    print(
        f"example32: ok={cert.ok} min_max_forward_log2={cert.min_max_forward_log2} "
        f"-> {path}"
    )
    return EXIT_PASS if cert.ok else EXIT_FAIL


_COMMANDS = {
    "criterion": _cmd_criterion,
    "orbit": _cmd_orbit,
    "density": _cmd_density,
    "witness": _cmd_witness,
    "returnset": _cmd_returnset,
    "experiment": _cmd_experiment,
    "example32": _cmd_example32,
}


def _config_diagnostic(args, exc) -> str:
    name = args.config or "<config>"
    path = getattr(exc, "path", "")
    line = None
    if args.config and path:
        try:
            with open(args.config, "r", encoding="utf-8") as fh:
                line = locate_path_line(fh.read(), path)
        except OSError:
            line = None
    anchor = f"{name}:{line}" if line else name
    return f"{anchor}: {exc}"


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except json.JSONDecodeError as exc:
        name = args.config or "<config>"
        print(f"{name}:{exc.lineno}:{exc.colno}: invalid JSON: {exc.msg}", file=sys.stderr)
        return EXIT_CONFIG
    except ConfigError as exc:
        print(_config_diagnostic(args, exc), file=sys.stderr)
        return EXIT_CONFIG
    except FileNotFoundError as exc:
        print(f"{exc.filename}: cannot read config file", file=sys.stderr)
        return EXIT_CONFIG
    except (
        UnsupportedOperatorError,
        NotInvertibleError,
        SpaceMismatchError,
        CriterionDataError,
        ValueError,
    ) as exc:
        name = args.config or "<config>"
        print(f"{name}: {exc}", file=sys.stderr)
        return EXIT_CONFIG
