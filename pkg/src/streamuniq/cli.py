"""Command-line interface.

Subcommands: integrate, verify, sweep, validate-model.  Exit status contract:
0 success, 1 a verification or validation check failed, 2 configuration or
usage errors, 3 solver failures (non-convergence, window collapse, step
underflow).  All files are written atomically (temp file + rename) so a
crashed run never leaves a partial artifact behind.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import config as cfgmod
from .errors import (ConfigError, ContractionViolationError, DomainError,
                     ModelValidationError, NonConvergenceError, StepSizeUnderflowError,
                     StreamuniqError, WindowCollapseError)
from .picard import picard_solve
from .rk import rk_solve
from .svgplot import line_plot
from .verify import continuity_sweep, run_uniqueness_analysis
from .vorticity import validate_hypotheses

_CONFIG_ERRORS = (ConfigError, DomainError, ModelValidationError)
_SOLVER_ERRORS = (NonConvergenceError, WindowCollapseError, StepSizeUnderflowError)


def _fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (float, np.floating)):
        return f"{float(x):.17g}"
    return str(x)


def write_atomic(path: str, text: str) -> None:
    tmp = path + ".tmp"
    with open(tmp, "w", encoding="utf-8") as fh:
        fh.write(text)
    os.replace(tmp, path)


def write_csv(path: str, header: str, rows) -> None:
    lines = [header]
    lines.extend(",".join(_fmt(v) for v in row) for row in rows)
    write_atomic(path, "\n".join(lines) + "\n")


def write_trajectory_csv(path: str, traj) -> None:
    write_csv(path, "r,psi,u", zip(traj.nodes, traj.psi, traj.u))


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="INI run configuration")
    common.add_argument("--out", help="output directory (default: out)")
    common.add_argument("--r0", type=float, help="left endpoint, >= 1")
    common.add_argument("--psi1", type=float, help="initial slope, nonzero")
    common.add_argument("--model", choices=["classical", "oscillatory", "custom"],
                        help="vorticity model kind")
    common.add_argument("--tol", type=float,
                        help="solver tolerance (fixed-point tol and RK rel_tol)")

    parser = argparse.ArgumentParser(
        prog="streamuniq",
        description="Solve the radial stream-function problem two ways and "
                    "certify local uniqueness numerically.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_int = sub.add_parser("integrate", parents=[common],
                           help="run one solver and write the trajectory")
    p_int.add_argument("--method", choices=["picard", "rk"], help="solver to use")
    p_int.add_argument("--r-max", type=float, dest="r_max", help="right endpoint")
    p_int.add_argument("--nodes", type=int, help="grid node count")

    p_ver = sub.add_parser("verify", parents=[common],
                           help="run both solvers and the uniqueness checks")
    p_ver.add_argument("--r-max", type=float, dest="r_max", help="right endpoint")
    p_ver.add_argument("--nodes", type=int, help="grid node count")

    p_sw = sub.add_parser("sweep", parents=[common],
                          help="continuity sweep over initial slopes")
    p_sw.add_argument("--psi1-values", dest="psi1_values",
                      help="comma list, first value is the baseline")
    p_sw.add_argument("--r-max", type=float, dest="r_max", help="right endpoint")
    p_sw.add_argument("--nodes", type=int, help="grid node count")

    sub.add_parser("validate-model", parents=[common],
                   help="sample the model hypotheses and report")
    return parser


def _load(args) -> cfgmod.RunConfig:
    cfg = cfgmod.load_config(args.config) if args.config else cfgmod.RunConfig()
    if args.out is not None:
        cfg.out_dir = args.out
    if args.r0 is not None:
        cfg.r0 = args.r0
    if args.psi1 is not None:
        cfg.psi1 = args.psi1
    if args.model is not None:
        cfg.model_kind = args.model
    if args.tol is not None:
        cfg.tol = args.tol
        cfg.rel_tol = args.tol
    if getattr(args, "r_max", None) is not None:
        cfg.r_max = args.r_max
    if getattr(args, "nodes", None) is not None:
        cfg.grid_n = args.nodes
    if getattr(args, "psi1_values", None) is not None:
        cfg.sweep_psi1 = cfgmod.parse_float_list(args.psi1_values)
    if getattr(args, "method", None) is not None:
        cfg.method = args.method
    return cfg


def _outdir(cfg: cfgmod.RunConfig) -> str:
    os.makedirs(cfg.out_dir, exist_ok=True)
    return cfg.out_dir


def cmd_integrate(cfg: cfgmod.RunConfig) -> int:
    model = cfgmod.build_model(cfg)
    r_max = cfg.r_max if cfg.r_max is not None else 2.0 * cfg.r0
    grid = cfgmod.build_grid(cfg, cfg.r0, r_max)
    if cfg.method == "picard":
        traj, diag = picard_solve(model, cfg.r0, cfg.psi1, grid,
                                  tol=cfg.tol, max_iter=cfg.max_iter)
        log_lines = ["method = picard",
                     f"iterations = {diag.iterations}",
                     f"converged = {_fmt(diag.converged)}",
                     "weighted_deltas = " + ",".join(_fmt(d) for d in diag.weighted_deltas)]
    elif cfg.method == "rk":
        traj, diag = rk_solve(model, cfg.r0, cfg.psi1, r_max,
                              control=cfgmod.build_control(cfg), output_grid=grid)
        log_lines = ["method = rk",
                     f"accepted_steps = {diag.n_accepted}",
                     f"rejected_steps = {diag.n_rejected}",
                     f"h_final = {_fmt(diag.h_final)}",
                     f"rel_tol = {_fmt(diag.rel_tol)}",
                     f"abs_tol = {_fmt(diag.abs_tol)}"]
    else:
        raise ConfigError(f"unknown method {cfg.method!r}")
    out = _outdir(cfg)
    write_trajectory_csv(os.path.join(out, "trajectory.csv"), traj)
    write_atomic(os.path.join(out, "run_log.txt"), "\n".join(log_lines) + "\n")
    print(f"window_end = {_fmt(traj.window_end)}")
    print(f"psi_at_r_max = {_fmt(traj.psi[-1])}")
    return 0


def cmd_verify(cfg: cfgmod.RunConfig) -> int:
    model = cfgmod.build_model(cfg)
    out = _outdir(cfg)
    hypothesis = validate_hypotheses(model)
    checks: list[tuple[str, bool]] = [
        ("sign_condition", hypothesis.sign_margin > 0.0),
        ("holder_bound", hypothesis.holder_sup <= model.holder_C),
    ]
    if not hypothesis.verdict:
        for name, ok in checks:
            print(f"{name}: {'PASS' if ok else 'FAIL'}")
        print("verdict = false")
        return 1

    grid = None
    if cfg.r_max is not None:
        grid = cfgmod.build_grid(cfg, cfg.r0, cfg.r_max)
    try:
        result = run_uniqueness_analysis(
            model, r0=cfg.r0, psi1=cfg.psi1, r_max=cfg.r_max, grid=grid,
            picard_tol=cfg.tol, picard_max_iter=cfg.max_iter,
            control=cfgmod.build_control(cfg))
        report = result.report
        checks.append(("lower_bound", report.lower_bound_margin >= -1.0e-8))
        checks.append(("contraction", report.contraction_ratio <= 0.55))
        checks.append(("cross_method", report.cross_method_weighted_sup <= 1.0e-6))
    except ContractionViolationError as exc:
        checks.append(("contraction", False))
        for name, ok in checks:
            print(f"{name}: {'PASS' if ok else 'FAIL'}")
        print(f"contraction violated at r = {_fmt(exc.r_at)} (excess {_fmt(exc.excess)})")
        print("verdict = false")
        return 1

    lines = [f"{key} = {_fmt(value)}" for key, value in report.as_dict().items()]
    lines.append(f"sign_margin = {_fmt(hypothesis.sign_margin)}")
    lines.append(f"holder_sup = {_fmt(hypothesis.holder_sup)}")
    lines.append(f"holder_C = {_fmt(model.holder_C)}")
    write_atomic(os.path.join(out, "report.txt"), "\n".join(lines) + "\n")
    write_csv(os.path.join(out, "trace.csv"), "r,y", report.deviation_limit_trace)
    write_trajectory_csv(os.path.join(out, "trajectory_picard.csv"), result.traj_picard)
    write_trajectory_csv(os.path.join(out, "trajectory_rk.csv"), result.traj_rk)
    trace_r = [r for r, _ in report.deviation_limit_trace]
    trace_y = [y for _, y in report.deviation_limit_trace]
    svg = line_plot([("weighted deviation", trace_r, trace_y)],
                    "Cross-method weighted deviation toward r0", "r", "y(r)")
    write_atomic(os.path.join(out, "trace.svg"), svg)

    for name, ok in checks:
        print(f"{name}: {'PASS' if ok else 'FAIL'}")
    print(f"verdict = {_fmt(report.verdict)}")
    return 0 if report.verdict and all(ok for _, ok in checks) else 1


def cmd_sweep(cfg: cfgmod.RunConfig) -> int:
    model = cfgmod.build_model(cfg)
    r_max = cfg.r_max if cfg.r_max is not None else 2.0 * cfg.r0
    grid = cfgmod.build_grid(cfg, cfg.r0, r_max)
    rows = continuity_sweep(model, cfg.r0, cfg.sweep_psi1, r_max=r_max,
                            grid=grid, tol=cfg.tol)
    out = _outdir(cfg)
    write_csv(os.path.join(out, "sweep.csv"), "dpsi1,sup_dev", rows)
    xs = [r for r, _ in rows]
    ys = [s for _, s in rows]
    svg = line_plot([("sup deviation", xs, ys)],
                    "Weighted deviation vs initial-slope perturbation",
                    "dpsi1", "sup_dev")
    write_atomic(os.path.join(out, "sweep.svg"), svg)
    for dpsi1, sup_dev in rows:
        print(f"dpsi1 = {_fmt(dpsi1)}  sup_dev = {_fmt(sup_dev)}")
    return 0


def cmd_validate_model(cfg: cfgmod.RunConfig) -> int:
    model = cfgmod.build_model(cfg)
    report = validate_hypotheses(model)
    lines = [f"kind = {model.kind}",
             f"delta = {_fmt(model.delta)}",
             f"holder_C = {_fmt(model.holder_C)}",
             f"sign_margin = {_fmt(report.sign_margin)}",
             f"holder_sup = {_fmt(report.holder_sup)}",
             f"samples_used = {report.samples_used}",
             f"verdict = {_fmt(report.verdict)}"]
    text = "\n".join(lines)
    print(text)
    write_atomic_if_requested(cfg, "hypothesis.txt", text + "\n")
    return 0 if report.verdict else 1


class RunConfigDefaults:
    out_dir = cfgmod.RunConfig().out_dir


def write_atomic_if_requested(cfg: cfgmod.RunConfig, name: str, text: str) -> None:
    # validate-model writes a file only when an output directory was chosen
    # explicitly (flag or config); a bare run just prints
    if cfg.out_dir == RunConfigDefaults.out_dir:
        return
    os.makedirs(cfg.out_dir, exist_ok=True)
    write_atomic(os.path.join(cfg.out_dir, name), text)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = _load(args)
        if args.command == "integrate":
            return cmd_integrate(cfg)
        if args.command == "verify":
            return cmd_verify(cfg)
        if args.command == "sweep":
            return cmd_sweep(cfg)
        if args.command == "validate-model":
            return cmd_validate_model(cfg)
        raise ConfigError(f"unknown command {args.command!r}")
    except _CONFIG_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except _SOLVER_ERRORS as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return 3
    except StreamuniqError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


def entrypoint() -> None:
    sys.exit(main())
