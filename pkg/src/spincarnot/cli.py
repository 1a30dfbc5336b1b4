"""Command-line front end.

Subcommands:
  bounds    EMP bound curves versus the Carnot limit for several tuning ratios
  optimize  single maximum-power optimization, JSON report
  sweep     EMP versus Carnot-limit sweep over the cold temperature, CSV
  protocol  reconstructed optimal driving protocol of one branch, CSV
  verify    independent dynamics-integration audit, JSON

Exit codes: 0 success, 1 numerical/physical failure, 2 usage error.
Data goes to stdout unless an output path is configured; diagnostics go to
stderr.  Identical configuration produces byte-identical output.
"""
from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from . import tables
from .config import DEFAULTS, RunConfig, UsageError
from .engine import cycle_boundaries
from .errors import SpinCarnotError
from .oracle import cycle_energy_audit, quasi_static_audit
from .power import emp_vs_carnot_sweep, maximize_power
from .protocol import BranchKind, reconstruct_protocol, solve_k_for_duration

_OVERRIDE_KEYS = tuple(k for k in DEFAULTS if k != "output")

# verification thresholds used by the `verify` command
_ORACLE_HEAT_RTOL = 1e-6
_ENERGY_RESIDUAL_FRACTION = 1e-10
_POPULATION_RTOL = 1e-6


def _add_config_options(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", metavar="FILE", help="flat key = value config file")
    sub.add_argument("--output", metavar="PATH", help="write data here instead of stdout")
    grp = sub.add_argument_group("configuration overrides")
    for key in _OVERRIDE_KEYS:
        flag = "--" + key.replace("_", "-")
        kind = int if key == "t_cold_steps" else float
        grp.add_argument(flag, type=kind, default=None, dest=key)


def _resolved(args) -> RunConfig:
    overrides = {key: getattr(args, key) for key in _OVERRIDE_KEYS}
    if args.output is not None:
        overrides["output"] = args.output
    return RunConfig.resolve(args.config, overrides)


def _config_dict(cfg: RunConfig, **extra) -> dict:
    out = cfg.to_dict()
    out.update(extra)
    return out


def _note(message: str) -> None:
    print(message, file=sys.stderr)


def _tuning_factor(r: float) -> float:
    return 1.0 + 2.0 * math.sinh(r) ** 2


def cmd_bounds(args) -> int:
    cfg = _resolved(args)
    try:
        ratios = [float(s) for s in args.ratios.split(",") if s.strip()]
    except ValueError as exc:
        raise UsageError(f"bad --ratios list {args.ratios!r}") from exc
    if not ratios or args.eta_c_steps < 2 or not 0.0 < args.eta_c_max < 1.0:
        raise UsageError("need a non-empty ratio list, >= 2 grid points, and 0 < eta-c-max < 1")
    grid = np.linspace(0.0, args.eta_c_max, args.eta_c_steps)
    rows = []
    for ratio in ratios:
        factor = _tuning_factor(ratio * cfg.r_hot) / _tuning_factor(cfg.r_hot)
        for eta_c in grid:
            eta_s = 1.0 - (1.0 - eta_c) * factor
            if not 0.0 <= eta_s < 1.0:
                _note(f"skipping eta_c = {eta_c:g}, ratio = {ratio:g}: eta_s = {eta_s:g}")
                continue
            rows.append((eta_c, ratio, eta_s, eta_s / 2.0, eta_s / (2.0 - eta_s)))
    meta = _config_dict(cfg, ratios=args.ratios, eta_c_steps=args.eta_c_steps,
                        eta_c_max=args.eta_c_max)
    tables.write_text(tables.bounds_csv(rows, meta), cfg.output)
    if args.plot:
        from .plots import save_bounds_figure

        save_bounds_figure(rows, args.plot)
        _note(f"figure written to {args.plot}")
    return 0


def cmd_optimize(args) -> int:
    cfg = _resolved(args)
    t_cold = cfg.t_cold_min if args.t_cold is None else args.t_cold
    report = maximize_power(cfg.engine_params(t_cold))
    payload = report.to_dict()
    payload["config"] = _config_dict(cfg, t_cold=t_cold)
    tables.write_text(tables.render_json(payload), cfg.output)
    return 0


def cmd_sweep(args) -> int:
    cfg = _resolved(args)
    rows = emp_vs_carnot_sweep(
        cfg.engine_params(cfg.t_cold_min), cfg.t_cold_grid(), jobs=args.jobs
    )
    failures = [r for r in rows if r.report is None]
    for row in failures:
        _note(f"T_C = {row.t_cold:g} failed: {row.error}")
    tables.write_text(tables.sweep_csv(rows, _config_dict(cfg)), cfg.output)
    if args.plot:
        from .plots import save_sweep_figure

        save_sweep_figure(rows, args.plot)
        _note(f"figure written to {args.plot}")
    if len(failures) == len(rows):
        raise SpinCarnotError("every sweep point failed")
    return 0


def cmd_protocol(args) -> int:
    cfg = _resolved(args)
    t_cold = cfg.t_cold_min if args.t_cold is None else args.t_cold
    params = cfg.engine_params(t_cold)
    branch = BranchKind.HOT_PLUS if args.branch == "hot" else BranchKind.COLD_MINUS
    t_eff = params.t_hot_eff if branch is BranchKind.HOT_PLUS else params.t_cold_eff
    if args.duration is not None:
        duration = args.duration
    else:
        optimum = maximize_power(params)
        duration = (
            optimum.t_hot_star if branch is BranchKind.HOT_PLUS else optimum.t_cold_star
        )
    el = solve_k_for_duration(duration, branch, cycle_boundaries(params),
                              params.gamma, t_eff)
    trace = reconstruct_protocol(el, params.gamma, args.n_samples)
    meta = _config_dict(cfg, t_cold=t_cold, branch=args.branch, duration=duration,
                        k=el.k, n_samples=args.n_samples)
    tables.write_text(tables.protocol_csv(trace, meta), cfg.output)
    if args.plot:
        from .plots import save_protocol_figure

        save_protocol_figure(trace, args.plot)
        _note(f"figure written to {args.plot}")
    return 0


def cmd_verify(args) -> int:
    cfg = _resolved(args)
    t_cold = cfg.t_cold_min if args.t_cold is None else args.t_cold
    params = cfg.engine_params(t_cold)
    report = maximize_power(params)

    audit = cycle_energy_audit(
        params, report.t_hot_star, report.t_cold_star, n_samples=args.n_samples
    )
    q_hot_diff = abs(audit["q_hot_integrated"] - report.q_hot) / abs(report.q_hot)
    q_cold_diff = abs(audit["q_cold_integrated"] - report.q_cold) / abs(report.q_cold)
    boundaries = cycle_boundaries(params)
    pop_err = abs(audit["population_after_hot"] - boundaries.p1) / abs(boundaries.p1)
    energy_frac = abs(audit["energy_residual"]) / report.q_hot
    checks = {
        "q_hot_rel_diff": q_hot_diff,
        "q_cold_rel_diff": q_cold_diff,
        "population_rel_closure": pop_err,
        "energy_residual_over_q_hot": energy_frac,
        "passed": bool(
            q_hot_diff <= _ORACLE_HEAT_RTOL
            and q_cold_diff <= _ORACLE_HEAT_RTOL
            and pop_err <= _POPULATION_RTOL
            and energy_frac <= _ENERGY_RESIDUAL_FRACTION
        ),
    }
    qs_grid = np.geomspace(0.05, 20.0, 8) / params.gamma
    payload = {
        "config": _config_dict(cfg, t_cold=t_cold, n_samples=args.n_samples),
        "optimum": report.to_dict(),
        "cycle_audit": audit,
        "quasi_static": quasi_static_audit(params, qs_grid),
        "oracle_checks": checks,
    }
    tables.write_text(tables.render_json(payload), cfg.output)
    if not checks["passed"]:
        raise SpinCarnotError("oracle verification failed; see oracle_checks")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spincarnot",
        description="Finite-time optimization of a two-level-spin Carnot engine "
        "with temperature-tunable baths",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    bounds = subs.add_parser("bounds", help="EMP bound curves vs the Carnot limit")
    _add_config_options(bounds)
    bounds.add_argument("--ratios", default="0.5,0.75,1.0",
                        help="comma-separated r_cold/r_hot ratios")
    bounds.add_argument("--eta-c-steps", type=int, default=100)
    bounds.add_argument("--eta-c-max", type=float, default=0.99)
    bounds.add_argument("--plot", metavar="PATH", help="also render a figure here")
    bounds.set_defaults(func=cmd_bounds)

    optimize = subs.add_parser("optimize", help="single maximum-power optimization")
    _add_config_options(optimize)
    optimize.add_argument("--t-cold", type=float, default=None,
                          help="cold temperature (defaults to t_cold_min)")
    optimize.set_defaults(func=cmd_optimize)

    sweep = subs.add_parser("sweep", help="EMP sweep over the cold temperature")
    _add_config_options(sweep)
    sweep.add_argument("--jobs", type=int, default=1, help="parallel workers")
    sweep.add_argument("--plot", metavar="PATH", help="also render a figure here")
    sweep.set_defaults(func=cmd_sweep)

    protocol = subs.add_parser("protocol", help="export one optimal driving protocol")
    _add_config_options(protocol)
    protocol.add_argument("--t-cold", type=float, default=None)
    protocol.add_argument("--branch", choices=("hot", "cold"), default="hot")
    protocol.add_argument("--duration", type=float, default=None,
                          help="branch duration (defaults to the optimal one)")
    protocol.add_argument("--n-samples", type=int, default=512)
    protocol.add_argument("--plot", metavar="PATH", help="also render a figure here")
    protocol.set_defaults(func=cmd_protocol)

    verify = subs.add_parser("verify", help="independent integration audit")
    _add_config_options(verify)
    verify.add_argument("--t-cold", type=float, default=None)
    verify.add_argument("--n-samples", type=int, default=2048)
    verify.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        _note(f"usage error: {exc}")
        return 2
    except SpinCarnotError as exc:
        _note(f"error: {exc}")
        return 1


if __name__ == "__main__":
    sys.exit(main())
