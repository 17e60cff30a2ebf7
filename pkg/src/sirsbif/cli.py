"""Command-line front end.

Subcommands: equilibria, classify, hopf, cycles, simulate, sweep, figure,
list-figures.  Scenario parameters come from a strict JSON config (unknown
keys are rejected so that typos cannot silently change the regime); the
`figure` task draws its parameters from the bundled registry instead.

Exit codes: 0 success, 1 configuration error, 2 domain error,
3 inconclusive numerics (artifacts are still written).
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

from .errors import (ConfigError, DomainError, Inconclusive, SirsbifError,
                     UnknownFigure)
from .model import ModelParams, OriginalParams, State, reduce_original_params, \
    validate_params
from . import equilibria as eq
from .degeneracy import classify_degenerate
from .hopf import focal_values, hopf_parameters, in_omega_star
from .dynamics import (bifurcation_sweep, cycle_scan_for_params, integrate,
                       find_limit_cycles)
from .registry import get_entry, list_figures, reproduce_figure
from . import report

_PARAM_KEYS = {"p", "lambda0", "gamma", "eta", "k"}
_ORIG_KEYS = {"b", "d", "beta", "delta", "mu", "upsilon", "k"}
_TOP_KEYS = {"version", "task", "params", "original_params", "seed", "options"}
_TASK_OPTION_KEYS = {
    "equilibria": set(),
    "classify": {"z"},
    "hopf": {"z", "count"},
    "cycles": {"r_max", "budget"},
    "simulate": {"t_end", "initial", "fixed_step"},
    "sweep": {"parameter", "grid", "cycle_budget"},
}


def load_config(path: str, task: str) -> tuple:
    """(ModelParams, options dict, seed) from a strict JSON scenario file."""
    try:
        with open(path, "r", encoding="utf-8") as handle:
            raw = json.load(handle)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"malformed JSON in {path}: line {exc.lineno}, "
                          f"column {exc.colno}: {exc.msg}") from exc
    if not isinstance(raw, dict):
        raise ConfigError("config root must be a JSON object")
    unknown = set(raw) - _TOP_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
    if "version" not in raw:
        raise ConfigError("config is missing the required 'version' field")
    if raw["version"] != 1:
        raise ConfigError(f"unsupported config version {raw['version']!r}")
    if "task" in raw and raw["task"] != task:
        raise ConfigError(f"config task {raw['task']!r} does not match "
                          f"subcommand {task!r}")
    has_params = "params" in raw
    has_orig = "original_params" in raw
    if has_params == has_orig:
        raise ConfigError("exactly one of 'params' or 'original_params' is required")
    try:
        if has_params:
            block = raw["params"]
            unknown = set(block) - _PARAM_KEYS
            if unknown:
                raise ConfigError(f"unknown params keys: {', '.join(sorted(unknown))}")
            missing = _PARAM_KEYS - set(block)
            if missing:
                raise ConfigError(f"missing params keys: {', '.join(sorted(missing))}")
            params = validate_params(**{k: float(v) for k, v in block.items()})
        else:
            block = raw["original_params"]
            unknown = set(block) - _ORIG_KEYS
            if unknown:
                raise ConfigError(
                    f"unknown original_params keys: {', '.join(sorted(unknown))}")
            missing = _ORIG_KEYS - set(block)
            if missing:
                raise ConfigError(
                    f"missing original_params keys: {', '.join(sorted(missing))}")
            params = reduce_original_params(
                OriginalParams(**{k: float(v) for k, v in block.items()}))
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid parameter value: {exc}") from exc
    options = raw.get("options", {})
    if not isinstance(options, dict):
        raise ConfigError("'options' must be a JSON object")
    allowed = _TASK_OPTION_KEYS.get(task, set())
    unknown = set(options) - allowed
    if unknown:
        raise ConfigError(f"unknown options for task {task!r}: "
                          f"{', '.join(sorted(unknown))}")
    seed = int(raw.get("seed", 0))
    return params, options, seed


def _prepare_out(out_dir: str) -> str:
    os.makedirs(out_dir, exist_ok=True)
    if not os.access(out_dir, os.W_OK):
        raise ConfigError(f"output directory {out_dir} is not writable")
    return out_dir


def _param_dict(params: ModelParams) -> dict:
    return {"p": params.p, "lambda0": params.lambda0, "gamma": params.gamma,
            "eta": params.eta, "k": params.k, "r0": params.r0}


def run_equilibria(params: ModelParams, options: dict, out: str, fmt: str) -> dict:
    reports = eq.classified_equilibria(params)
    origin = eq.classify_equilibrium(params, "origin")
    rows = [(r.z, params.eta * r.z, r.trace, r.det, r.kind.value, r.multiplicity,
             r.res_H, r.res_Hp) for r in reports]
    if fmt in ("csv", "both"):
        report.write_csv(os.path.join(out, "equilibria.csv"),
                         ["z", "y", "trace", "det", "kind", "multiplicity",
                          "res_H", "res_Hp"], rows)
    if fmt in ("svg", "both"):
        _equilibria_svg(params, reports, os.path.join(out, "equilibria.svg"))
    return {"origin": origin.value,
            "endemic": [{"z": r.z, "kind": r.kind.value,
                         "multiplicity": r.multiplicity} for r in reports]}


def _equilibria_svg(params, reports, path):
    import numpy as np
    import matplotlib.pyplot as plt
    end = params.x_max
    xs = np.linspace(end * 1e-6, end, 600)
    hs = [eq.evaluate_H(params, float(x)) for x in xs]
    fig, ax = plt.subplots(figsize=(5.5, 4.0))
    ax.axhline(0.0, color="k", lw=0.6)
    ax.plot(xs, hs, color="tab:blue")
    for r in reports:
        ax.plot([r.z], [0.0], marker="o", color="tab:red")
    ax.set_xlabel("x")
    ax.set_ylabel("equilibrium function H(x)")
    ax.grid(True, alpha=0.3)
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def run_classify(params: ModelParams, options: dict, out: str, fmt: str) -> dict:
    reports = eq.classified_equilibria(params)
    rows = []
    result = []
    z_target = options.get("z")
    for r in reports:
        degenerate = ""
        if r.multiplicity == 2 or (z_target is not None
                                   and abs(r.z - float(z_target)) < 1e-6):
            degenerate = classify_degenerate(params, r.z).value
        rows.append((r.z, r.kind.value, degenerate, r.trace, r.det, r.multiplicity))
        result.append({"z": r.z, "kind": r.kind.value,
                       "degenerate_kind": degenerate or None})
    if fmt in ("csv", "both"):
        report.write_csv(os.path.join(out, "classify.csv"),
                         ["z", "kind", "degenerate_kind", "trace", "det",
                          "multiplicity"], rows)
    return {"origin": eq.classify_equilibrium(params, "origin").value,
            "equilibria": result}


def run_hopf(params: ModelParams, options: dict, out: str, fmt: str) -> dict:
    count = int(options.get("count", 4))
    if "z" in options:
        z = float(options["z"])
    else:
        foci = [r for r in eq.classified_equilibria(params) if r.det > 0.0]
        if not foci:
            raise DomainError("no positive-determinant equilibrium to analyze")
        z = max(foci, key=lambda r: -abs(r.trace)).z
    if not in_omega_star(z, params.p, params.eta, params.k):
        raise DomainError(f"(k, z, p, eta) at z = {z:g} is outside the "
                          "admissible weak-focus region")
    fv = focal_values(z, params.p, params.eta, params.k, count=count)
    lam, gam = hopf_parameters(z, params.p, params.eta, params.k)
    row = [z, params.p, params.eta, params.k, fv.D]
    row += list(fv.theta) + [None] * (4 - len(fv.theta))
    row += list(fv.zero_tols) + [None] * (4 - len(fv.zero_tols))
    row += [fv.order if fv.order is not None else "undetermined", fv.stability,
            fv.f1, fv.theta1_closed_form, fv.L11, fv.L22, fv.calibration, lam, gam]
    if fmt in ("csv", "both"):
        report.write_csv(os.path.join(out, "hopf.csv"),
                         ["z", "p", "eta", "k", "D",
                          "theta1", "theta2", "theta3", "theta4",
                          "tol1", "tol2", "tol3", "tol4",
                          "order", "stability", "f1", "theta1_closed_form",
                          "L11", "L22", "calibration",
                          "lambda0_breve", "gamma_breve"], [row])
    return {"z": z, "order": fv.order, "stability": fv.stability,
            "theta": list(fv.theta), "lambda0_breve": lam, "gamma_breve": gam}


def run_cycles(params: ModelParams, options: dict, out: str, fmt: str) -> dict:
    try:
        if "r_max" in options:
            foci = [r for r in eq.classified_equilibria(params) if r.det > 0.0]
            if not foci:
                raise DomainError("no focus equilibrium for cycle detection")
            focus = max(foci, key=lambda r: r.z)
            anchor = State(focus.z, params.eta * focus.z)
            scan = find_limit_cycles(params, anchor, float(options["r_max"]),
                                     budget=int(options.get("budget", 64)))
        else:
            focus, scan = cycle_scan_for_params(
                params, budget=int(options.get("budget", 64)))
            if scan is None:
                raise DomainError("no focus equilibrium for cycle detection")
    except Inconclusive as exc:
        # inconclusive numerics still produce the displacement table
        if fmt in ("csv", "both"):
            report.write_csv(os.path.join(out, "displacement.csv"),
                             ["r", "P_of_r", "d"],
                             [(r, None if d is None else r + d, d)
                              for r, d in (exc.samples or [])])
            report.write_csv(os.path.join(out, "cycles.csv"),
                             ["radius", "period", "amplitude_x", "stability",
                              "residual", "from_boundary_probe"], [])
        return {"inconclusive": str(exc), "cycle_count": None, "cycles": []}
    _emit_cycles(scan, out, fmt)
    return {"focus_z": focus.z, "cycle_count": scan.count,
            "cycles": [{"radius": rec.radius, "period": rec.period,
                        "stability": rec.stability,
                        "residual": rec.residual} for rec in scan.records]}


def _emit_cycles(scan, out: str, fmt: str):
    if fmt in ("csv", "both"):
        report.write_csv(os.path.join(out, "displacement.csv"),
                         ["r", "P_of_r", "d"],
                         [(r, None if d is None else r + d, d)
                          for r, d in scan.samples])
        report.write_csv(os.path.join(out, "cycles.csv"),
                         ["radius", "period", "amplitude_x", "stability",
                          "residual", "from_boundary_probe"],
                         [(rec.radius, rec.period, rec.amplitude_x, rec.stability,
                           rec.residual, rec.from_boundary_probe)
                          for rec in scan.records])
    if fmt in ("svg", "both"):
        report.displacement_svg(os.path.join(out, "cycles.svg"), scan.samples,
                                scan.records)


def run_simulate(params: ModelParams, options: dict, out: str, fmt: str,
                 rel_tol: float) -> dict:
    if "t_end" not in options or "initial" not in options:
        raise ConfigError("simulate needs options.t_end and options.initial")
    t_end = float(options["t_end"])
    initials = options["initial"]
    if not isinstance(initials, list) or not initials:
        raise ConfigError("options.initial must be a non-empty list of [x, y] pairs")
    fixed = options.get("fixed_step")
    trajectories = []
    rows = []
    for idx, pair in enumerate(initials):
        x0, y0 = float(pair[0]), float(pair[1])
        traj = integrate(params, State(x0, y0), t_end, rel_tol=rel_tol,
                         fixed_step=float(fixed) if fixed else None)
        trajectories.append(traj)
        for t, (x, y) in zip(traj.times, traj.states):
            rows.append((idx, t, x, y))
    if fmt in ("csv", "both"):
        report.write_csv(os.path.join(out, "trajectory.csv"),
                         ["traj_id", "t", "x", "y"], rows)
    if fmt in ("svg", "both"):
        reports = eq.classified_equilibria(params)
        report.phase_portrait_svg(os.path.join(out, "portrait.svg"), params,
                                  trajectories, reports)
    return {"trajectories": len(trajectories),
            "steps": [t.steps for t in trajectories]}


def _grid_from_options(options: dict) -> list:
    grid = options.get("grid")
    if isinstance(grid, list):
        return [float(v) for v in grid]
    if isinstance(grid, dict):
        keys = set(grid)
        if keys != {"from", "to", "count"}:
            raise ConfigError("grid object needs exactly from/to/count")
        n = int(grid["count"])
        a, b = float(grid["from"]), float(grid["to"])
        if n < 2:
            raise ConfigError("grid count must be >= 2")
        return [a + (b - a) * i / (n - 1) for i in range(n)]
    raise ConfigError("sweep needs options.grid (list or {from,to,count})")


def run_sweep(params: ModelParams, options: dict, out: str, fmt: str,
              rel_tol: float, jobs: int) -> dict:
    parameter = options.get("parameter")
    if parameter not in ("p", "lambda0", "gamma", "eta", "k"):
        raise ConfigError(f"options.parameter must name a model parameter, "
                          f"got {parameter!r}")
    grid = _grid_from_options(options)
    sweep = bifurcation_sweep(params, parameter, grid,
                              rel_tol=max(rel_tol, 1e-11),
                              cycle_budget=int(options.get("cycle_budget", 48)),
                              jobs=jobs)
    _emit_sweep(sweep, out, fmt)
    return {"parameter": parameter,
            "events": [{"kind": ev.kind, "lo": ev.lo, "hi": ev.hi,
                        "detail": ev.detail} for ev in sweep.events],
            "cycle_counts": [pt.cycle_count for pt in sweep.points]}


def _emit_sweep(sweep, out: str, fmt: str):
    if fmt in ("csv", "both"):
        rows = []
        for pt in sweep.points:
            kinds = ";".join(r.kind.value if r.kind else "?" for r in pt.equilibria)
            rows.append((pt.value, len(pt.equilibria), kinds, pt.cycle_count,
                         pt.max_cycle_period, pt.focus_trace, pt.focus_z, pt.error))
        report.write_csv(os.path.join(out, "sweep.csv"),
                         [sweep.parameter, "n_equilibria", "kinds", "cycle_count",
                          "max_cycle_period", "focus_trace", "focus_z", "error"], rows)
        report.write_csv(os.path.join(out, "events.csv"),
                         ["event", "lo", "hi", "detail"],
                         [(ev.kind, ev.lo, ev.hi, ev.detail)
                          for ev in sweep.events])
    if fmt in ("svg", "both"):
        report.sweep_svg(os.path.join(out, "sweep.svg"), sweep)


def run_figure(figure_id: str, out: str, fmt: str, rel_tol: float,
               jobs: int) -> dict:
    entry = get_entry(figure_id)
    outcome = reproduce_figure(figure_id, rel_tol=rel_tol, jobs=jobs)
    params = entry.params
    if outcome.scan is not None:
        _emit_cycles(outcome.scan, out, fmt)
    if outcome.sweep is not None:
        _emit_sweep(outcome.sweep, out, fmt)
        # draw the portrait where the swept structure exists, not at the
        # pre-bifurcation end of the grid
        params = params.replace(gamma=min(entry.gamma_grid))
    _figure_portrait(params, outcome, out, fmt, rel_tol)
    return {"figure": figure_id, "verdict": outcome.verdict,
            "expected": outcome.expected, "detected": _jsonable(outcome.detected),
            "note": entry.note}


def _figure_portrait(params, outcome, out: str, fmt: str, rel_tol: float):
    reports = eq.classified_equilibria(params)
    foci = [r for r in reports if r.det > 0.0]
    anchor = foci[0] if foci else (reports[0] if reports else None)
    trajectories = []
    rows = []
    if anchor is not None:
        z, y = anchor.z, params.eta * anchor.z
        _, det = eq.trace_det(params, anchor.z)
        t_end = 12.0 * 2.0 * math.pi / math.sqrt(max(det, 1e-2)) if det > 0 else 60.0
        for idx, frac in enumerate((0.05, 0.2, 0.5, 0.8)):
            x0 = z * (1.0 + frac * 0.4)
            y0 = y * (1.0 - frac * 0.2)
            if not State(x0, y0).in_region(params):
                continue
            traj = integrate(params, State(x0, y0), t_end,
                             rel_tol=max(rel_tol, 1e-10))
            trajectories.append(traj)
            for t, (x, yy) in zip(traj.times[::4], traj.states[::4]):
                rows.append((idx, t, x, yy))
    if fmt in ("csv", "both"):
        report.write_csv(os.path.join(out, "portrait.csv"),
                         ["traj_id", "t", "x", "y"], rows)
    if fmt in ("svg", "both"):
        cycles = outcome.scan.records if outcome.scan is not None else None
        report.phase_portrait_svg(os.path.join(out, "portrait.svg"), params,
                                  trajectories, reports, cycles=cycles)


def _jsonable(value):
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if hasattr(value, "value") and not isinstance(value, (int, float, str)):
        return value.value
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sirsbif",
        description="Bifurcation analysis of the reduced planar SIRS system")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="scenario JSON file")
    common.add_argument("--out", default="out", help="output directory")
    common.add_argument("--rel-tol", type=float, default=1e-12,
                        help="integrator relative tolerance")
    common.add_argument("--format", choices=("csv", "svg", "both"), default="both")
    common.add_argument("--seed", type=int, default=0,
                        help="seed recorded with the artifacts")
    common.add_argument("--jobs", type=int, default=1,
                        help="parallel workers for sweeps")
    sub = parser.add_subparsers(dest="task", required=True)
    for task in ("equilibria", "classify", "hopf", "cycles", "simulate", "sweep"):
        sub.add_parser(task, parents=[common])
    fig = sub.add_parser("figure", parents=[common])
    fig.add_argument("id", help="figure id from the registry")
    sub.add_parser("list-figures", parents=[common])
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.task == "list-figures":
            for entry in list_figures():
                print(f"{entry.figure_id:6s} {entry.task:9s} {entry.note}")
            return 0
        out = _prepare_out(args.out)
        if args.task == "figure":
            result = run_figure(args.id, out, args.format, args.rel_tol, args.jobs)
            payload = {"task": "figure", "seed": args.seed, **result}
            report.write_json(os.path.join(out, "result.json"), payload)
            print(f"figure {args.id}: verdict = {result['verdict']}")
            return 3 if result["verdict"] == "inconclusive" else 0
        if not args.config:
            raise ConfigError(f"task {args.task!r} requires --config")
        params, options, seed = load_config(args.config, args.task)
        if args.seed == 0 and seed:
            args.seed = seed
        if args.task == "equilibria":
            result = run_equilibria(params, options, out, args.format)
        elif args.task == "classify":
            result = run_classify(params, options, out, args.format)
        elif args.task == "hopf":
            result = run_hopf(params, options, out, args.format)
        elif args.task == "cycles":
            result = run_cycles(params, options, out, args.format)
        elif args.task == "simulate":
            result = run_simulate(params, options, out, args.format, args.rel_tol)
        elif args.task == "sweep":
            result = run_sweep(params, options, out, args.format, args.rel_tol,
                               args.jobs)
        else:
            raise ConfigError(f"unhandled task {args.task!r}")
        payload = {"task": args.task, "seed": args.seed,
                   "params": _param_dict(params), **_jsonable(result)}
        report.write_json(os.path.join(out, "result.json"), payload)
        print(json.dumps(_jsonable(result), indent=2, sort_keys=True))
        return 3 if result.get("inconclusive") else 0
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except UnknownFigure as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except DomainError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return 2
    except Inconclusive as exc:
        print(f"inconclusive: {exc}", file=sys.stderr)
        return 3
    except SirsbifError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
