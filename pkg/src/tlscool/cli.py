"""Command-line entry point.

Exit codes: 0 success, 1 usage or parameter error, 2 solver error.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
import warnings
from pathlib import Path

import numpy as np

from .liouvillian import build_liouvillian
from .model import ModelVariant, ParamError, RegimeWarning, SystemParams, validate_params
from .polariton import build_basis, build_transitions
from .steady import SteadyStateError, solve_steady
from . import sweep as sw

log = logging.getLogger("tlscool")

EXIT_OK, EXIT_USAGE, EXIT_SOLVER = 0, 1, 2

PARAM_FLAGS = {
    "omega_z": float,
    "lambda_bar": float,
    "delta_z": float,
    "delta_x": float,
    "lam": float,
    "g0": float,
    "kappa0": float,
    "delta_b": float,
    "gamma_m": float,
    "gamma_tau": float,
    "kT": float,
    "n_exc": int,
    "n_mech": int,
    "n_cav": int,
    "omega_m_hz": float,
}
SWEEP_KEYS = ("axis", "start", "stop", "points", "scale", "variants", "preset")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _flag(name: str) -> str:
    return "--" + name.replace("_", "-")


def _add_param_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("physical parameters (units of omega_m)")
    for name, typ in PARAM_FLAGS.items():
        g.add_argument(_flag(name), dest=name, type=typ, default=None)


def _add_output_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("-o", "--output", default=None, help="write results here")
    p.add_argument("--format", choices=("csv", "json"), default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="tlscool", description=__doc__.splitlines()[0])
    parser.add_argument("--config", type=Path, default=None, help="JSON file with params/sweep/output blocks")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    parser.add_argument("--threads", type=int, default=None, help="sweep workers (default: all cores)")
    parser.add_argument("--echo-config", action="store_true", help="print the resolved config as JSON")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("steady", help="solve one parameter point")
    _add_param_flags(p)
    _add_output_flags(p)
    p.add_argument("--variant", choices=[v.value for v in ModelVariant], default=None)
    p.add_argument("--method", choices=("lu", "regularized", "inverse"), default=None)
    p.add_argument("--dump-transitions", type=Path, default=None, help="CSV of the polariton transition table")
    p.add_argument("--dump-liouvillian", type=Path, default=None, help="CSV triplets row,col,re,im")

    p = sub.add_parser("sweep", help="scan one parameter")
    _add_param_flags(p)
    _add_output_flags(p)
    p.add_argument("--preset", choices=sorted(sw.PRESETS), default=None)
    p.add_argument("--axis", choices=sw.AXES, default=None)
    p.add_argument("--from", dest="start", type=float, default=None)
    p.add_argument("--to", dest="stop", type=float, default=None)
    p.add_argument("--points", type=int, default=None)
    p.add_argument("--scale", choices=("linear", "log"), default=None)
    p.add_argument("--variants", default=None, help="comma list from: " + ",".join(sw.VARIANTS))

    p = sub.add_parser("optimal-detuning", help="detuning that minimizes n_ss")
    _add_param_flags(p)
    _add_output_flags(p)
    p.add_argument("--variant", choices=[ModelVariant.ELIMINATED.value, ModelVariant.SIMPLE.value,
                                         ModelVariant.FULL.value], default=None)
    p.add_argument("--window", type=float, nargs=2, default=None, metavar=("LO", "HI"),
                   help=f"delta_b search window (default {sw.DETUNING_WINDOW[0]} {sw.DETUNING_WINDOW[1]})")
    p.add_argument("--step", type=float, default=None, help=f"grid step (default {sw.DETUNING_STEP})")
    p.add_argument("--scan-omega-z", type=float, nargs=3, default=None, metavar=("FROM", "TO", "POINTS"),
                   help="repeat the search over an omega_z grid")

    p = sub.add_parser("compare", help="run FULL, ELIMINATED, SIMPLE and the bare formula at one point")
    _add_param_flags(p)
    _add_output_flags(p)

    sub.add_parser("self-check", help="run the built-in invariant checks")
    return parser


def _load_config(path: Path | None) -> dict:
    if path is None:
        return {}
    try:
        cfg = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(cfg, dict):
        raise UsageError(f"config {path} must hold a JSON object")
    # flat files list parameters at the top level
    flat = {k: cfg.pop(k) for k in list(cfg) if k in PARAM_FLAGS or k == "omega_m"}
    if flat:
        cfg["params"] = {**flat, **cfg.get("params", {})}
    unknown = set(cfg) - {"params", "sweep", "output", "command", "options"}
    if unknown:
        raise UsageError(f"unknown config block(s): {sorted(unknown)}")
    return cfg


def resolve_params(args: argparse.Namespace, cfg: dict) -> SystemParams:
    values = dict(cfg.get("params", {}))
    for name in PARAM_FLAGS:
        flag = getattr(args, name, None)
        if flag is not None:
            values[name] = flag
    # choosing the double-well path switches the direct pair off unless given explicitly
    if any(values.get(k) is not None for k in ("delta_z", "delta_x", "lam")):
        values.setdefault("omega_z", None)
        values.setdefault("lambda_bar", None)
    try:
        return SystemParams.from_dict(values)
    except TypeError as exc:
        raise ParamError(str(exc)) from exc


def _resolve_output(args, cfg: dict) -> dict:
    out = dict(cfg.get("output", {}))
    if getattr(args, "output", None) is not None:
        out["path"] = args.output
    if getattr(args, "format", None) is not None:
        out["format"] = args.format
    if out.get("path") and "format" not in out:
        out["format"] = "json" if str(out["path"]).endswith(".json") else "csv"
    return out


def _resolve_sweep(args, cfg: dict) -> dict:
    block = dict(cfg.get("sweep", {}))
    for key in SWEEP_KEYS:
        value = getattr(args, key, None)
        if value is not None:
            block[key] = value
    preset = block.pop("preset", None)
    if preset is not None:
        if preset not in sw.PRESETS:
            raise UsageError(f"unknown preset {preset!r}")
        block = {**sw.PRESETS[preset], **{k: v for k, v in block.items() if k != "variants"},
                 **({"variants": block["variants"]} if "variants" in block else {})}
    if isinstance(block.get("variants"), str):
        block["variants"] = [v.strip() for v in block["variants"].split(",") if v.strip()]
    block.setdefault("variants", [ModelVariant.ELIMINATED.value])
    block.setdefault("scale", "linear")
    missing = [k for k in ("axis", "start", "stop", "points") if k not in block]
    if missing:
        raise UsageError(f"sweep needs {missing} (flags or config) or --preset")
    return block


def _echo(command: str, params: SystemParams, output: dict, sweep: dict | None = None, options=None) -> dict:
    cfg = {"command": command, "params": params.to_dict(), "output": output}
    if sweep is not None:
        cfg["sweep"] = sweep
    if options:
        cfg["options"] = options
    return cfg


def _write_json(path, payload) -> None:
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=1, sort_keys=True, default=_json_default)
        fh.write("\n")


def _json_default(obj):
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, ModelVariant):
        return obj.value
    raise TypeError(f"cannot serialize {type(obj)}")


def _emit_config(config: dict, output: dict, echo: bool) -> None:
    if output.get("path"):
        _write_json(str(output["path"]) + ".config.json", config)
    if echo:
        print(json.dumps(config, indent=1, sort_keys=True, default=_json_default))


def cmd_steady(args, cfg) -> int:
    options = dict(cfg.get("options", {}))
    variant = args.variant or options.get("variant", ModelVariant.ELIMINATED.value)
    method = args.method or options.get("method", "lu")
    params = validate_params(resolve_params(args, cfg))
    output = _resolve_output(args, cfg)
    L = build_liouvillian(params, ModelVariant(variant))
    ss = solve_steady(L, method=method)
    diag = {k: v for k, v in ss.diagnostics.items() if k != "rho_reduced"}
    result = {"variant": variant, "n_ss": ss.n_ss, "sigma_z_ss": ss.sigma_z_ss, "diagnostics": diag}
    print(f"variant     {variant}")
    print(f"n_ss        {ss.n_ss:.10e}")
    print(f"sigma_z_ss  {ss.sigma_z_ss:.10e}")
    for key, value in diag.items():
        print(f"{key:<11} {value}")
    config = _echo("steady", params, output, options={"variant": variant, "method": method})
    if output.get("path"):
        if output["format"] == "json":
            _write_json(output["path"], {"metadata": config, "result": result})
        else:
            row = {"axis_name": "", "axis_value": float("nan"), "variant": variant,
                   "n_ss": ss.n_ss, "sigma_z_ss": ss.sigma_z_ss, "trace_err": diag["trace_err"],
                   "min_eig": diag["min_eig"], "residual": diag["residual"], "status": "ok"}
            sw.write_csv(sw.SweepResult([row]), output["path"])
    if args.dump_transitions is not None:
        table = build_transitions(build_basis(params))
        rows = table.to_rows()
        with open(args.dump_transitions, "w") as fh:
            fh.write("n,alpha,beta,A,sigma,omega\n")
            for r in rows:
                fh.write(f"{r['n']},{r['alpha']},{r['beta']},{r['A']:.12e},{r['sigma']:.12e},{r['omega']:.12e}\n")
    if args.dump_liouvillian is not None:
        np.savetxt(args.dump_liouvillian, L.triplets(), delimiter=",", header="row,col,re,im", comments="",
                   fmt=["%d", "%d", "%.12e", "%.12e"])
    _emit_config(config, output, args.echo_config)
    return EXIT_OK


def cmd_sweep(args, cfg) -> int:
    params = validate_params(resolve_params(args, cfg))
    output = _resolve_output(args, cfg)
    block = _resolve_sweep(args, cfg)
    try:
        spec = sw.SweepSpec(
            base=params,
            axis=block["axis"],
            start=float(block["start"]),
            stop=float(block["stop"]),
            points=int(block["points"]),
            scale=block["scale"],
            variants=tuple(block["variants"]),
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    result = sw.run_sweep(spec, workers=args.threads)
    config = _echo("sweep", params, output, sweep=spec.to_dict())
    result.metadata["config"] = config
    if output.get("path"):
        if output["format"] == "json":
            sw.write_json(result, output["path"])
        else:
            sw.write_csv(result, output["path"])
        print(f"wrote {len(result.rows)} rows to {output['path']}")
    else:
        sw.write_csv(result, "/dev/stdout")
    failed = sum(r["status"] != "ok" for r in result.rows)
    if failed:
        log.warning("%d of %d points failed; see the status column", failed, len(result.rows))
    _emit_config(config, output, args.echo_config)
    return EXIT_OK


def cmd_optimal_detuning(args, cfg) -> int:
    options = dict(cfg.get("options", {}))
    variant = args.variant or options.get("variant", ModelVariant.ELIMINATED.value)
    window = tuple(args.window or options.get("window", sw.DETUNING_WINDOW))
    step = args.step or options.get("step", sw.DETUNING_STEP)
    params = validate_params(resolve_params(args, cfg))
    output = _resolve_output(args, cfg)
    scan = args.scan_omega_z or options.get("scan_omega_z")
    if scan is not None:
        lo, hi, n = scan
        grid = np.linspace(lo, hi, int(n))
    else:
        grid = [params.omega_z]
    rows = []
    for wz in grid:
        opt = sw.optimal_detuning(params.replace(omega_z=float(wz)), variant, window, step)
        rows.append({"omega_z": float(wz), "delta_b_opt": opt.delta_b, "n_ss": opt.n_ss,
                     "on_boundary": opt.on_boundary})
        flag = "  (window boundary)" if opt.on_boundary else ""
        print(f"omega_z={wz:.6f}  delta_b_opt={opt.delta_b:+.6f}  n_ss={opt.n_ss:.6e}{flag}")
    config = _echo("optimal-detuning", params, output,
                   options={"variant": variant, "window": list(window), "step": step,
                            "scan_omega_z": list(scan) if scan is not None else None})
    if output.get("path"):
        if output["format"] == "json":
            _write_json(output["path"], {"metadata": config, "rows": rows})
        else:
            with open(output["path"], "w") as fh:
                fh.write("omega_z,delta_b_opt,n_ss,on_boundary\n")
                for r in rows:
                    fh.write(f"{r['omega_z']:.12e},{r['delta_b_opt']:.12e},{r['n_ss']:.12e},{r['on_boundary']}\n")
    _emit_config(config, output, args.echo_config)
    return EXIT_OK


def cmd_compare(args, cfg) -> int:
    params = validate_params(resolve_params(args, cfg))
    output = _resolve_output(args, cfg)
    report = sw.compare_variants(params)
    print(f"{'variant':<12}{'n_ss':>16}{'sigma_z_ss':>16}{'rel. to full':>14}  status")
    for name, row in report["variants"].items():
        rel = report["relative_to_full"].get(name, 0.0)
        print(f"{name:<12}{row['n_ss']:>16.6e}{row['sigma_z_ss']:>16.6f}{rel:>14.4f}  {row['status']}")
    print(json.dumps(report, sort_keys=True, default=_json_default))
    config = _echo("compare", params, output)
    if output.get("path"):
        _write_json(output["path"], {"metadata": config, "report": report})
    _emit_config(config, output, args.echo_config)
    return EXIT_OK


def cmd_self_check(args, cfg) -> int:
    from .selfcheck import run_checks

    results = run_checks()
    for r in results:
        print(f"{'PASS' if r.passed else 'FAIL'}  {r.name:<28} {r.detail}")
    return EXIT_OK if all(r.passed for r in results) else EXIT_SOLVER


COMMANDS = {
    "steady": cmd_steady,
    "sweep": cmd_sweep,
    "optimal-detuning": cmd_optimal_detuning,
    "compare": cmd_compare,
    "self-check": cmd_self_check,
}


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        cfg = _load_config(args.config)
        if cfg.get("command") not in (None, args.command):
            raise UsageError(f"config is for {cfg['command']!r}, not {args.command!r}")
    except UsageError as exc:
        print(f"tlscool: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    logging.basicConfig(level=logging.WARNING - 10 * args.verbose, format="%(levelname)s %(message)s")
    logging.captureWarnings(True)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("always", RegimeWarning)
            return COMMANDS[args.command](args, cfg)
    except (UsageError, ParamError) as exc:
        print(f"tlscool: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SteadyStateError, np.linalg.LinAlgError, ValueError) as exc:
        print(f"tlscool: solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()

