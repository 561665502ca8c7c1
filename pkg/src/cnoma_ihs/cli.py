"""Command-line entry point.

Every option can also be given through an environment variable named
``CNOMA_IHS_<OPTION>`` (upper case, dashes as underscores); explicit flags win.
Failures print one JSON object ``{"error": <category>, "detail": ...}`` to
stderr and exit with the category's code.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
from pathlib import Path

from . import energy, experiments
from .analytic import QuadratureError
from .experiments import OutputError, SpecError
from .params import ParameterError, SystemParams, parse_config_text, params_from_mapping, validate
from .specfun import OracleFailure

ENV_PREFIX = "CNOMA_IHS_"
EXIT_CODES = {"usage": 2, "config": 3, "validation": 4, "io": 5, "numerical": 6}
PARAM_FLAGS = [f.name for f in dataclasses.fields(SystemParams)]


class CliError(Exception):
    def __init__(self, category: str, detail):
        super().__init__(detail)
        self.category = category
        self.detail = detail


def _env(dest: str):
    return os.environ.get(ENV_PREFIX + dest.upper())


def _add(parser, flag, **kw):
    dest = flag.lstrip("-").replace("-", "_")
    env = _env(dest)
    if env is not None:
        kw["default"] = env
    parser.add_argument(flag, dest=dest, **kw)


def _common(p: argparse.ArgumentParser, sweep: bool = True):
    if sweep:
        _add(p, "--samples", type=int, help="Monte Carlo samples per point")
        _add(p, "--seed", type=int)
        _add(p, "--out", default="results", help="output directory")
        _add(p, "--sinr-mode", choices=["printed", "theorem"])
        _add(p, "--format", choices=["csv", "plot", "both"], default="csv")
        _add(p, "--workers", type=int, default=1)
    for name in PARAM_FLAGS:
        _add(p, "--" + name.replace("_", "-"), metavar="X", help=argparse.SUPPRESS)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cnoma-ihs", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a figure preset")
    _add(run, "--preset", required=_env("preset") is None, choices=experiments.PRESETS)
    _common(run)

    sw = sub.add_parser("sweep", help="run a sweep from a config file")
    _add(sw, "--config", required=_env("config") is None)
    _common(sw)

    val = sub.add_parser("validate", help="check a parameter file without running")
    _add(val, "--config", required=_env("config") is None)
    _common(val, sweep=False)

    ts = sub.add_parser("thetastar", help="EE-optimal theta for a parameter file")
    _add(ts, "--config", required=_env("config") is None)
    _add(ts, "--method", choices=["grid", "fixedpoint"], default="grid")
    _add(ts, "--gain", type=float, help="|h_S1|^2 for the fixed-point map (default: its mean)")
    _add(ts, "--samples", type=int, default=100_000)
    _add(ts, "--seed", type=int, default=42)
    _add(ts, "--workers", type=int, default=1)
    _common(ts, sweep=False)
    return ap


def _param_overrides(args) -> dict:
    return {k: getattr(args, k) for k in PARAM_FLAGS if getattr(args, k, None) is not None}


def _read_config(path) -> dict:
    try:
        return parse_config_text(Path(path).read_text())
    except OSError as e:
        raise CliError("config", f"cannot read {path}: {e.strerror or e}")


def _spec(args, values: dict, name: str):
    values = {**values, **{k: str(v) for k, v in _param_overrides(args).items()}}
    spec = experiments.spec_from_mapping(values, name=name)
    return experiments.with_overrides(
        spec,
        n_samples=args.samples,
        seed=args.seed,
        sinr_mode=args.sinr_mode,
    )


def _run_spec(spec, args) -> dict:
    errs = experiments.check_spec(spec)
    if errs:
        raise CliError("validation", errs)
    table = experiments.run_sweep(spec, workers=int(args.workers))
    formats = ["csv", "plot"] if args.format == "both" else [args.format]
    paths = experiments.emit(table, args.out, formats)
    return {"written": [str(p) for p in paths], "rows": len(table.rows)}


def cmd_run(args) -> dict:
    values = parse_config_text(experiments.preset_text(args.preset))
    return _run_spec(_spec(args, values, args.preset), args)


def cmd_sweep(args) -> dict:
    values = _read_config(args.config)
    return _run_spec(_spec(args, values, Path(args.config).stem), args)


def _params(args):
    values = _read_config(args.config)
    values.update({k: str(v) for k, v in _param_overrides(args).items()})
    return params_from_mapping(values), values


def cmd_validate(args) -> dict:
    raw, values = _params(args)
    p = validate(raw)
    out = {
        "valid": True,
        "derived": {"lambda_s1": p.lam_s1, "lambda_s2": p.lam_s2, "lambda_12": p.lam_12,
                    "p_n": p.p_n, "p_f": p.p_f, "rho": p.rho,
                    "d_12": raw.d_12_effective},
    }
    if "swept" in values:
        errs = experiments.check_spec(experiments.spec_from_mapping(values))
        if errs:
            raise CliError("validation", errs)
        out["sweep"] = "valid"
    return out


def cmd_thetastar(args) -> dict:
    raw, _ = _params(args)
    p = validate(raw)
    gain = p.lam_s1 if args.gain is None else float(args.gain)
    res = energy.theta_star(p, gain, args.method, n=int(args.samples), seed=int(args.seed),
                            workers=int(args.workers))
    d = dataclasses.asdict(res)
    d["method"] = res.method.value
    d["gain"] = gain
    return d


COMMANDS = {"run": cmd_run, "sweep": cmd_sweep, "validate": cmd_validate,
            "thetastar": cmd_thetastar}


def _fail(category: str, detail) -> int:
    print(json.dumps({"error": category, "detail": detail}), file=sys.stderr)
    return EXIT_CODES[category]


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_CODES["usage"] if e.code else 0
    try:
        result = COMMANDS[args.command](args)
    except CliError as e:
        return _fail(e.category, e.detail)
    except ParameterError as e:
        return _fail("validation", [f"{f}: {m}" for f, m in e.errors])
    except SpecError as e:
        return _fail("config", str(e))
    except OutputError as e:
        return _fail("io", str(e))
    except (QuadratureError, OracleFailure, ArithmeticError) as e:
        return _fail("numerical", str(e))
    print(json.dumps(result, indent=2))
    return 0


if __name__ == "__main__":
    sys.exit(main())
