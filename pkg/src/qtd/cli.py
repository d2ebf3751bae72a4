"""Command-line interface.

Subcommands: ``dilation`` (clock-rate report for one packet pair),
``scenario NAME`` (run a named scenario, writing CSV + JSON files), and
``selftest`` (oracle-equivalence suites).

Parameter precedence is flag > config file > built-in default; the config
file is a single JSON object whose keys mirror ScenarioConfig.  Exit
codes: 0 success, 1 selftest failure, 2 usage/config error, 3 numeric
non-convergence.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import fields as dc_fields

import numpy as np

from . import __version__
from .dilation import dilation_report
from .errors import QuadratureNotConverged, ZeroNormState
from .scenarios import SCENARIO_NAMES, ScenarioConfig, run_scenario
from .selftest import run_all
from .wavepackets import PacketPairSpec

EXIT_OK = 0
EXIT_SELFTEST = 1
EXIT_USAGE = 2
EXIT_NUMERIC = 3

_CONFIG_KEYS = {f.name for f in dc_fields(ScenarioConfig)}
_FLAG_TO_KEY = {
    "theta": "theta", "phi": "phi", "u1": "u1", "u2": "u2", "delta": "delta",
    "epsilon": "epsilon", "line_ratio": "line_ratio", "grid": "grid",
    "out": "out",
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qtd",
        description="Spectroscopic signatures of quantum time dilation")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--theta", type=float, help="weight angle, radians")
        p.add_argument("--phi", type=float, help="relative phase, radians")
        p.add_argument("--u1", type=float, help="mean momentum 1 in mc units")
        p.add_argument("--u2", type=float, help="mean momentum 2 in mc units")
        p.add_argument("--delta", type=float, help="momentum spread in mc units")
        p.add_argument("--epsilon", type=float, help="recoil parameter")
        p.add_argument("--line-ratio", dest="line_ratio", type=float,
                       help="transition frequency over natural width")
        p.add_argument("--config", metavar="PATH",
                       help="JSON config mirroring ScenarioConfig")
        p.add_argument("--out", metavar="DIR", help="output directory")
        p.add_argument("--grid", type=int, metavar="N",
                       help="sweep grid resolution per axis")
        p.add_argument("--json", action="store_true",
                       help="machine-readable output on stdout")

    p_dil = sub.add_parser("dilation", help="clock-rate report for one pair")
    add_common(p_dil)

    p_scn = sub.add_parser("scenario", help="run a named scenario")
    p_scn.add_argument("name", help=f"one of: {', '.join(SCENARIO_NAMES)}")
    add_common(p_scn)

    p_st = sub.add_parser("selftest", help="oracle-equivalence suites")
    p_st.add_argument("--perturb", type=float, default=0.0,
                      help="inject a relative fault into the closed forms")
    p_st.add_argument("--json", action="store_true")
    return parser


def _load_config(args) -> ScenarioConfig:
    """Merge defaults, config file and flags (flag beats file beats default)."""
    values: dict = {}
    if getattr(args, "config", None):
        try:
            with open(args.config) as fh:
                doc = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ValueError(f"cannot read config {args.config}: {exc}")
        if not isinstance(doc, dict):
            raise ValueError("config file must hold a JSON object")
        unknown = set(doc) - _CONFIG_KEYS
        if unknown:
            raise ValueError(f"unknown config keys: {', '.join(sorted(unknown))}")
        for key, val in doc.items():
            default = ScenarioConfig.__dataclass_fields__[key].default
            want = type(default) if default is not None else float
            if key in ("scenario", "out"):
                if not isinstance(val, str):
                    raise ValueError(f"config key {key} must be a string")
            elif isinstance(default, int) and not isinstance(default, bool):
                if not isinstance(val, int):
                    raise ValueError(f"config key {key} must be an integer")
            elif not isinstance(val, (int, float)) or isinstance(val, bool):
                raise ValueError(f"config key {key} must be a number")
            values[key] = val
    for flag, key in _FLAG_TO_KEY.items():
        v = getattr(args, flag, None)
        if v is not None:
            values[key] = v
    return ScenarioConfig(**values)


def _spec_from_config(cfg: ScenarioConfig) -> PacketPairSpec:
    missing = [k for k in ("theta", "phi", "u1", "u2", "delta")
               if getattr(cfg, k) is None]
    if missing:
        raise ValueError(f"dilation needs --{', --'.join(missing)}")
    return PacketPairSpec(cfg.theta, cfg.phi, cfg.u1, cfg.u2, cfg.delta)


def _cmd_dilation(args) -> int:
    try:
        cfg = _load_config(args)
        spec = _spec_from_config(cfg)
    except (ValueError, ZeroNormState) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    printed = dilation_report(spec, "printed")
    second = dilation_report(spec, "second-moment")
    if args.json:
        doc = {
            "spec": {"theta": spec.theta, "phi": spec.phi, "u1": spec.u1,
                     "u2": spec.u2, "delta": spec.delta},
            "gamma_c_inv": {"printed": printed.gamma_c_inv,
                            "second_moment": second.gamma_c_inv},
            "gamma_q_inv": printed.gamma_q_inv,
            "delta_q": printed.delta_q,
            "mean_clock_rate": {"printed": printed.mean_clock_rate,
                                "second_moment": second.mean_clock_rate},
            "version": __version__,
        }
        print(json.dumps(doc, sort_keys=True, indent=2))
    else:
        print(f"packet pair: theta={spec.theta:.12g} phi={spec.phi:.12g} "
              f"u1={spec.u1:.12g} u2={spec.u2:.12g} delta={spec.delta:.12g}")
        print(f"gamma_c_inv (printed form):       {printed.gamma_c_inv:.17g}")
        print(f"gamma_c_inv (second-moment form): {second.gamma_c_inv:.17g}")
        print(f"gamma_q_inv:                      {printed.gamma_q_inv:.17g}")
        print(f"delta_q:                          {printed.delta_q:.17g}")
        print(f"mean clock rate (printed):        {printed.mean_clock_rate:.17g}")
        print(f"mean clock rate (second-moment):  {second.mean_clock_rate:.17g}")
    return EXIT_OK


def _cmd_scenario(args) -> int:
    try:
        cfg = _load_config(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    outdir = cfg.out or getattr(args, "out", None) or "."
    if args.name not in SCENARIO_NAMES:
        print(f"error: unknown scenario {args.name!r}; valid names: "
              f"{', '.join(SCENARIO_NAMES)}", file=sys.stderr)
        return EXIT_USAGE
    try:
        summary = run_scenario(args.name, cfg, outdir)
    except (ValueError, ZeroNormState) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except QuadratureNotConverged as exc:
        print(f"error: numeric non-convergence: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    if args.json:
        print(json.dumps(summary, sort_keys=True, indent=2, default=float))
    else:
        print(f"scenario {args.name}: wrote {len(summary['files'])} files")
        for f in summary["files"]:
            print(f"  {f}")
        for key in ("ridge_endpoint_sep_over_delta", "midpoint_upshift",
                    "max_rel_diff_vs_cl", "initial_slope_diff"):
            if key in summary:
                print(f"  {key} = {summary[key]:.6g}")
    return EXIT_OK


def _cmd_selftest(args) -> int:
    report = run_all(perturb=args.perturb)
    if args.json:
        print(json.dumps(report, sort_keys=True, indent=2, default=float))
    else:
        for res in report["suites"]:
            mark = "pass" if res["passed"] else "FAIL"
            print(f"[{mark}] {res['name']}: {json.dumps(res['details'], default=float)}")
        print("all passed" if report["all_passed"]
              else f"failed: {', '.join(report['failed'])}")
    return EXIT_OK if report["all_passed"] else EXIT_SELFTEST


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "dilation":
        return _cmd_dilation(args)
    if args.command == "scenario":
        return _cmd_scenario(args)
    return _cmd_selftest(args)


if __name__ == "__main__":
    sys.exit(main())
