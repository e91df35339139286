"""Command-line interface.

Exit codes: 0 success, 1 invalid input, 2 infeasible dispatch, 3 I/O error.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import replace
from pathlib import Path

from .dispatch import DisconnectedGridError, InfeasibleDispatchError
from .engine import compare_wind_models, read_config, run_experiment
from .grid_model import ScenarioError, SynthesisSpec, read_scenario, synthesize_scenario, write_scenario
from .report import read_results, render_report, write_results, write_wind_comparison

EXIT_OK, EXIT_INVALID, EXIT_INFEASIBLE, EXIT_IO = 0, 1, 2, 3

log = logging.getLogger("balancemkt")


def _load_inputs(args):
    cfg = read_config(args.config)
    if args.seed is not None:
        cfg = replace(cfg, seed=args.seed)
    if args.threads is not None:
        cfg = replace(cfg, threads=args.threads)
    scenario_path = args.scenario or cfg.scenario
    if not scenario_path:
        raise ValueError("no scenario: pass --scenario or set 'scenario' in the config")
    return cfg, read_scenario(scenario_path)


def cmd_synth(args) -> int:
    spec = SynthesisSpec(n_buses=args.buses, n_zones=args.zones, seed=args.seed,
                         res_fraction_of_capacity=args.res_fraction, n_instants=args.instants)
    write_scenario(synthesize_scenario(spec), args.out)
    print(f"wrote {args.out}")
    return EXIT_OK


def cmd_run(args) -> int:
    cfg, scenario = _load_inputs(args)
    results = run_experiment(cfg, scenario)
    write_results(results, args.out)
    print(f"wrote results bundle to {args.out}")
    return EXIT_OK


def cmd_report(args) -> int:
    results = read_results(args.results)
    files = render_report(results, args.out)
    print(f"wrote {len(files)} files to {args.out}")
    return EXIT_OK


def cmd_compare_wind(args) -> int:
    cfg, scenario = _load_inputs(args)
    cmp = compare_wind_models(cfg, scenario)
    out = Path(args.out)
    write_results(cmp.gaussian, out / "gaussian")
    write_results(cmp.weibull, out / "weibull")
    write_wind_comparison(cmp.summary, out / "wind_comparison.csv")
    for p, models in cmp.summary.items():
        g, w = models["gaussian"], models["weibull"]
        print(f"P%={p:g}: gaussian mode {g['mode']:.3f} mean {g['mean']:.3f} GWh | "
              f"weibull mode {w['mode']:.3f} mean {w['mean']:.3f} GWh")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="balancemkt", description="Monte-Carlo balancing market simulator")
    ap.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("synth", help="generate a synthetic scenario file")
    s.add_argument("--buses", type=int, default=20)
    s.add_argument("--zones", type=int, default=6)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--res-fraction", type=float, default=0.3, help="renewable share of installed capacity")
    s.add_argument("--instants", type=int, default=96)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_synth)

    for name, func, help_ in (("run", cmd_run, "run an experiment and write a results bundle"),
                              ("compare-wind", cmd_compare_wind, "paired Gaussian vs Weibull wind runs")):
        r = sub.add_parser(name, help=help_)
        r.add_argument("--scenario", help="scenario file (overrides the config entry)")
        r.add_argument("--config", required=True, help="experiment config (JSON)")
        r.add_argument("--out", required=True)
        r.add_argument("--seed", type=int, help="override the master seed")
        r.add_argument("--threads", type=int, help="worker processes (capped by BALANCEMKT_THREADS)")
        r.set_defaults(func=func)

    rep = sub.add_parser("report", help="tables and SVG charts from a results bundle")
    rep.add_argument("--results", required=True)
    rep.add_argument("--out", required=True)
    rep.set_defaults(func=cmd_report)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except InfeasibleDispatchError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (ScenarioError, DisconnectedGridError, json.JSONDecodeError, ValueError, TypeError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
