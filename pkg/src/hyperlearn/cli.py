"""Command line interface: ``hyperlearn {generate,run,sweep,baseline}``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .design import theorem_budget
from .errors import HyperlearnError
from .harness import (
    DECODERS,
    ExperimentConfig,
    aggregate,
    baseline,
    monotone_trend,
    records_jsonl,
    run_trials,
    sweep,
    sweep_csv,
)
from .model import ModelParams, expected_edges, sample_hypergraph


def _float_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.replace(",", " ").split()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a list of numbers: {text!r}") from None


def _add_model_args(p: argparse.ArgumentParser, required: bool = True) -> None:
    p.add_argument("--n", type=int, required=required)
    p.add_argument("--k", type=int, required=required)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--q", type=float)
    g.add_argument("--theta", type=float)


def _add_experiment_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", type=Path, help="JSON ExperimentConfig; flags given explicitly override it")
    _add_model_args(p, required=False)
    p.add_argument("--algo", choices=DECODERS)
    p.add_argument("--nu", type=float)
    p.add_argument("--epsilon", type=float)
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int, dest="master_seed")
    budget = p.add_mutually_exclusive_group()
    budget.add_argument("--t", type=int, help="explicit query budget")
    budget.add_argument("--budget", choices=["theorem"], help="use the decoder's theorem budget")
    p.add_argument("--mult", type=_float_list, help="budget multipliers, e.g. '0.25,0.5,1,2'")
    p.add_argument("--delta-bundle", type=float)
    p.add_argument("--c-loc", type=float)
    p.add_argument("--typicality-samples", type=int)
    p.add_argument("--sss-node-cap", type=int, help="search nodes before SSS gives up (counted as a failure)")
    p.add_argument("--condition-typical", action="store_true", default=None)
    p.add_argument("--parallelism", type=int)
    p.add_argument("--records", type=Path, help="write JSON-lines trial records here")
    p.add_argument("--no-timing", action="store_true", help="omit wall_ms from records")


def _config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    base: dict = {}
    if args.config is not None:
        base = json.loads(args.config.read_text())
    overrides = {
        "n": args.n,
        "k": args.k,
        "q": args.q,
        "theta": args.theta,
        "algorithm": args.algo,
        "nu": args.nu,
        "epsilon": args.epsilon,
        "trials": args.trials,
        "master_seed": args.master_seed,
        "t": args.t,
        "multipliers": args.mult,
        "delta_bundle": args.delta_bundle,
        "c_loc": args.c_loc,
        "typicality_samples": args.typicality_samples,
        "sss_node_cap": args.sss_node_cap,
        "condition_typical": args.condition_typical,
        "parallelism": args.parallelism,
    }
    base.update({k: v for k, v in overrides.items() if v is not None})
    if args.budget == "theorem":
        base["t"] = None
    if "n" not in base or "k" not in base:
        raise HyperlearnError("--n and --k (or a --config providing them) are required")
    return ExperimentConfig.from_dict(base)


def _emit_records(args, config: ExperimentConfig, records) -> None:
    target = args.records or (Path(config.output_path) if config.output_path else None)
    if target is not None:
        target.write_text(records_jsonl(records, timing=not args.no_timing))


def cmd_generate(args: argparse.Namespace) -> int:
    params = ModelParams(n=args.n, k=args.k, q=args.q, theta=args.theta)
    g = sample_hypergraph(params, np.random.default_rng(args.seed))
    if args.out is None:
        print(g.to_json())
    else:
        g.save(args.out)
        print(f"wrote {g.m} edges (expected {expected_edges(params):.2f}) to {args.out}")
    return 0


def cmd_run(args: argparse.Namespace) -> int:
    config = _config_from_args(args)
    records = []
    for mult in config.multipliers:
        recs = run_trials(config, mult)
        records.extend(recs)
        used, succ = aggregate(recs, config.condition_typical)
        t = recs[0].t if recs else 0
        print(f"{config.algorithm} n={config.n} k={config.k} mult={mult:g} t={t}: {succ}/{used} exact")
    _emit_records(args, config, records)
    return 0


def cmd_sweep(args: argparse.Namespace) -> int:
    config = _config_from_args(args)
    if args.mult is None and args.config is None:
        raise HyperlearnError("sweep needs a budget grid (--mult)")
    points, records = sweep(config)
    base = baseline(config.params)
    text = sweep_csv(points, base)
    if args.csv is None:
        sys.stdout.write(text)
    else:
        args.csv.write_text(text)
    print(f"# baseline m̄·log2(1/q) = {base:.3f}; monotone in t: {monotone_trend(points)}", file=sys.stderr)
    _emit_records(args, config, records)
    return 0


def cmd_baseline(args: argparse.Namespace) -> int:
    params = ModelParams(n=args.n, k=args.k, q=args.q, theta=args.theta)
    print(f"baseline {baseline(params):.6f}")
    for algo in ("comp", "dd", "sss"):
        print(f"{algo} {theorem_budget(algo, params)}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hyperlearn", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="sample an Erdős–Rényi k-uniform hypergraph")
    _add_model_args(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", type=Path)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("run", help="run seeded trials of one decoder")
    _add_experiment_args(p)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("sweep", help="success rate over a budget-multiplier grid (CSV)")
    _add_experiment_args(p)
    p.add_argument("--csv", type=Path)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("baseline", help="print the query lower bound and theorem budgets")
    _add_model_args(p)
    p.set_defaults(func=cmd_baseline)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except HyperlearnError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
