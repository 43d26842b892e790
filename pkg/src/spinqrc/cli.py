"""Command-line interface.

Subcommands:

* ``run CONFIG``         one (J_s, f, seed) cell; writes trajectories,
                         capacity profile and entanglement summary
* ``sweep CONFIG``       the full (J_s, f, seed) grid with incremental output
* ``emit --results DIR`` plot-ready per-figure CSVs from a finished sweep
* ``validate``           randomized physics-invariant suite
* ``gen-signals CONFIG`` export the nine input sequences per frequency

Exit codes: 0 success, 1 runtime failure, 2 invalid configuration or usage.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import replace

from . import __version__
from .dynamics import random_model
from .entanglement import write_summary_json
from .experiments import (
    FIGURE_NAMES,
    ConfigError,
    ExperimentConfig,
    emit_figure_data,
    invariant_suite_ok,
    parse_config_file,
    read_sweep_results,
    run_cell,
    run_invariant_suite,
    run_sweep,
)
from .learning import write_capacity_csv, write_capacity_json
from .reservoir import run_reservoir, write_trajectory_csv
from .signals import N_SEQUENCES, make_input_sequence, write_sequence_csv


def _load_config(args) -> ExperimentConfig:
    cfg = parse_config_file(args.config)
    if args.seed is not None:
        cfg = replace(cfg, base_seed=args.seed)
    if args.out is not None:
        cfg = replace(cfg, output_dir=args.out)
    return cfg


def _cmd_run(args) -> int:
    cfg = _load_config(args)
    js, f = cfg.js_values[0], cfg.f_values[0]
    print(f"running single cell: J_s={js:g} f={f:g} seed=0 "
          f"(fingerprint {cfg.fingerprint()[:12]})")
    result = run_cell(cfg, js, f, seed_index=0)
    if result.status != "ok":
        print(f"run failed: {result.error}", file=sys.stderr)
        return 1
    out = cfg.output_dir
    os.makedirs(out, exist_ok=True)
    # Regenerate the cell's records (same seeds as run_cell) for export.
    model = random_model(js, seed=(cfg.base_seed, 0))
    seqs = [make_input_sequence(f, q, (cfg.base_seed, 0), time_axis=cfg.time_axis)
            for q in range(4)]
    train = run_reservoir(model, seqs[0], seqs[1], cfg.run, cfg.dissipator_convention)
    test = run_reservoir(model, seqs[2], seqs[3], cfg.run, cfg.dissipator_convention)
    write_trajectory_csv(train, os.path.join(out, "trajectory_train.csv"))
    write_trajectory_csv(test, os.path.join(out, "trajectory_test.csv"))
    write_capacity_csv(result.capacity, os.path.join(out, "capacity.csv"))
    write_capacity_json(result.capacity, os.path.join(out, "capacity.json"),
                        fingerprint=cfg.fingerprint())
    write_summary_json(result.entanglement, os.path.join(out, "entanglement.json"),
                       key={"J_s": js, "f": f, "seed": 0})
    print(f"total capacity: {result.capacity.total:.4f}")
    print(f"outputs written to {out}")
    return 0


def _cmd_sweep(args) -> int:
    cfg = _load_config(args)
    n_cells = len(cfg.js_values) * len(cfg.f_values) * cfg.n_coupling_seeds
    print(f"sweep {cfg.experiment_name}: {n_cells} cells, {args.threads} worker(s), "
          f"fingerprint {cfg.fingerprint()[:12]}")

    done = [0]

    def progress(res):
        done[0] += 1
        tag = "ok" if res.status == "ok" else f"ERROR ({res.error})"
        print(f"  [{done[0]}/{n_cells}] J_s={res.js:g} f={res.f:g} seed={res.seed_index}: {tag}")

    result = run_sweep(cfg, threads=args.threads, out_dir=cfg.output_dir, progress=progress)
    failed = [r for r in result.rows if r.status != "ok"]
    print(f"sweep finished: {len(result.rows) - len(failed)} ok, {len(failed)} failed; "
          f"outputs in {cfg.output_dir}")
    if len(failed) == len(result.rows):
        print("every cell failed", file=sys.stderr)
        return 1
    return 0


def _cmd_emit(args) -> int:
    result = read_sweep_results(args.results)
    out = args.out or args.results
    if args.figure == "all":
        # Emit every panel the sweep's axes can support; report the rest.
        for figure in FIGURE_NAMES:
            try:
                for path in emit_figure_data(result, figure, out):
                    print(f"wrote {path}")
            except ValueError as exc:
                print(f"skipping {figure}: {exc}")
        return 0
    for path in emit_figure_data(result, args.figure, out):
        print(f"wrote {path}")
    return 0


def _cmd_validate(args) -> int:
    print(f"invariant suite: {args.runs} randomized runs x {args.steps} injections")
    report = run_invariant_suite(n_runs=args.runs, n_injections=args.steps,
                                 base_seed=args.seed if args.seed is not None else 7)
    for key in ("max_trace_error", "max_hermiticity_error", "min_eigenvalue",
                "min_raw_negativity", "max_negativity", "max_zero_coupling_negativity"):
        print(f"  {key}: {report[key]:.3e}")
    if invariant_suite_ok(report):
        print("all invariants hold")
        return 0
    print("invariant violation detected", file=sys.stderr)
    return 1


def _cmd_gen_signals(args) -> int:
    cfg = _load_config(args)
    out = cfg.output_dir
    os.makedirs(out, exist_ok=True)
    for f in cfg.f_values:
        for q in range(N_SEQUENCES):
            seq = make_input_sequence(f, q, cfg.base_seed, time_axis=cfg.time_axis)
            path = os.path.join(out, f"signal_f{f:g}_seq{q}.csv")
            write_sequence_csv(seq, path)
            print(f"wrote {path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spinqrc",
        description="spin-network quantum reservoir computing simulator")
    parser.add_argument("--version", action="version", version=f"spinqrc {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, config=True):
        if config:
            p.add_argument("config", help="path to a key = value config file")
        p.add_argument("--seed", type=int, default=None, help="override base_seed")
        p.add_argument("--out", default=None, help="override output directory")
        p.add_argument("--threads", type=int, default=1, help="worker processes")

    p_run = sub.add_parser("run", help="run a single (J_s, f, seed) cell")
    common(p_run)
    p_run.set_defaults(func=_cmd_run)

    p_sweep = sub.add_parser("sweep", help="run the configured sweep grid")
    common(p_sweep)
    p_sweep.set_defaults(func=_cmd_sweep)

    p_emit = sub.add_parser("emit", help="emit plot-ready figure CSVs from a sweep")
    p_emit.add_argument("--results", required=True, help="directory with sweep outputs")
    p_emit.add_argument("--figure", default="all", choices=("all",) + FIGURE_NAMES)
    p_emit.add_argument("--out", default=None, help="output directory (default: results dir)")
    p_emit.set_defaults(func=_cmd_emit)

    p_val = sub.add_parser("validate", help="run the physics invariant suite")
    p_val.add_argument("--runs", type=int, default=25)
    p_val.add_argument("--steps", type=int, default=50)
    p_val.add_argument("--seed", type=int, default=None)
    p_val.set_defaults(func=_cmd_validate)

    p_gen = sub.add_parser("gen-signals", help="export the nine input sequences")
    common(p_gen)
    p_gen.set_defaults(func=_cmd_gen_signals)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
