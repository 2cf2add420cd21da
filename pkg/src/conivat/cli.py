"""Command-line front end: assess, cluster, benchmark, ablation, sweep.

The workflow mirrors the two-phase assessment procedure: ``assess`` writes
the reordered-dissimilarity image plus cut magnitudes and k suggestions for
a human to inspect, then ``cluster`` is invoked with the chosen k to emit a
partition. The benchmark subcommands wrap the evaluation protocols.

Exit codes: 0 success, 2 usage or input error, 1 runtime failure.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .clustering import cut_mst, suggest_k
from .constraints import ConstraintSet, generate_from_labels, read_constraints, sanitize
from .data import FeatureMatrix, load_csv, normalize_minmax, synth1, synth2
from .evaluation import (
    DEFAULT_ALGORITHMS,
    SWEEP_COUNTS,
    partition_accuracy,
    run_ablation,
    run_benchmark,
    run_constraint_sweep,
)
from .metric import LearnConfig
from .rdi import SCALES, render, write_pgm
from .vat import VARIANTS, conivat_pipeline

_GENERATORS = {"synth1": synth1, "synth2": synth2}


class InputError(Exception):
    """User-supplied data or flags are unusable; maps to exit code 2."""


def _add_common(p: argparse.ArgumentParser, *, variant: bool = False) -> None:
    p.add_argument("--data", action="append", default=[], metavar="CSV", help="dataset CSV path (repeatable for benchmark)")
    p.add_argument("--gen", action="append", default=[], choices=sorted(_GENERATORS), help="built-in generator (repeatable for benchmark)")
    p.add_argument("--label-column", default=None, help="class column: header name or 0-based index")
    p.add_argument("--constraints", default=None, metavar="FILE", help="constraint file ('S i j' / 'D i j' lines)")
    p.add_argument("--n-constraints", type=int, default=30, help="constraints to draw from labels (default 30)")
    p.add_argument("--seed", type=int, default=0, help="master seed (default 0)")
    p.add_argument("--out", default=".", metavar="DIR", help="output directory (default .)")
    p.add_argument("--alpha", type=float, default=LearnConfig.alpha, help="metric-learning step size")
    p.add_argument("--epsilon", type=float, default=LearnConfig.epsilon, help="objective-change stop threshold")
    p.add_argument("--max-iters", type=int, default=LearnConfig.max_iters, help="gradient-ascent iteration cap")
    p.add_argument("--max-projections", type=int, default=LearnConfig.max_projections, help="iterative-projection cap")
    if variant:
        p.add_argument("--variant", default="conivat", choices=VARIANTS, help="pipeline variant (default conivat)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="conivat", description="Constraint-driven visual cluster tendency assessment")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("assess", help="write RDI image, cut magnitudes, and k suggestions")
    _add_common(p, variant=True)
    p.add_argument("--scale", default="linear", choices=SCALES, help="pixel scaling (default linear)")
    p.set_defaults(func=cmd_assess)

    p = sub.add_parser("cluster", help="cut the MST at a chosen k and write the partition")
    _add_common(p, variant=True)
    p.add_argument("--k", type=int, required=True, help="cluster count (read it off the RDI)")
    p.set_defaults(func=cmd_cluster)

    p = sub.add_parser("benchmark", help="multi-run protocol over the standard algorithms")
    _add_common(p)
    p.add_argument("--runs", type=int, default=10, help="scored runs per pair (default 10)")
    p.set_defaults(func=cmd_benchmark)

    p = sub.add_parser("ablation", help="benchmark the four pipeline variants")
    _add_common(p)
    p.add_argument("--runs", type=int, default=10, help="scored runs per variant (default 10)")
    p.set_defaults(func=cmd_ablation)

    p = sub.add_parser("sweep", help="ConiVAT accuracy/time across constraint budgets")
    _add_common(p)
    p.add_argument("--runs", type=int, default=10, help="scored runs per count (default 10)")
    p.add_argument("--counts", default=",".join(str(c) for c in SWEEP_COUNTS), help="comma-separated constraint counts")
    p.set_defaults(func=cmd_sweep)
    return parser


def _parse_label_column(raw: str | None):
    if raw is None:
        return None
    try:
        return int(raw)
    except ValueError:
        return raw


def _load_datasets(args) -> list[tuple[str, FeatureMatrix]]:
    out: list[tuple[str, FeatureMatrix]] = []
    label_col = _parse_label_column(args.label_column)
    for path in args.data:
        try:
            data, dropped = load_csv(path, label_column=label_col)
        except (OSError, ValueError) as e:
            raise InputError(str(e)) from e
        if dropped:
            print(f"note: {path}: dropped {dropped} unparseable row(s)", file=sys.stderr)
        out.append((Path(path).stem, data))
    for name in args.gen:
        out.append((name, _GENERATORS[name](args.seed)))
    return out


def _load_one_dataset(args) -> tuple[str, FeatureMatrix]:
    sets = _load_datasets(args)
    if len(sets) != 1:
        raise InputError("exactly one of --data/--gen is required here")
    return sets[0]


def _load_constraints(args, data: FeatureMatrix) -> ConstraintSet:
    if args.constraints is not None:
        try:
            return read_constraints(args.constraints, data.n)
        except (OSError, ValueError) as e:
            raise InputError(str(e)) from e
    if args.n_constraints < 0:
        raise InputError("--n-constraints must be >= 0")
    if data.labels is None:
        if args.n_constraints == 0:
            return ConstraintSet.empty(data.n)
        raise InputError("cannot draw constraints: dataset has no labels (pass --constraints or --label-column)")
    try:
        return generate_from_labels(data, args.n_constraints, seed=args.seed)
    except ValueError as e:
        raise InputError(str(e)) from e


def _learn_config(args) -> LearnConfig:
    try:
        return LearnConfig(
            alpha=args.alpha,
            epsilon=args.epsilon,
            max_iters=args.max_iters,
            max_projections=args.max_projections,
        )
    except ValueError as e:
        raise InputError(str(e)) from e


def _outdir(args) -> Path:
    out = Path(args.out)
    os.makedirs(out, exist_ok=True)
    return out


def _run_variant(args, data: FeatureMatrix):
    cs = _load_constraints(args, data) if args.variant != "ivat" else None
    return conivat_pipeline(normalize_minmax(data), cs, _learn_config(args), variant=args.variant)


def cmd_assess(args) -> int:
    _, data = _load_one_dataset(args)
    out = _outdir(args)
    vat, report = _run_variant(args, data)
    write_pgm(render(vat, scale=args.scale), out / "rdi.pgm")
    with open(out / "cuts.csv", "w", encoding="utf-8") as fh:
        fh.write("position,magnitude\n")
        for t, mag in enumerate(vat.cut_magnitudes, start=1):
            fh.write(f"{t},{mag!r}\n")
    suggestions = suggest_k(vat) if vat.n >= 2 else []
    with open(out / "suggestions.csv", "w", encoding="utf-8") as fh:
        fh.write("k,score\n")
        for k, score in suggestions:
            fh.write(f"{k},{score!r}\n")
    if report is not None and report.learned:
        with open(out / "metric_report.csv", "w", encoding="utf-8") as fh:
            fh.write("iteration,objective\n")
            for i, g in enumerate(report.objective_trace):
                fh.write(f"{i},{g!r}\n")
        print(
            f"metric: {report.iterations_used} objective evaluations, "
            f"c1 residual {report.c1_residual:.2e}, min eigenvalue {report.min_eigenvalue:.2e}"
        )
    print(f"wrote {out / 'rdi.pgm'} ({vat.n}x{vat.n})")
    for k, score in suggestions[:3]:
        print(f"suggest k={k} (gap {score:.4f})")
    return 0


def cmd_cluster(args) -> int:
    _, data = _load_one_dataset(args)
    if not 1 <= args.k <= data.n:
        raise InputError(f"--k must be in [1, {data.n}], got {args.k}")
    out = _outdir(args)
    vat, _ = _run_variant(args, data)
    part = cut_mst(vat, args.k)
    with open(out / "partition.csv", "w", encoding="utf-8") as fh:
        fh.write("index,label\n")
        for i, lab in enumerate(part.labels):
            fh.write(f"{i},{lab}\n")
    print(f"wrote {out / 'partition.csv'} (k={args.k})")
    if data.labels is not None:
        print(f"PA: {partition_accuracy(part, data.labels):.2f}")
    return 0


def _write_report(report, out: Path, filename: str) -> int:
    with open(out / filename, "w", encoding="utf-8") as fh:
        fh.write(report.to_csv())
    print(report.to_table(), end="")
    print(f"wrote {out / filename}")
    return 0


def cmd_benchmark(args) -> int:
    sets = _load_datasets(args)
    if not sets:
        raise InputError("at least one --data/--gen is required")
    for name, data in sets:
        if data.labels is None:
            raise InputError(f"dataset {name!r} has no labels; benchmark needs ground truth")
    if args.runs < 1:
        raise InputError("--runs must be >= 1")
    report = run_benchmark(dict(sets), DEFAULT_ALGORITHMS, args.n_constraints, args.runs, args.seed, _learn_config(args))
    return _write_report(report, _outdir(args), "benchmark.csv")


def cmd_ablation(args) -> int:
    name, data = _load_one_dataset(args)
    if data.labels is None:
        raise InputError(f"dataset {name!r} has no labels; ablation needs ground truth")
    if args.runs < 1:
        raise InputError("--runs must be >= 1")
    report = run_ablation(data, args.n_constraints, args.runs, args.seed, _learn_config(args), name=name)
    return _write_report(report, _outdir(args), "ablation.csv")


def cmd_sweep(args) -> int:
    name, data = _load_one_dataset(args)
    if data.labels is None:
        raise InputError(f"dataset {name!r} has no labels; sweep needs ground truth")
    if args.runs < 1:
        raise InputError("--runs must be >= 1")
    try:
        counts = [int(c) for c in args.counts.split(",") if c.strip()]
    except ValueError as e:
        raise InputError(f"--counts must be comma-separated integers: {e}") from e
    if not counts or any(c < 0 for c in counts):
        raise InputError("--counts needs at least one non-negative integer")
    report = run_constraint_sweep(data, counts, args.runs, args.seed, _learn_config(args), name=name)
    return _write_report(report, _outdir(args), "sweep.csv")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except Exception as e:  # noqa: BLE001 - CLI boundary
        print(f"runtime error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
