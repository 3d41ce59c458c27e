"""Compare label-space partitioning methods for multi-label Gaussian NB.

Machine-readable results go to stdout; progress and diagnostics to stderr.
Exit codes: 0 success, 1 a dataset failed during ``run``, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import dataclasses
import logging
import sys

import numpy as np

from . import community, metrics
from .dataset import load_arff
from .errors import ArffError, ValidationError
from .experiment import ConfigError, ExperimentError, load_config, run_experiment
from .label_graph import build_cooccurrence_graph
from .partition import br_partition, community_partition, lp_partition, rakeld_partition
from .report import write_report

PARTITION_METHODS = ("BR", "LP", "rakeld") + community.METHODS


def _eprint(*args):
    print(*args, file=sys.stderr)


def _add_dataset_flags(p):
    p.add_argument("--arff", required=True, help="ARFF file with labels")
    p.add_argument("--n-labels", type=int, required=True, help="number of label attributes")
    p.add_argument("--labels-first", action="store_true",
                   help="labels are the first attributes instead of the last")


def _positive_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="labelspace", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run the full comparison protocol from a TOML config")
    run.add_argument("--config", required=True)
    run.add_argument("--samplings", type=_positive_int, help="override rakeld.samplings_per_k")
    run.add_argument("--k-values", help="override rakeld.k_values, comma separated")
    run.add_argument("--seed", type=int, help="override master_seed")
    run.add_argument("--alpha", type=float, help="override alpha")
    run.add_argument("--output-dir", help="override output_dir")
    run.add_argument("--jobs", type=_positive_int,
                     help="parallel work items (default: available CPUs)")

    part = sub.add_parser("partition", help="print a label partition as JSON")
    _add_dataset_flags(part)
    part.add_argument("--method", required=True, choices=PARTITION_METHODS)
    part.add_argument("--weighted", action="store_true")
    part.add_argument("--seed", type=int, default=0)
    part.add_argument("--k", type=int, default=3, help="block size for rakeld")
    part.add_argument("--walktrap-steps", type=_positive_int, default=community.WALKTRAP_STEPS)

    ev = sub.add_parser("evaluate", help="score a prediction matrix against the truth")
    ev.add_argument("true_matrix")
    ev.add_argument("pred_matrix")

    ig = sub.add_parser("inspect-graph", help="print the label co-occurrence edge list")
    _add_dataset_flags(ig)
    ig.add_argument("--weighted", action="store_true")
    return parser


def _read_matrix(path) -> np.ndarray:
    rows = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            tokens = line.split()
            if not tokens:
                continue
            if any(t not in ("0", "1") for t in tokens):
                raise ValueError(f"{path}:{lineno}: expected whitespace-separated 0/1 values")
            if rows and len(tokens) != len(rows[0]):
                raise ValueError(f"{path}:{lineno}: ragged row ({len(tokens)} vs {len(rows[0])} columns)")
            rows.append([t == "1" for t in tokens])
    if not rows:
        raise ValueError(f"{path}: empty matrix")
    return np.array(rows, dtype=bool)


def cmd_run(args) -> int:
    try:
        config = load_config(args.config)
        overrides = {}
        if args.samplings is not None:
            overrides["samplings_per_k"] = args.samplings
        if args.k_values:
            overrides["k_values"] = [int(k) for k in args.k_values.split(",")]
        if args.seed is not None:
            overrides["master_seed"] = args.seed
        if args.alpha is not None:
            overrides["alpha"] = args.alpha
        if args.output_dir is not None:
            overrides["output_dir"] = args.output_dir
        if args.jobs is not None:
            overrides["jobs"] = args.jobs
        config = dataclasses.replace(config, **overrides).validate()
    except (ConfigError, ValueError) as exc:
        _eprint(f"config error: {exc}")
        return 2
    try:
        report = run_experiment(config, progress=_eprint)
    except ExperimentError as exc:
        _eprint(f"run failed: {exc}")
        return 1
    for path in write_report(report, config.output_dir):
        print(path)
    for name, err in report.errors.items():
        _eprint(f"dataset {name} failed: {err}")
    for note in report.notes:
        _eprint(f"note: {note}")
    return 1 if report.errors else 0


def _load(args):
    return load_arff(args.arff, args.n_labels, labels_at_end=not args.labels_first)


def cmd_partition(args) -> int:
    try:
        ds = _load(args)
        if args.method == "BR":
            part = br_partition(ds.n_labels)
        elif args.method == "LP":
            part = lp_partition(ds.n_labels)
        elif args.method == "rakeld":
            part = rakeld_partition(ds.n_labels, args.k, args.seed)
        else:
            part = community_partition(ds, args.method, args.weighted, args.seed, args.walktrap_steps)
    except (OSError, ArffError, ValidationError, ValueError) as exc:
        _eprint(f"error: {exc}")
        return 2
    print(part.to_json())
    return 0


def cmd_evaluate(args) -> int:
    try:
        Y = _read_matrix(args.true_matrix)
        Y_hat = _read_matrix(args.pred_matrix)
        scores = metrics.evaluate(Y, Y_hat)
    except (OSError, ValueError) as exc:
        _eprint(f"error: {exc}")
        return 2
    for name, value in scores.items():
        print(f"{name}={value:.6f}")
    return 0


def cmd_inspect_graph(args) -> int:
    try:
        ds = _load(args)
    except (OSError, ArffError, ValidationError, ValueError) as exc:
        _eprint(f"error: {exc}")
        return 2
    sys.stdout.write(build_cooccurrence_graph(ds.labels, weighted=args.weighted).to_edge_list())
    return 0


COMMANDS = {
    "run": cmd_run,
    "partition": cmd_partition,
    "evaluate": cmd_evaluate,
    "inspect-graph": cmd_inspect_graph,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    return COMMANDS[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
