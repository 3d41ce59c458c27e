"""End-to-end comparison protocol: data-driven and a priori partitions
against a sampled distribution of random (RAkELd) partitions."""

from __future__ import annotations

import csv
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import community, metrics, stats
from .dataset import MultiLabelDataset, load_arff, split
from .ensemble import fit_ensemble, predict_ensemble
from .partition import (
    LabelPartition,
    br_partition,
    community_partition,
    derive_seed,
    lp_partition,
    rakeld_partition,
)
from .synthetic import make_multilabel

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

logger = logging.getLogger(__name__)

__all__ = [
    "ConfigError",
    "ExperimentError",
    "DatasetSpec",
    "MethodSpec",
    "ExperimentConfig",
    "ExperimentReport",
    "DEFAULT_METHODS",
    "load_config",
    "run_experiment",
]

CONTROL = "RAkELd"
RAW_HEADER = ["method_or_rakeld", "k", "sampling", "measure", "value"]


class ConfigError(ValueError):
    """Invalid or unreadable experiment configuration."""


class ExperimentError(RuntimeError):
    """The run could not produce any result."""


@dataclass(frozen=True)
class MethodSpec:
    """``BR``, ``LP`` or a community algorithm, optionally on the weighted graph."""

    name: str

    def __post_init__(self):
        if self.name in ("BR", "LP"):
            return
        algo = self.name[: -len("-weighted")] if self.name.endswith("-weighted") else self.name
        if algo not in community.METHODS:
            raise ConfigError(f"unknown method {self.name!r}")

    @property
    def algorithm(self) -> str:
        return self.name.removesuffix("-weighted")

    @property
    def weighted(self) -> bool:
        return self.name.endswith("-weighted")

    @property
    def data_driven(self) -> bool:
        return self.name not in ("BR", "LP")


DEFAULT_METHODS = ("BR", "LP") + tuple(
    f"{algo}{suffix}" for algo in community.METHODS for suffix in ("", "-weighted")
)


@dataclass(frozen=True)
class DatasetSpec:
    name: str
    path: str | None = None
    n_labels: int | None = None
    labels_at_end: bool = True
    test_path: str | None = None
    synthetic: dict | None = None

    def load(self, master_seed: int, train_fraction: float):
        if self.synthetic is not None:
            params = dict(self.synthetic)
            ds = make_multilabel(name=self.name, **params)
            return split(ds, train_fraction, derive_seed(master_seed, self.name, "split"))
        path = Path(self.path)
        ds = load_arff(path, self.n_labels, self.labels_at_end)
        ds = MultiLabelDataset(self.name, ds.features, ds.labels, ds.label_names)
        test_path = Path(self.test_path) if self.test_path else path.with_name(path.stem + ".test.arff")
        if test_path.exists():
            test = load_arff(test_path, self.n_labels, self.labels_at_end)
            if test.n_features != ds.n_features:
                raise ValueError(f"{test_path} has {test.n_features} features, train has {ds.n_features}")
            return ds, MultiLabelDataset(self.name, test.features, test.labels, ds.label_names)
        if self.test_path:
            raise FileNotFoundError(self.test_path)
        return split(ds, train_fraction, derive_seed(master_seed, self.name, "split"))


@dataclass
class ExperimentConfig:
    datasets: list[DatasetSpec]
    methods: list[MethodSpec] = field(default_factory=lambda: [MethodSpec(m) for m in DEFAULT_METHODS])
    k_values: list[int] = field(default_factory=lambda: list(range(2, 12)))
    samplings_per_k: int = 25
    master_seed: int = 0
    alpha: float = 0.05
    output_dir: str = "results"
    train_fraction: float = 2.0 / 3.0
    walktrap_steps: int = community.WALKTRAP_STEPS
    jobs: int | None = None

    def validate(self) -> "ExperimentConfig":
        if not self.datasets:
            raise ConfigError("at least one dataset is required")
        names = [d.name for d in self.datasets]
        if len(set(names)) != len(names):
            raise ConfigError("dataset names must be unique")
        if not self.methods:
            raise ConfigError("methods must be non-empty")
        if not self.k_values or any(int(k) < 1 for k in self.k_values):
            raise ConfigError("k_values must be a non-empty list of positive integers")
        if self.samplings_per_k < 1:
            raise ConfigError("samplings_per_k must be >= 1")
        if not 0.0 < self.alpha < 1.0:
            raise ConfigError("alpha must lie in (0, 1)")
        if not 0.0 < self.train_fraction < 1.0:
            raise ConfigError("train_fraction must lie in (0, 1)")
        for d in self.datasets:
            if d.synthetic is None and (d.path is None or not d.n_labels):
                raise ConfigError(f"dataset {d.name!r} needs either 'path' and 'n_labels' or 'synthetic'")
        return self


def load_config(path) -> ExperimentConfig:
    """Read a TOML experiment config; relative paths resolve against its directory."""
    path = Path(path)
    try:
        raw = tomllib.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except (OSError, tomllib.TOMLDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    base = path.parent

    def resolve(p):
        if p is None:
            return None
        p = Path(p)
        return str(p if p.is_absolute() else base / p)

    try:
        datasets = []
        for d in raw.get("datasets", []):
            datasets.append(DatasetSpec(
                name=str(d["name"]),
                path=resolve(d.get("path")),
                n_labels=d.get("n_labels"),
                labels_at_end=bool(d.get("labels_at_end", True)),
                test_path=resolve(d.get("test_path")),
                synthetic=d.get("synthetic"),
            ))
        rakeld = raw.get("rakeld", {})
        kwargs = dict(datasets=datasets)
        if "methods" in raw:
            kwargs["methods"] = [MethodSpec(m) for m in raw["methods"]]
        if "k_values" in rakeld:
            kwargs["k_values"] = [int(k) for k in rakeld["k_values"]]
        if "samplings_per_k" in rakeld:
            kwargs["samplings_per_k"] = int(rakeld["samplings_per_k"])
        for key, conv in (("master_seed", int), ("alpha", float), ("train_fraction", float),
                          ("walktrap_steps", int), ("jobs", int)):
            if key in raw:
                kwargs[key] = conv(raw[key])
        if "output_dir" in raw:
            kwargs["output_dir"] = resolve(raw["output_dir"])
        return ExperimentConfig(**kwargs).validate()
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"invalid config {path}: {exc!r}") from None


@dataclass
class ExperimentReport:
    """Everything a run produces, keyed by dataset / method / measure."""

    datasets: list[str]
    methods: list[str]
    k_values: dict[str, list[int]] = field(default_factory=dict)
    scores: dict[tuple[str, str], dict[str, float]] = field(default_factory=dict)
    rakeld_scores: dict[str, list[tuple[int, int, dict[str, float]]]] = field(default_factory=dict)
    partitions: dict[tuple[str, str], LabelPartition] = field(default_factory=dict)
    likelihoods: dict[str, dict[tuple[str, str], stats.LikelihoodRecord]] = field(default_factory=dict)
    significance: dict[str, list[stats.SignificanceResult]] = field(default_factory=dict)
    errors: dict[str, str] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    @property
    def completed(self) -> list[str]:
        return [d for d in self.datasets if d not in self.errors]

    def likelihood(self, measure: str, dataset: str, method: str) -> float | None:
        rec = self.likelihoods.get(measure, {}).get((dataset, method))
        return None if rec is None else rec.likelihood


# --------------------------------------------------------------------------
# work items (top level so process pools can pickle them)

def _score(train, test, partition) -> dict[str, float]:
    model = fit_ensemble(train, partition)
    return metrics.evaluate(test.labels, predict_ensemble(model, test.features))


def _method_item(train, test, method: str, seed: int, walktrap_steps: int):
    spec = MethodSpec(method)
    if method == "BR":
        part = br_partition(train.n_labels)
    elif method == "LP":
        part = lp_partition(train.n_labels)
    else:
        part = community_partition(train, spec.algorithm, spec.weighted, seed, walktrap_steps)
    return part, _score(train, test, part)


def _rakeld_item(train, test, k: int, seed: int):
    part = rakeld_partition(train.n_labels, k, seed)
    return part, _score(train, test, part)


def _call(args):
    fn, *rest = args
    return fn(*rest)


def effective_k_values(k_values, n_labels: int) -> list[int]:
    return sorted({min(max(int(k), 2), n_labels) for k in k_values})


def _fmt_value(v: float) -> str:
    return repr(float(v))


def run_experiment(config: ExperimentConfig, progress=None) -> ExperimentReport:
    """Run the protocol for every dataset and assemble the report.

    Raw per-run scores are written to ``<output_dir>/raw/<dataset>.csv`` as
    they complete. A dataset that fails is recorded in ``report.errors`` and
    skipped; if none survive, :class:`ExperimentError` is raised.
    """
    config.validate()
    methods = [m.name for m in config.methods]
    report = ExperimentReport(datasets=[d.name for d in config.datasets], methods=methods)
    raw_dir = Path(config.output_dir) / "raw"
    raw_dir.mkdir(parents=True, exist_ok=True)
    jobs = config.jobs or os.cpu_count() or 1
    say = progress or (lambda msg: None)
    pool = ProcessPoolExecutor(max_workers=jobs) if jobs > 1 else None
    try:
        for spec in config.datasets:
            raw_path = raw_dir / f"{spec.name}.csv"
            try:
                _run_dataset(spec, config, methods, report, raw_path, pool, say)
            except Exception as exc:  # one bad dataset must not sink the run
                logger.error("dataset %s failed: %s", spec.name, exc)
                report.errors[spec.name] = f"{type(exc).__name__}: {exc}"
                raw_path.unlink(missing_ok=True)
                say(f"[{spec.name}] failed: {exc}")
    finally:
        if pool is not None:
            pool.shutdown()
    if not report.completed:
        raise ExperimentError("no dataset completed: " + "; ".join(
            f"{k}: {v}" for k, v in report.errors.items()))
    _assemble(report, config)
    return report


def _run_dataset(spec, config, methods, report, raw_path, pool, say):
    train, test = spec.load(config.master_seed, config.train_fraction)
    q = train.n_labels
    ks = effective_k_values(config.k_values, q)
    if ks != sorted(set(config.k_values)):
        note = f"{spec.name}: k values {sorted(set(config.k_values))} clamped to {ks} (n_labels={q})"
        logger.info(note)
        report.notes.append(note)
    report.k_values[spec.name] = ks

    items, keys = [], []
    for m in methods:
        seed = derive_seed(config.master_seed, spec.name, m, "community")
        items.append((_method_item, train, test, m, seed, config.walktrap_steps))
        keys.append((m, None, None))
    for k in ks:
        for s in range(config.samplings_per_k):
            seed = derive_seed(config.master_seed, spec.name, "rakeld", k, s)
            items.append((_rakeld_item, train, test, k, seed))
            keys.append(("rakeld", k, s))
    results = pool.map(_call, items, chunksize=4) if pool is not None else map(_call, items)

    runs = []
    with raw_path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(RAW_HEADER)
        for n_done, ((name, k, s), (part, scores)) in enumerate(zip(keys, results), start=1):
            for measure in metrics.MEASURES:
                writer.writerow([name, "" if k is None else k, "" if s is None else s,
                                 measure, _fmt_value(scores[measure])])
            fh.flush()
            if k is None:
                report.scores[(spec.name, name)] = scores
                report.partitions[(spec.name, name)] = part
            else:
                runs.append((k, s, scores))
            say(f"[{spec.name}] {n_done}/{len(items)} {name}" + ("" if k is None else f" k={k} s={s}"))
    report.rakeld_scores[spec.name] = runs


def _assemble(report: ExperimentReport, config: ExperimentConfig) -> None:
    done = report.completed
    for measure in metrics.MEASURES:
        hib = metrics.HIGHER_IS_BETTER[measure]
        table = {}
        for d in done:
            runs = np.array([sc[measure] for _, _, sc in report.rakeld_scores[d]])
            for m in report.methods:
                score = report.scores[(d, m)][measure]
                beaten = int(np.sum(runs < score if hib else runs > score))
                rec = stats.LikelihoodRecord(d, m, measure, beaten, len(runs))
                assert rec.likelihood == stats.outperformance_likelihood(score, runs, hib)
                table[(d, m)] = rec
        report.likelihoods[measure] = table

        if len(done) < 2:
            report.significance[measure] = []
            continue
        columns = report.methods + [CONTROL]
        S = np.array([
            [report.scores[(d, m)][measure] for m in report.methods]
            + [float(np.mean([sc[measure] for _, _, sc in report.rakeld_scores[d]]))]
            for d in done
        ])
        report.significance[measure] = stats.compare_with_control(
            S, columns, control=len(columns) - 1, measure=measure,
            alpha=config.alpha, higher_is_better=hib,
        )
    if len(done) < 2:
        report.notes.append("significance testing skipped: fewer than 2 completed datasets")
