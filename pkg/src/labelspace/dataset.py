"""Multi-label datasets: ARFF loading and train/test splitting."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import ArffError, ValidationError

__all__ = ["MultiLabelDataset", "load_arff", "split", "write_arff"]


@dataclass(frozen=True, eq=False)
class MultiLabelDataset:
    """Dense feature matrix plus a boolean label-assignment matrix.

    Arrays are copied and made read-only on construction, so a dataset can be
    shared freely between threads and processes.
    """

    name: str
    features: np.ndarray
    labels: np.ndarray
    label_names: list[str] = field(default_factory=list)

    def __post_init__(self):
        X = np.array(self.features, dtype=float)
        Y = np.array(self.labels, dtype=bool)
        if X.ndim == 1:
            X = X.reshape(-1, 1)
        if X.ndim != 2 or Y.ndim != 2:
            raise ValueError("features and labels must be 2-d")
        if X.shape[0] != Y.shape[0]:
            raise ValueError(
                f"features have {X.shape[0]} rows but labels have {Y.shape[0]}"
            )
        if Y.shape[0] < 1:
            raise ValueError("dataset needs at least one sample")
        if Y.shape[1] < 2:
            raise ValueError("dataset needs at least two labels")
        names = list(self.label_names) or [f"label{j}" for j in range(Y.shape[1])]
        if len(names) != Y.shape[1]:
            raise ValueError("label_names length does not match label columns")
        if len(set(names)) != len(names):
            raise ValueError("label names must be unique")
        X.setflags(write=False)
        Y.setflags(write=False)
        object.__setattr__(self, "features", X)
        object.__setattr__(self, "labels", Y)
        object.__setattr__(self, "label_names", names)

    @property
    def n_samples(self) -> int:
        return self.labels.shape[0]

    @property
    def n_features(self) -> int:
        return self.features.shape[1]

    @property
    def n_labels(self) -> int:
        return self.labels.shape[1]

    def subset(self, rows, name: str | None = None) -> "MultiLabelDataset":
        rows = np.asarray(rows, dtype=int)
        return MultiLabelDataset(
            name=name or self.name,
            features=self.features[rows],
            labels=self.labels[rows],
            label_names=self.label_names,
        )

    def __eq__(self, other):
        if not isinstance(other, MultiLabelDataset):
            return NotImplemented
        return (
            self.name == other.name
            and self.label_names == other.label_names
            and self.features.shape == other.features.shape
            and np.array_equal(self.features, other.features)
            and np.array_equal(self.labels, other.labels)
        )

    __hash__ = None


# --------------------------------------------------------------------------
# ARFF parsing

_NUMERIC_TYPES = {"numeric", "real", "integer"}
_REJECTED_TYPES = {"string", "date", "relational"}


@dataclass
class _Attribute:
    name: str
    kind: str  # "numeric" or "nominal"
    values: list[str] = field(default_factory=list)


def _split_top_level(text: str, sep: str = ","):
    """Split on ``sep`` outside of single/double quotes."""
    parts, buf, quote = [], [], None
    i = 0
    while i < len(text):
        ch = text[i]
        if quote:
            if ch == "\\" and i + 1 < len(text):
                buf.append(text[i + 1])
                i += 2
                continue
            if ch == quote:
                quote = None
            else:
                buf.append(ch)
        elif ch in "'\"":
            quote = ch
        elif ch == sep:
            parts.append("".join(buf).strip())
            buf = []
        else:
            buf.append(ch)
        i += 1
    if quote:
        raise ValueError("unterminated quote")
    parts.append("".join(buf).strip())
    return parts


def _unquote(token: str) -> str:
    token = token.strip()
    if len(token) >= 2 and token[0] == token[-1] and token[0] in "'\"":
        return token[1:-1]
    return token


def _parse_attribute(rest: str, lineno: int) -> _Attribute:
    rest = rest.strip()
    if not rest:
        raise ArffError("attribute declaration without a name", lineno)
    if rest[0] in "'\"":
        end = rest.find(rest[0], 1)
        if end < 0:
            raise ArffError("unterminated quoted attribute name", lineno)
        name, spec = rest[1:end], rest[end + 1:].strip()
    else:
        m = re.match(r"(\S+)\s+(.*)$", rest, re.S)
        if not m:
            raise ArffError("attribute declaration without a type", lineno)
        name, spec = m.group(1), m.group(2).strip()
    if spec.startswith("{"):
        if not spec.endswith("}"):
            raise ArffError("unterminated nominal domain", lineno)
        try:
            values = [_unquote(v) for v in _split_top_level(spec[1:-1])]
        except ValueError as exc:
            raise ArffError(str(exc), lineno) from None
        return _Attribute(name, "nominal", values)
    kind = spec.split()[0].lower() if spec else ""
    if kind in _NUMERIC_TYPES:
        return _Attribute(name, "numeric")
    if kind in _REJECTED_TYPES:
        raise ArffError(f"unsupported attribute type {kind!r}", lineno)
    raise ArffError(f"unknown attribute type {spec!r}", lineno)


def _parse_data_row(line: str, attrs, lineno: int):
    """Return one row as a list of raw string tokens (None for missing)."""
    if line.startswith("{"):
        if not line.endswith("}"):
            raise ArffError("unterminated sparse row", lineno)
        row = ["0"] * len(attrs)
        for i, a in enumerate(attrs):
            if a.kind == "nominal":
                row[i] = a.values[0] if a.values else "0"
        body = line[1:-1].strip()
        if body:
            try:
                entries = _split_top_level(body)
            except ValueError as exc:
                raise ArffError(str(exc), lineno) from None
            for entry in entries:
                pieces = entry.split(None, 1)
                if len(pieces) != 2:
                    raise ArffError(f"bad sparse entry {entry!r}", lineno)
                try:
                    idx = int(pieces[0])
                except ValueError:
                    raise ArffError(f"bad sparse index {pieces[0]!r}", lineno) from None
                if not 0 <= idx < len(attrs):
                    raise ArffError(f"sparse index {idx} out of range", lineno)
                row[idx] = _unquote(pieces[1])
    else:
        try:
            row = [_unquote(t) for t in _split_top_level(line)]
        except ValueError as exc:
            raise ArffError(str(exc), lineno) from None
        if len(row) != len(attrs):
            raise ArffError(
                f"expected {len(attrs)} values, found {len(row)}", lineno
            )
    return [None if v == "?" else v for v in row]


def load_arff(path, n_labels: int, labels_at_end: bool = True) -> MultiLabelDataset:
    """Load a multi-label ARFF file (dense or sparse data section).

    The last ``n_labels`` attributes (first, if ``labels_at_end`` is False)
    are the labels. Nominal feature attributes are one-hot encoded in
    declaration order; missing numeric values are replaced by the column
    mean of observed values.
    """
    path = Path(path)
    if n_labels < 1:
        raise ValueError("n_labels must be positive")
    relation = path.stem
    attrs: list[_Attribute] = []
    rows: list[tuple[int, list]] = []
    in_data = False
    with path.open("r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("%"):
                continue
            if not in_data:
                low = line.lower()
                if low.startswith("@relation"):
                    relation = _unquote(line[len("@relation"):].strip()) or relation
                elif low.startswith("@attribute"):
                    attrs.append(_parse_attribute(line[len("@attribute"):], lineno))
                elif low.startswith("@data"):
                    in_data = True
                    if not attrs:
                        raise ArffError("@data before any @attribute", lineno)
                else:
                    raise ArffError(f"unexpected header line {line!r}", lineno)
            else:
                rows.append((lineno, _parse_data_row(line, attrs, lineno)))
    if not in_data:
        raise ArffError("missing @data section")
    if n_labels >= len(attrs):
        raise ValueError(
            f"n_labels={n_labels} leaves no feature columns "
            f"({len(attrs)} attributes declared)"
        )
    if not rows:
        raise ArffError("no data rows")

    n_attr = len(attrs)
    label_idx = list(range(n_attr - n_labels, n_attr)) if labels_at_end else list(range(n_labels))
    feat_idx = [i for i in range(n_attr) if i not in set(label_idx)]

    labels = np.zeros((len(rows), n_labels), dtype=bool)
    for r, (lineno, row) in enumerate(rows):
        for c, i in enumerate(label_idx):
            v = row[i]
            if v is None:
                raise ValidationError(f"line {lineno}: missing label value for {attrs[i].name!r}")
            try:
                num = float(v)
            except ValueError:
                num = math.nan
            if num not in (0.0, 1.0):
                raise ValidationError(
                    f"line {lineno}: label {attrs[i].name!r} has value {v!r}, expected 0 or 1"
                )
            labels[r, c] = num == 1.0

    columns = []
    for i in feat_idx:
        a = attrs[i]
        if a.kind == "numeric":
            col = np.empty(len(rows))
            for r, (lineno, row) in enumerate(rows):
                v = row[i]
                if v is None:
                    col[r] = np.nan
                    continue
                try:
                    col[r] = float(v)
                except ValueError:
                    raise ArffError(f"non-numeric value {v!r} for {a.name!r}", lineno) from None
            missing = np.isnan(col)
            if missing.any():
                observed = col[~missing]
                col[missing] = observed.mean() if observed.size else 0.0
            columns.append(col[:, None])
        else:
            onehot = np.zeros((len(rows), len(a.values)))
            for r, (lineno, row) in enumerate(rows):
                v = row[i]
                if v is None:
                    continue
                try:
                    onehot[r, a.values.index(v)] = 1.0
                except ValueError:
                    raise ArffError(f"value {v!r} not in domain of {a.name!r}", lineno) from None
            columns.append(onehot)
    features = np.hstack(columns) if columns else np.zeros((len(rows), 0))
    if not np.all(np.isfinite(features)):
        raise ValidationError("non-finite feature value")
    return MultiLabelDataset(
        name=relation,
        features=features,
        labels=labels,
        label_names=[attrs[i].name for i in label_idx],
    )


def write_arff(ds: MultiLabelDataset, path, sparse: bool = False) -> None:
    """Write ``ds`` as ARFF with numeric features followed by {0,1} labels."""
    path = Path(path)
    lines = [f"@relation '{ds.name}'", ""]
    for j in range(ds.n_features):
        lines.append(f"@attribute f{j} numeric")
    for name in ds.label_names:
        lines.append(f"@attribute '{name}' {{0,1}}")
    lines += ["", "@data"]
    for x, y in zip(ds.features, ds.labels):
        values = [repr(float(v)) for v in x] + [str(int(b)) for b in y]
        if sparse:
            entries = [f"{i} {v}" for i, v in enumerate(values) if float(v) != 0.0]
            lines.append("{" + ", ".join(entries) + "}")
        else:
            lines.append(",".join(values))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def split(ds: MultiLabelDataset, train_fraction: float, seed: int):
    """Shuffle rows with a seeded generator and cut into (train, test)."""
    if not 0.0 < train_fraction < 1.0:
        raise ValueError("train_fraction must lie in (0, 1)")
    n = ds.n_samples
    cut = int(math.floor(train_fraction * n + 0.5))
    if cut <= 0 or cut >= n:
        raise ValueError(
            f"train_fraction={train_fraction} on {n} rows gives parts of "
            f"sizes {cut} and {n - cut}"
        )
    perm = np.random.default_rng(seed).permutation(n)
    return (
        ds.subset(perm[:cut], name=ds.name),
        ds.subset(perm[cut:], name=ds.name),
    )
