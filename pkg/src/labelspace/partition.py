"""Label-space partitioning strategies: a priori, random and data-driven."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass

import numpy as np

from . import community
from .errors import UndefinedQualityError
from .label_graph import build_cooccurrence_graph

__all__ = [
    "LabelPartition",
    "br_partition",
    "lp_partition",
    "rakeld_partition",
    "community_partition",
    "derive_seed",
]


@dataclass(frozen=True)
class LabelPartition:
    """Disjoint, non-empty label blocks covering ``0..n_labels-1``.

    Labels inside a block are kept sorted; block order is meaningful only
    for presentation.
    """

    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        blocks = tuple(tuple(sorted(int(i) for i in b)) for b in self.blocks)
        if any(len(b) == 0 for b in blocks):
            raise ValueError("partition blocks must be non-empty")
        flat = [i for b in blocks for i in b]
        if sorted(flat) != list(range(len(flat))):
            raise ValueError("blocks must be disjoint and cover 0..n_labels-1")
        object.__setattr__(self, "blocks", blocks)

    @property
    def n_labels(self) -> int:
        return sum(len(b) for b in self.blocks)

    @property
    def sizes(self) -> list[int]:
        return [len(b) for b in self.blocks]

    def as_set_family(self) -> frozenset:
        return frozenset(frozenset(b) for b in self.blocks)

    def to_json(self) -> str:
        return json.dumps([list(b) for b in self.blocks], separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str) -> "LabelPartition":
        return cls(tuple(tuple(b) for b in json.loads(text)))


def derive_seed(master_seed: int, *keys) -> int:
    """Deterministic 63-bit seed from a master seed and a key tuple."""
    text = repr((int(master_seed),) + tuple(str(k) for k in keys))
    return int.from_bytes(hashlib.sha256(text.encode()).digest()[:8], "big") >> 1


def br_partition(n_labels: int) -> LabelPartition:
    if n_labels < 1:
        raise ValueError("n_labels must be >= 1")
    return LabelPartition(tuple((i,) for i in range(n_labels)))


def lp_partition(n_labels: int) -> LabelPartition:
    if n_labels < 1:
        raise ValueError("n_labels must be >= 1")
    return LabelPartition((tuple(range(n_labels)),))


def rakeld_partition(n_labels: int, k: int, seed: int) -> LabelPartition:
    """Shuffle the labels and cut them into blocks of ``k``; a shorter
    remainder becomes its own final block."""
    if not 1 <= k <= n_labels:
        raise ValueError(f"k={k} must lie in [1, {n_labels}]")
    order = np.random.default_rng(seed).permutation(n_labels).tolist()
    return LabelPartition(tuple(tuple(order[i:i + k]) for i in range(0, n_labels, k)))


def community_partition(
    train, method: str, weighted: bool, seed: int = 0, walktrap_steps: int = community.WALKTRAP_STEPS
) -> LabelPartition:
    """Partition labels by community detection on the training co-occurrence graph.

    Falls back to singletons when the graph has no edges.
    """
    if method not in community.METHODS:
        raise ValueError(
            f"unknown community detection method {method!r}; expected one of {community.METHODS}"
        )
    labels = train.labels if hasattr(train, "labels") else train
    g = build_cooccurrence_graph(labels, weighted=weighted)
    try:
        assignment = community.detect(g, method, seed=seed, walktrap_steps=walktrap_steps)
    except UndefinedQualityError:
        return br_partition(g.n_nodes)
    return LabelPartition(tuple(tuple(b) for b in assignment.blocks()))
