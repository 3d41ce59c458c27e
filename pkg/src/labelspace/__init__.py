"""Label-space partitioning for multi-label classification with Gaussian Naive Bayes.

Data-driven partitions (community detection on label co-occurrence graphs),
a priori partitions (Binary Relevance, Label Powerset) and random RAkELd
partitions share one ensemble and evaluation pipeline.
"""

from .dataset import MultiLabelDataset, load_arff, split
from .ensemble import EnsembleModel, fit_ensemble, predict_ensemble
from .label_graph import LabelGraph, build_cooccurrence_graph
from .partition import (
    LabelPartition,
    br_partition,
    community_partition,
    lp_partition,
    rakeld_partition,
)

__all__ = [
    "MultiLabelDataset",
    "load_arff",
    "split",
    "LabelGraph",
    "build_cooccurrence_graph",
    "LabelPartition",
    "br_partition",
    "lp_partition",
    "rakeld_partition",
    "community_partition",
    "EnsembleModel",
    "fit_ensemble",
    "predict_ensemble",
]

__version__ = "0.1.0"
