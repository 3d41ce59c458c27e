"""Partition-based ensembles of label-powerset Gaussian NB classifiers."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import gaussian_nb
from .partition import LabelPartition

__all__ = ["BlockModel", "EnsembleModel", "fit_ensemble", "predict_ensemble"]


@dataclass(frozen=True)
class BlockModel:
    """GNB over one block's observed label combinations.

    ``decoding[c]`` is the boolean assignment of the block's labels for
    class id ``c``.
    """

    labels: tuple[int, ...]
    model: gaussian_nb.GnbModel
    decoding: np.ndarray


@dataclass(frozen=True)
class EnsembleModel:
    partition: LabelPartition
    block_models: tuple[BlockModel, ...]
    n_labels: int
    n_features: int


def _fit_block(X, Y, block) -> BlockModel:
    combos, classes = np.unique(Y[:, list(block)], axis=0, return_inverse=True)
    model = gaussian_nb.fit(X, classes.reshape(-1))
    decoding = combos.astype(bool)
    decoding.setflags(write=False)
    return BlockModel(tuple(block), model, decoding)


def fit_ensemble(train, partition: LabelPartition) -> EnsembleModel:
    """Label-powerset transform per block, one GNB per block on all features."""
    X, Y = train.features, train.labels
    if partition.n_labels != Y.shape[1]:
        raise ValueError(
            f"partition covers {partition.n_labels} labels, dataset has {Y.shape[1]}"
        )
    blocks = tuple(_fit_block(X, Y, b) for b in partition.blocks)
    return EnsembleModel(partition, blocks, Y.shape[1], X.shape[1])


def predict_ensemble(model: EnsembleModel, X) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[1] != model.n_features:
        raise ValueError(
            f"expected a matrix with {model.n_features} feature columns, got shape {X.shape}"
        )
    out = np.zeros((X.shape[0], model.n_labels), dtype=bool)
    for bm in model.block_models:
        cls = gaussian_nb.predict(bm.model, X)
        out[:, list(bm.labels)] = bm.decoding[cls]
    return out
