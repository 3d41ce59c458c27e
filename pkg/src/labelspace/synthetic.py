"""Seeded synthetic multi-label datasets with correlated label groups."""

from __future__ import annotations

import numpy as np

from .dataset import MultiLabelDataset

__all__ = ["make_multilabel", "emotions_like"]


def make_multilabel(
    n_samples: int = 200,
    n_features: int = 10,
    n_labels: int = 6,
    n_groups: int = 2,
    seed: int = 0,
    name: str = "synthetic",
) -> MultiLabelDataset:
    """Labels come from a few latent topics so that labels in the same group
    co-occur; features are a noisy linear read-out of the label vector."""
    rng = np.random.default_rng(seed)
    n_groups = max(1, min(n_groups, n_labels))
    group_of = np.arange(n_labels) % n_groups
    topic = rng.integers(n_groups, size=n_samples)
    base = rng.uniform(0.05, 0.2, size=n_labels)
    boost = rng.uniform(0.4, 0.7, size=n_labels)
    p = base[None, :] + boost[None, :] * (group_of[None, :] == topic[:, None])
    Y = rng.random((n_samples, n_labels)) < p
    loadings = rng.normal(0.0, 1.5, size=(n_labels, n_features))
    X = Y.astype(float) @ loadings + rng.normal(0.0, 1.0, size=(n_samples, n_features))
    return MultiLabelDataset(
        name=name,
        features=X,
        labels=Y,
        label_names=[f"{name}_l{j}" for j in range(n_labels)],
    )


def emotions_like(seed: int = 0) -> MultiLabelDataset:
    """Stand-in with the shape of the 'emotions' benchmark: 593 x 72, 6 labels."""
    return make_multilabel(
        n_samples=593, n_features=72, n_labels=6, n_groups=2, seed=seed, name="emotions"
    )
