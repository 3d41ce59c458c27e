"""Gaussian Naive Bayes base learner."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError

__all__ = ["GnbModel", "fit", "predict_log_joint", "predict", "VAR_SMOOTHING"]

VAR_SMOOTHING = 1e-9


@dataclass(frozen=True)
class GnbModel:
    """Fitted per-class Gaussian parameters.

    ``class_ids`` is sorted ascending; row ``c`` of ``means``/``variances``
    and entry ``c`` of ``log_priors`` belong to ``class_ids[c]``.
    """

    class_ids: np.ndarray
    log_priors: np.ndarray
    means: np.ndarray
    variances: np.ndarray

    @property
    def n_features(self) -> int:
        return self.means.shape[1]


def fit(X, y) -> GnbModel:
    """Fit class priors, means and smoothed biased variances."""
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X.reshape(-1, 1)
    y = np.asarray(y)
    if X.shape[0] < 1 or y.shape[0] != X.shape[0]:
        raise ValueError("X and y must be non-empty with matching row counts")
    if not np.all(np.isfinite(X)):
        raise ValidationError("non-finite feature value")

    classes, inverse, counts = np.unique(y, return_inverse=True, return_counts=True)
    n, d = X.shape
    max_var = float(np.var(X, axis=0).max()) if d else 0.0
    epsilon = VAR_SMOOTHING * max_var if max_var > 0 else VAR_SMOOTHING

    means = np.zeros((len(classes), d))
    variances = np.zeros((len(classes), d))
    for c in range(len(classes)):
        Xc = X[inverse == c]
        means[c] = Xc.mean(axis=0)
        variances[c] = ((Xc - means[c]) ** 2).mean(axis=0)
    variances += epsilon
    log_priors = np.log(counts / n)
    for arr in (classes, log_priors, means, variances):
        arr.setflags(write=False)
    return GnbModel(classes, log_priors, means, variances)


def predict_log_joint(model: GnbModel, X) -> np.ndarray:
    """Unnormalised log p(c) + sum_j log N(x_j | mean_cj, var_cj).

    Accepts one vector (returns shape ``(n_classes,)``) or a matrix
    (returns ``(n_rows, n_classes)``).
    """
    X = np.asarray(X, dtype=float)
    single = X.ndim == 1
    X2 = X.reshape(1, -1) if single else X
    if X2.shape[1] != model.n_features:
        raise ValueError(
            f"expected {model.n_features} features, got {X2.shape[1]}"
        )
    norm = -0.5 * np.log(2.0 * np.pi * model.variances).sum(axis=1)
    diff = X2[:, None, :] - model.means[None, :, :]
    quad = -0.5 * (diff ** 2 / model.variances[None, :, :]).sum(axis=2)
    jll = model.log_priors[None, :] + norm[None, :] + quad
    return jll[0] if single else jll


def predict(model: GnbModel, X):
    """Most probable class id; ties go to the lowest class id."""
    jll = predict_log_joint(model, X)
    # argmax returns the first maximum and class_ids are sorted ascending
    idx = np.argmax(jll, axis=-1)
    return model.class_ids[idx]
