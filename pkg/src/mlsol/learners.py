"""Binary-relevance kNN scorer.

Any object with ``predict_scores(X) -> (m, q) array`` can stand in for
:class:`RelevanceModel`; training procedures are plain callables
``dataset -> model``.
"""
from dataclasses import dataclass
from functools import partial

import numpy as np

from .neighbors import knn_query

DEFAULT_THRESHOLD = 0.5


@dataclass(frozen=True)
class RelevanceModel:
    """Lazy learner: scores are neighbour label frequencies."""

    dataset: object
    k: int

    def predict_scores(self, X):
        """Per-label share of the k nearest training instances carrying the label.

        ``X`` may be a single vector (returns shape (q,)) or a matrix.
        """
        X = np.asarray(X, dtype=np.float64)
        single = X.ndim == 1
        ids, _ = knn_query(self.dataset, X.reshape(1, -1) if single else X, self.k)
        scores = self.dataset.labels[ids].sum(axis=1) / self.k
        return scores[0] if single else scores

    def predict(self, X, thresholds=None):
        scores = self.predict_scores(X)
        t = DEFAULT_THRESHOLD if thresholds is None else np.asarray(thresholds)
        return (scores > t).astype(np.int8)


def train_br_knn(dataset, k=5):
    if dataset is None or dataset.n == 0:
        raise ValueError("empty training set")
    if int(k) != k or k < 1:
        raise ValueError(f"k must be a positive integer, got {k}")
    if k > dataset.n:
        raise ValueError(f"k ({k}) exceeds training set size ({dataset.n})")
    return RelevanceModel(dataset, int(k))


def br_knn(k=5):
    """Training callable for :func:`train_br_knn` with fixed ``k``."""
    return partial(train_br_knn, k=k)


def predict_scores(model, x):
    return model.predict_scores(x)


def predict_bipartition(model, x, thresholds):
    """1 where the relevance score is strictly above the label's threshold."""
    return (np.asarray(model.predict_scores(x)) > np.asarray(thresholds)).astype(np.int8)
