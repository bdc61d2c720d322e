"""EMLS: an ensemble of models each trained on its own resampled copy of the data."""
from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class EnsembleModel:
    members: tuple
    thresholds: np.ndarray
    member_origins: tuple = field(default=(), compare=False)

    @property
    def M(self):
        return len(self.members)

    def predict_scores(self, X):
        """Mean of the members' relevance scores."""
        total = None
        for member in self.members:
            s = np.asarray(member.predict_scores(X), dtype=np.float64)
            total = s if total is None else total + s
        return total / len(self.members)

    def predict(self, X):
        """``(scores, bits)`` with bit set where the score exceeds the threshold."""
        scores = self.predict_scores(X)
        return scores, (scores > self.thresholds).astype(np.int8)


def _split_result(result):
    if isinstance(result, tuple):
        return result
    return result, ()


def train_emls(dataset, sampler, learner, M=5, seed=0):
    """Train ``M`` members; member ``i`` sees ``sampler(dataset, seed + i)``.

    ``sampler`` returns a dataset or a ``(dataset, origins)`` pair and
    ``learner`` maps a dataset to a model. Thresholds are tuned once, on the
    averaged scores of the original (not resampled) training instances.
    """
    if int(M) != M or M < 1:
        raise ValueError(f"ensemble size must be >= 1, got {M}")
    members, origins = [], []
    for i in range(M):
        resampled, org = _split_result(sampler(dataset, seed + i))
        members.append(learner(resampled))
        origins.append(org)
    staged = EnsembleModel(tuple(members), np.zeros(dataset.q))
    thresholds = tune_thresholds(staged.predict_scores(dataset.features), dataset.labels)
    return EnsembleModel(tuple(members), thresholds, tuple(origins))


def predict_ensemble(model, x):
    return model.predict(x)


def _f1_counts(tp, predicted, positives):
    denom = predicted + positives
    out = np.zeros(len(tp))
    nz = denom > 0
    out[nz] = 2.0 * tp[nz] / denom[nz]
    return out


def candidate_thresholds(scores):
    """Just below the minimum, midpoints of consecutive distinct scores, and the maximum.

    With the strict ``score > t`` rule the maximum itself predicts nothing,
    so every bipartition by score is represented exactly once.
    """
    distinct = np.unique(np.asarray(scores, dtype=np.float64))
    lo, hi = distinct[:-1], distinct[1:]
    mids = lo + (hi - lo) / 2
    mids = np.where(mids < hi, mids, lo)
    return np.concatenate(([np.nextafter(distinct[0], -np.inf)], mids, [distinct[-1]]))


def best_threshold(scores, truth):
    """Candidate threshold maximising F1 of ``scores > t``; smallest on ties.

    Returns ``(threshold, f1)``. A label without positives gets the top
    candidate so that nothing is predicted.
    """
    scores = np.asarray(scores, dtype=np.float64)
    truth = np.asarray(truth).astype(bool)
    distinct, inverse = np.unique(scores, return_inverse=True)
    m = distinct.size
    # candidate c predicts every instance whose distinct-value rank is >= c
    pos_per_value = np.bincount(inverse, weights=truth, minlength=m)
    all_per_value = np.bincount(inverse, minlength=m)
    tp = np.concatenate((np.cumsum(pos_per_value[::-1])[::-1], [0.0]))
    predicted = np.concatenate((np.cumsum(all_per_value[::-1])[::-1], [0]))
    f1 = _f1_counts(tp, predicted.astype(float), float(truth.sum()))
    # no positives: every candidate scores 0, predict nothing
    best = int(np.argmax(f1)) if f1.max() > 0 else m
    return float(candidate_thresholds(scores)[best]), float(f1[best])


def tune_thresholds(scores, truth):
    """Per-label F1-maximising bipartition thresholds, shape (q,)."""
    scores = np.asarray(scores, dtype=np.float64)
    truth = np.asarray(truth)
    if scores.shape != truth.shape:
        raise ValueError(f"shape mismatch: scores {scores.shape} vs truth {truth.shape}")
    return np.array([best_threshold(scores[:, j], truth[:, j])[0] for j in range(scores.shape[1])])
