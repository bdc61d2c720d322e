"""MLSMOTE baseline with the Ranking label-generation rule."""
from dataclasses import dataclass

import numpy as np

from .dataset import imbalance_ratios
from .neighbors import build_knn
from .sampler import interpolate


@dataclass(frozen=True)
class MlsmoteConfig:
    k: int = 5
    seed: int = 0

    def __post_init__(self):
        if int(self.k) != self.k or self.k < 1:
            raise ValueError(f"k must be a positive integer, got {self.k}")


def minority_labels(dataset):
    """Labels whose imbalance ratio is strictly above the mean ratio."""
    imr = imbalance_ratios(dataset.labels)
    return [int(j) for j in np.flatnonzero(imr > imr.mean())]


def ranking_labels(labels, seed, neighbor_ids):
    """Label j is set when more than half of the seed and its neighbours carry it."""
    group = np.concatenate(([seed], neighbor_ids))
    votes = labels[group].sum(axis=0)
    return (votes > len(group) / 2).astype(np.int8)


def mlsmote_with_trace(dataset, config):
    """Run MLSMOTE; also return ``(seed, reference)`` for every synthetic row.

    For each minority label (ascending) and each instance carrying it
    (ascending), one synthetic instance is interpolated towards a uniformly
    chosen neighbour. Draw order per instance: reference index, then one gap
    per feature.
    """
    if config.k >= dataset.n:
        raise ValueError(f"k must satisfy k < n (k={config.k}, n={dataset.n})")
    minority = minority_labels(dataset)
    if not minority:
        return dataset, []
    index = build_knn(dataset, config.k)
    rng = np.random.default_rng(config.seed)
    x, y = dataset.features, dataset.labels
    new_x, new_y, origins = [], [], []
    for j in minority:
        for s in np.flatnonzero(y[:, j] == 1):
            s = int(s)
            r = int(index.neighbor_ids[s, rng.integers(config.k)])
            new_x.append(interpolate(x[s], x[r], rng.random(dataset.d)))
            new_y.append(ranking_labels(y, s, index.neighbor_ids[s]))
            origins.append((s, r))
    if not new_x:
        return dataset, []
    return dataset.append(np.array(new_x), np.array(new_y)), origins


def mlsmote(dataset, config):
    return mlsmote_with_trace(dataset, config)[0]

