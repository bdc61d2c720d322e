"""Local label distribution around each instance.

* opposition matrix: share of an instance's k neighbours holding the other
  value of a label;
* seed weights: per-label normalised difficulty of the minority cells;
* type matrix: safe / borderline / rare / outlier for minority cells,
  majority otherwise.
"""
from dataclasses import dataclass
from enum import IntEnum

import numpy as np

from .dataset import minority_values


class InstanceType(IntEnum):
    SF = 0  # safe
    BD = 1  # borderline
    RR = 2  # rare
    OT = 3  # outlier
    MJ = 4  # majority class cell


SAFE_LIMIT = 0.3
BORDERLINE_LIMIT = 0.7


@dataclass(frozen=True)
class OppositionMatrix:
    """``values[i, j]`` = ``counts[i, j] / k``."""

    counts: np.ndarray
    k: int

    @property
    def values(self):
        return self.counts / self.k


def compute_opposition(dataset, index):
    """Fraction of each instance's neighbours whose value of each label differs."""
    y = dataset.labels
    if index.neighbor_ids.shape[0] != y.shape[0]:
        raise ValueError("neighbour index was built over a different number of instances")
    differs = y[index.neighbor_ids] != y[:, None, :]  # (n, k, q)
    counts = differs.sum(axis=1).astype(np.int64)
    counts.setflags(write=False)
    return OppositionMatrix(counts, index.k)


def _minority_mask(dataset):
    return dataset.labels == minority_values(dataset.labels)[None, :]


def naive_weights(C, dataset):
    """Sum of opposition values over the instance's minority cells (outliers kept)."""
    return (C.values * _minority_mask(dataset)).sum(axis=1)


def weight_contributions(C, dataset):
    """Per-cell terms of the normalised weights, shape (n, q).

    Minority cells that are not outliers keep their opposition value, divided
    by the column total of such values. Columns whose total is zero contribute
    nothing.
    """
    values = C.values
    raw = values * (_minority_mask(dataset) & (C.counts < C.k))
    totals = raw.sum(axis=0)
    out = np.zeros_like(raw)
    nz = totals > 0
    out[:, nz] = raw[:, nz] / totals[nz]
    return out


def compute_weights(C, dataset):
    """Seed-selection weight of every instance."""
    return weight_contributions(C, dataset).sum(axis=1)


def provisional_types(C, dataset):
    """Types from the opposition values alone, before rare cells are re-examined."""
    values = C.values
    types = np.full(values.shape, InstanceType.MJ, dtype=np.int8)
    minority = _minority_mask(dataset)
    types[minority & (values < SAFE_LIMIT)] = InstanceType.SF
    types[minority & (values >= SAFE_LIMIT) & (values < BORDERLINE_LIMIT)] = InstanceType.BD
    types[minority & (values >= BORDERLINE_LIMIT) & (C.counts < C.k)] = InstanceType.RR
    types[minority & (C.counts == C.k)] = InstanceType.OT
    return types


def reexamine_rare(types, index):
    """One synchronous pass: rare cells with a safe or borderline neighbour on
    the same label become borderline.

    Returns the new type matrix and the number of cells changed.
    """
    supportive = (types == InstanceType.SF) | (types == InstanceType.BD)
    has_support = supportive[index.neighbor_ids].any(axis=1)  # (n, q)
    promote = (types == InstanceType.RR) & has_support
    if not promote.any():
        return types, 0
    out = types.copy()
    out[promote] = InstanceType.BD
    return out, int(promote.sum())


def init_types(C, dataset, index):
    """Type matrix after repeating the rare-cell re-examination to a fixed point."""
    types = provisional_types(C, dataset)
    limit = types.size + 1
    for _ in range(limit):
        types, changed = reexamine_rare(types, index)
        if not changed:
            break
    types.setflags(write=False)
    return types


def type_histogram(types):
    """Counts of each type per label, shape (q, 5) ordered as :class:`InstanceType`."""
    types = np.asarray(types)
    return np.stack([(types == t).sum(axis=0) for t in InstanceType], axis=1)
