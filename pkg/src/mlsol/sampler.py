"""MLSOL: oversampling driven by the local label distribution.

Each synthetic instance consumes random draws in a fixed order from one
``numpy.random.Generator`` seeded with ``SamplerConfig.seed``:

1. one uniform for the weighted seed choice,
2. one integer in ``[0, k)`` for the reference neighbour,
3. ``d`` uniforms, one per feature, for the interpolation gaps.

The same seed therefore reproduces the same dataset on every platform.
"""
import csv
import math
from dataclasses import dataclass, field

import numpy as np

from .local_stats import InstanceType, compute_opposition, compute_weights, init_types
from .neighbors import build_knn, euclidean

DEFAULT_THETA = {
    InstanceType.SF: 0.5,
    InstanceType.BD: 0.75,
    InstanceType.RR: 1 + 1e-5,
    InstanceType.OT: 0 - 1e-5,
}

FROM_SEED = 0
FROM_REFERENCE = 1


class NoEligibleSeedError(ValueError):
    """Every instance has zero seed weight."""


@dataclass(frozen=True)
class SamplerConfig:
    k: int = 5
    gen_ratio: float = 0.3
    seed: int = 0
    theta_table: dict = field(default_factory=lambda: dict(DEFAULT_THETA))

    def __post_init__(self):
        if int(self.k) != self.k or self.k < 1:
            raise ValueError(f"k must be a positive integer, got {self.k}")
        if not self.gen_ratio > 0 or not math.isfinite(self.gen_ratio):
            raise ValueError(f"gen_ratio must be > 0, got {self.gen_ratio}")
        missing = {InstanceType.SF, InstanceType.BD, InstanceType.RR, InstanceType.OT} - set(self.theta_table)
        if missing:
            raise ValueError(f"theta_table lacks {sorted(t.name for t in missing)}")


@dataclass(frozen=True)
class GenerationContext:
    cd: float
    d_s: float
    d_r: float


@dataclass(frozen=True)
class TraceRecord:
    """Provenance of one synthetic instance.

    ``sources[j]`` is ``FROM_SEED`` or ``FROM_REFERENCE``: the original
    instance whose value of label ``j`` was copied.
    """

    seed: int
    reference: int
    context: GenerationContext
    sources: tuple


def generation_count(n, ratio):
    """``floor(n * ratio)``, robust to representation error (0.29 * 100 -> 29)."""
    return int(math.floor(round(n * ratio, 9)))


def _draw_weighted(cumulative, rng):
    u = rng.random() * cumulative[-1]
    i = int(np.searchsorted(cumulative, u, side="right"))
    if i >= cumulative.size:
        # u rounded up to the total; fall back to the last index with weight
        i = int(np.flatnonzero(np.diff(cumulative, prepend=0.0) > 0)[-1])
    return i


def _cumulative_weights(w):
    w = np.asarray(w, dtype=np.float64)
    if np.any(w < 0) or not np.all(np.isfinite(w)):
        raise ValueError("weights must be finite and nonnegative")
    if not w.sum() > 0:
        raise NoEligibleSeedError("no eligible seed instances")
    return np.cumsum(w)


def select_seed(w, rng):
    """Index drawn with probability proportional to ``w`` (one uniform draw)."""
    return _draw_weighted(_cumulative_weights(w), rng)


def interpolate(seed_x, ref_x, gaps):
    """``seed_x + gaps * (ref_x - seed_x)`` feature by feature."""
    seed_x = np.asarray(seed_x, dtype=np.float64)
    ref_x = np.asarray(ref_x, dtype=np.float64)
    return seed_x + np.asarray(gaps) * (ref_x - seed_x)


def closeness(x_c, seed_x, ref_x):
    """Relative distance of the synthetic point from the seed.

    0 at the seed, 1 at the reference; 0.5 when seed and reference coincide.
    """
    d_s = euclidean(x_c, seed_x)
    d_r = euclidean(x_c, ref_x)
    total = d_s + d_r
    cd = d_s / total if total > 0 else 0.5
    return GenerationContext(cd, d_s, d_r)


def assign_labels(seed_y, seed_types, ref_y, ref_types, cd, theta_table=None):
    """Label vector of a synthetic instance located at closeness ``cd``.

    Agreeing labels are copied. For a disagreeing label the instance holding
    the minority value acts as the anchor (the seed, or the reference with
    ``cd`` mirrored to ``1 - cd`` for that label only); its type selects the
    cut ``theta``, and the anchor's value is taken when the distance to the
    anchor ``<= theta``.

    Returns ``(labels, sources)``.
    """
    theta_table = DEFAULT_THETA if theta_table is None else theta_table
    q = len(seed_y)
    labels = np.empty(q, dtype=np.int8)
    sources = np.empty(q, dtype=np.int8)
    for j in range(q):
        if seed_y[j] == ref_y[j]:
            labels[j] = seed_y[j]
            sources[j] = FROM_SEED
            continue
        if seed_types[j] == InstanceType.MJ:
            anchor, other, anchor_type, dist = FROM_REFERENCE, FROM_SEED, ref_types[j], 1.0 - cd
        else:
            anchor, other, anchor_type, dist = FROM_SEED, FROM_REFERENCE, seed_types[j], cd
        theta = theta_table[InstanceType(anchor_type)]
        src = anchor if dist <= theta else other
        sources[j] = src
        labels[j] = seed_y[j] if src == FROM_SEED else ref_y[j]
    return labels, sources


def generate_instance(seed_x, seed_y, seed_types, ref_x, ref_y, ref_types, config, rng):
    """Synthesize one instance between a seed and its reference.

    Draws ``len(seed_x)`` uniforms from ``rng``. Returns
    ``(features, labels, context, sources)``.
    """
    gaps = rng.random(len(seed_x))
    x_c = interpolate(seed_x, ref_x, gaps)
    ctx = closeness(x_c, seed_x, ref_x)
    labels, sources = assign_labels(seed_y, seed_types, ref_y, ref_types, ctx.cd, config.theta_table)
    return x_c, labels, ctx, sources


@dataclass(frozen=True)
class LocalState:
    """Neighbourhood statistics computed once per resampling run."""

    index: object
    opposition: object
    weights: np.ndarray
    types: np.ndarray


def local_state(dataset, k):
    index = build_knn(dataset, k)
    C = compute_opposition(dataset, index)
    return LocalState(index, C, compute_weights(C, dataset), init_types(C, dataset, index))


def mlsol_with_trace(dataset, config):
    """Run MLSOL, returning the augmented dataset and one trace record per
    synthetic instance."""
    n = dataset.n
    if config.k >= n:
        raise ValueError(f"k must satisfy k < n (k={config.k}, n={n})")
    count = generation_count(n, config.gen_ratio)
    if count == 0:
        return dataset, []
    state = local_state(dataset, config.k)
    cumulative = _cumulative_weights(state.weights)
    rng = np.random.default_rng(config.seed)
    x, y, types = dataset.features, dataset.labels, state.types
    new_x = np.empty((count, dataset.d))
    new_y = np.empty((count, dataset.q), dtype=np.int8)
    trace = []
    for c in range(count):
        s = _draw_weighted(cumulative, rng)
        r = int(state.index.neighbor_ids[s, rng.integers(config.k)])
        new_x[c], new_y[c], ctx, sources = generate_instance(
            x[s], y[s], types[s], x[r], y[r], types[r], config, rng)
        trace.append(TraceRecord(s, r, ctx, tuple(int(v) for v in sources)))
    return dataset.append(new_x, new_y), trace


def mlsol(dataset, config):
    """Original instances followed by ``floor(n * gen_ratio)`` synthetic ones."""
    return mlsol_with_trace(dataset, config)[0]


def resample_trace(dataset, config):
    return mlsol_with_trace(dataset, config)[1]


def replay_labels(dataset, trace):
    """Rebuild the synthetic label matrix from trace records."""
    out = np.empty((len(trace), dataset.q), dtype=np.int8)
    for c, rec in enumerate(trace):
        src = np.asarray(rec.sources)
        out[c] = np.where(src == FROM_SEED, dataset.labels[rec.seed], dataset.labels[rec.reference])
    return out


def write_trace_csv(path, trace, label_names):
    """One row per synthetic instance; label columns hold ``s`` or ``r``."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["synthetic", "seed", "reference", "cd", "d_s", "d_r", *label_names])
        for c, rec in enumerate(trace):
            w.writerow([c, rec.seed, rec.reference, repr(rec.context.cd), repr(rec.context.d_s),
                        repr(rec.context.d_r), *("s" if v == FROM_SEED else "r" for v in rec.sources)])
