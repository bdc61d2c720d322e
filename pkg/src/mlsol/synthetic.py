"""Small 2-D multi-label problems with sub-concepts and class overlap."""
import numpy as np

from .dataset import MultiLabelDataset

# One main concept and two small sub-concepts per label: (cx, cy, radius).
_CONCEPTS = (
    ((0.30, 0.35, 0.17), (0.80, 0.80, 0.06), (0.15, 0.85, 0.05)),
    ((0.45, 0.50, 0.16), (0.85, 0.25, 0.06), (0.60, 0.90, 0.05)),
    ((0.65, 0.40, 0.15), (0.20, 0.10, 0.06), (0.90, 0.55, 0.05)),
)


def positive_probability(x, discs, peak=0.8, band=0.2, noise=0.005):
    """P(label | x): ``peak`` well inside a disc, falling linearly to 0 across
    a band of relative width ``2 * band`` around the rim, ``noise`` elsewhere."""
    p = np.zeros(len(x))
    for cx, cy, r in discs:
        rel = np.hypot(x[:, 0] - cx, x[:, 1] - cy) / r
        if band > 0:
            p = np.maximum(p, peak * np.clip((1 + band - rel) / (2 * band), 0.0, 1.0))
        else:
            p = np.maximum(p, np.where(rel <= 1, peak, 0.0))
    return np.maximum(p, noise)


def make_concept_dataset(n=600, seed=0, peak=0.8, band=0.2, noise=0.005, min_imbalance=4.0):
    """Uniform points in the unit square, labelled by overlapping discs.

    Each label has one main disc and two small sub-concept discs. Classes
    overlap inside the discs (``peak`` < 1), across their rims and through
    sparse label noise. Main discs of different labels intersect, so labels
    co-occur. If a label's majority/minority ratio falls below
    ``min_imbalance``, random positives are cleared until it is reached.
    """
    rng = np.random.default_rng(seed)
    x = rng.random((n, 2))
    y = np.zeros((n, len(_CONCEPTS)), dtype=np.int8)
    max_pos = int(np.floor(n / (1.0 + min_imbalance)))
    for j, discs in enumerate(_CONCEPTS):
        y[:, j] = rng.random(n) < positive_probability(x, discs, peak, band, noise)
        pos = np.flatnonzero(y[:, j])
        if pos.size > max_pos:
            y[rng.choice(pos, pos.size - max_pos, replace=False), j] = 0
    return MultiLabelDataset(x, y, ["x1", "x2"], [f"label{j}" for j in range(len(_CONCEPTS))])
