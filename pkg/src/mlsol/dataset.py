"""Multi-label dataset container, loaders, filtering and fold assignment."""
import csv
import math
import os
import xml.etree.ElementTree as ET
from dataclasses import dataclass

import numpy as np

from .arff import ArffError, format_float, read_arff, write_arff, write_label_xml


class DatasetError(ValueError):
    """Invalid dataset content or file."""


@dataclass(frozen=True)
class MultiLabelDataset:
    """Dense feature matrix with a binary label matrix.

    Parameters
    ----------
    features : array-like of shape (n, d)
        Finite real values.
    labels : array-like of shape (n, q)
        Entries in {0, 1}.
    feature_names, label_names : sequence of str, optional
        Default to ``x0..`` and ``y0..``.

    Arrays are copied and made read-only so instances can be shared freely.
    """

    features: np.ndarray
    labels: np.ndarray
    feature_names: tuple = None
    label_names: tuple = None

    def __post_init__(self):
        x = np.array(self.features, dtype=np.float64)
        y = np.asarray(self.labels)
        if x.ndim != 2:
            raise DatasetError(f"features must be 2-D, got shape {x.shape}")
        if y.ndim != 2:
            raise DatasetError(f"labels must be 2-D, got shape {y.shape}")
        if x.shape[0] == 0:
            raise DatasetError("empty dataset")
        if x.shape[0] != y.shape[0]:
            raise DatasetError(f"row count mismatch: {x.shape[0]} feature rows vs {y.shape[0]} label rows")
        if not np.all(np.isfinite(x)):
            raise DatasetError("features contain non-finite values")
        if y.size and not np.all((y == 0) | (y == 1)):
            raise DatasetError("labels must be 0 or 1")
        y = y.astype(np.int8)
        fnames = tuple(self.feature_names) if self.feature_names is not None else tuple(f"x{i}" for i in range(x.shape[1]))
        lnames = tuple(self.label_names) if self.label_names is not None else tuple(f"y{j}" for j in range(y.shape[1]))
        if len(fnames) != x.shape[1]:
            raise DatasetError(f"{len(fnames)} feature names for {x.shape[1]} columns")
        if len(lnames) != y.shape[1]:
            raise DatasetError(f"{len(lnames)} label names for {y.shape[1]} columns")
        x.setflags(write=False)
        y.setflags(write=False)
        object.__setattr__(self, "features", x)
        object.__setattr__(self, "labels", y)
        object.__setattr__(self, "feature_names", fnames)
        object.__setattr__(self, "label_names", lnames)

    @property
    def n(self):
        return self.features.shape[0]

    @property
    def d(self):
        return self.features.shape[1]

    @property
    def q(self):
        return self.labels.shape[1]

    def __len__(self):
        return self.n

    def subset(self, indices):
        """Rows ``indices`` as a new dataset (names preserved)."""
        indices = np.asarray(indices, dtype=np.intp)
        return MultiLabelDataset(self.features[indices], self.labels[indices],
                                 self.feature_names, self.label_names)

    def append(self, features, labels):
        """New dataset with extra rows appended after the existing ones."""
        features = np.asarray(features, dtype=np.float64).reshape(-1, self.d)
        labels = np.asarray(labels).reshape(-1, self.q)
        return MultiLabelDataset(np.vstack([self.features, features]),
                                 np.vstack([self.labels, labels]),
                                 self.feature_names, self.label_names)

    def equals(self, other):
        return (self.feature_names == other.feature_names
                and self.label_names == other.label_names
                and np.array_equal(self.features, other.features)
                and np.array_equal(self.labels, other.labels))


# --------------------------------------------------------------------- loading

def _require_file(path):
    if not os.path.isfile(path):
        raise DatasetError(f"no such file: {path}")


def read_label_names(xml_path):
    """Label names declared in a Mulan XML file, in document order."""
    _require_file(xml_path)
    try:
        root = ET.parse(xml_path).getroot()
    except ET.ParseError as exc:
        raise DatasetError(f"{xml_path}: invalid XML ({exc})") from None
    names = [el.get("name") for el in root.iter() if el.tag.rsplit("}", 1)[-1] == "label"]
    if any(name is None for name in names):
        raise DatasetError(f"{xml_path}: <label> element without a name attribute")
    if not names:
        raise DatasetError(f"{xml_path}: no labels declared")
    return names


def _parse_bit(value, where):
    try:
        v = float(value)
    except (TypeError, ValueError):
        v = None
    if v not in (0.0, 1.0):
        raise DatasetError(f"{where}: non-binary label value {value!r}")
    return int(v)


def load_mulan(arff_path, xml_path):
    """Load a Mulan dataset: an ARFF file plus an XML naming the label attributes.

    Label attributes must take values in {0, 1}. Every other attribute is a
    feature and must be numeric (nominal attributes whose categories are all
    numbers, e.g. ``{1,2,3}``, are read as numbers).
    """
    _require_file(arff_path)
    label_names = read_label_names(xml_path)
    try:
        arff = read_arff(arff_path)
    except ArffError as exc:
        raise DatasetError(f"{arff_path}: {exc}") from None
    by_name = {a.name: i for i, a in enumerate(arff.attributes)}
    for name in label_names:
        if name not in by_name:
            raise DatasetError(f"{arff_path}: label attribute {name!r} not found in header")
    label_cols = [by_name[name] for name in label_names]
    label_set = set(label_cols)
    feature_cols = [i for i in range(len(arff.attributes)) if i not in label_set]

    for i in label_cols:
        attr = arff.attributes[i]
        if attr.kind == "nominal" and not set(attr.values) <= {"0", "1"}:
            raise DatasetError(f"{arff_path}: line {attr.line}: label attribute {attr.name!r} "
                               f"declares non-binary values {attr.values}")
    for i in feature_cols:
        attr = arff.attributes[i]
        if attr.kind == "nominal":
            for v in attr.values:
                try:
                    float(v)
                except ValueError:
                    raise DatasetError(f"{arff_path}: line {attr.line}: feature attribute "
                                       f"{attr.name!r} is non-numeric") from None

    if not arff.rows:
        raise DatasetError(f"{arff_path}: empty dataset")
    x = np.empty((len(arff.rows), len(feature_cols)))
    y = np.empty((len(arff.rows), len(label_cols)), dtype=np.int8)
    for r, (line_no, cells) in enumerate(arff.rows):
        for c, i in enumerate(feature_cols):
            cell = cells[i]
            name = arff.attributes[i].name
            if cell is None:
                raise DatasetError(f"{arff_path}: line {line_no}: missing value for attribute {name!r}")
            try:
                x[r, c] = float(cell)
            except ValueError:
                raise DatasetError(f"{arff_path}: line {line_no}: non-numeric value {cell!r} "
                                   f"for attribute {name!r}") from None
            if not math.isfinite(x[r, c]):
                raise DatasetError(f"{arff_path}: line {line_no}: non-finite value for attribute {name!r}")
        for c, i in enumerate(label_cols):
            y[r, c] = _parse_bit(cells[i], f"{arff_path}: line {line_no}: attribute "
                                           f"{arff.attributes[i].name!r}")
    return MultiLabelDataset(x, y, [arff.attributes[i].name for i in feature_cols], label_names)


def _read_csv(path):
    _require_file(path)
    with open(path, encoding="utf-8", newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise DatasetError(f"{path}: missing header row")
    header, body = rows[0], [r for r in rows[1:] if r]
    for line_no, row in enumerate(body, start=2):
        if len(row) != len(header):
            raise DatasetError(f"{path}: line {line_no}: expected {len(header)} fields, found {len(row)}")
    return header, body


def load_csv(features_path, labels_path):
    """Load features and labels from two CSV files with header rows."""
    fnames, frows = _read_csv(features_path)
    lnames, lrows = _read_csv(labels_path)
    if len(frows) != len(lrows):
        raise DatasetError(f"row count mismatch: {len(frows)} feature rows vs {len(lrows)} label rows")
    if not frows:
        raise DatasetError("empty dataset")
    x = np.empty((len(frows), len(fnames)))
    for r, row in enumerate(frows):
        for c, cell in enumerate(row):
            try:
                value = float(cell)
            except ValueError:
                raise DatasetError(f"{features_path}: line {r + 2}: non-numeric value {cell!r} "
                                   f"in column {fnames[c]!r}") from None
            if not math.isfinite(value):
                raise DatasetError(f"{features_path}: line {r + 2}: non-finite value {cell!r} "
                                   f"in column {fnames[c]!r}")
            x[r, c] = value
    y = np.empty((len(lrows), len(lnames)), dtype=np.int8)
    for r, row in enumerate(lrows):
        for c, cell in enumerate(row):
            y[r, c] = _parse_bit(cell, f"{labels_path}: line {r + 2}: column {lnames[c]!r}")
    return MultiLabelDataset(x, y, fnames, lnames)


def write_csv(dataset, features_path, labels_path):
    """Write ``dataset`` as two CSV files; floats use shortest round-trip repr."""
    with open(features_path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(dataset.feature_names)
        for row in dataset.features:
            w.writerow([format_float(v) for v in row])
    with open(labels_path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(dataset.label_names)
        for row in dataset.labels:
            w.writerow([int(v) for v in row])


def write_mulan(dataset, arff_path, xml_path, relation="dataset"):
    write_arff(arff_path, relation, dataset.feature_names, dataset.features,
               dataset.label_names, dataset.labels)
    write_label_xml(xml_path, dataset.label_names)


def load_dataset(first, second):
    """Dispatch on extension: ``.arff`` + ``.xml`` or two CSV files."""
    if str(first).lower().endswith(".arff"):
        return load_mulan(first, second)
    return load_csv(first, second)


# ----------------------------------------------------------------- statistics

def minority_values(labels):
    """Per-column minority bit of a label matrix; exact ties resolve to 1."""
    labels = np.asarray(labels)
    ones = labels.sum(axis=0)
    zeros = labels.shape[0] - ones
    return np.where(ones <= zeros, 1, 0).astype(np.int8)


def minority_class(dataset, j):
    """Less frequent value of label ``j`` (1 on an exact tie)."""
    column = dataset.labels[:, j]
    ones = int(column.sum())
    return 1 if ones <= len(column) - ones else 0


def minority_counts(labels):
    labels = np.asarray(labels)
    ones = labels.sum(axis=0)
    return np.minimum(ones, labels.shape[0] - ones)


def filter_rare_labels(dataset):
    """Drop labels with at most one minority-class instance."""
    keep = np.flatnonzero(minority_counts(dataset.labels) > 1)
    if keep.size == 0:
        raise DatasetError("no usable labels")
    if keep.size == dataset.q:
        return dataset
    return MultiLabelDataset(dataset.features, dataset.labels[:, keep], dataset.feature_names,
                             [dataset.label_names[j] for j in keep])


@dataclass(frozen=True)
class DatasetStats:
    cardinality: float
    mean_imbalance_ratio: float
    per_label_imr: tuple


def imbalance_ratios(labels):
    """Majority count over minority count, per label (inf when a class is absent)."""
    labels = np.asarray(labels)
    ones = labels.sum(axis=0).astype(float)
    zeros = labels.shape[0] - ones
    with np.errstate(divide="ignore"):
        return np.maximum(ones, zeros) / np.minimum(ones, zeros)


def dataset_stats(dataset):
    imr = imbalance_ratios(dataset.labels)
    return DatasetStats(
        cardinality=float(dataset.labels.sum(axis=1).mean()),
        mean_imbalance_ratio=float(imr.mean()),
        per_label_imr=tuple(float(v) for v in imr),
    )


# ------------------------------------------------------------ stratification

@dataclass(frozen=True)
class FoldAssignment:
    fold_of_instance: np.ndarray
    repeat_index: int

    @property
    def folds(self):
        return int(self.fold_of_instance.max()) + 1

    def test_indices(self, fold):
        return np.flatnonzero(self.fold_of_instance == fold)

    def train_indices(self, fold):
        return np.flatnonzero(self.fold_of_instance != fold)


def _pick(candidates, rng):
    if len(candidates) == 1:
        return int(candidates[0])
    return int(candidates[rng.integers(len(candidates))])


def iterative_stratification(labels, folds, rng):
    """Assign each row of ``labels`` to one of ``folds`` folds.

    Labels are processed scarcest first (fewest unassigned positives, lowest
    index on ties). Each of its unassigned positive rows, visited in a
    random order, goes to the fold that still wants the most positives of that
    label; ties go to the fold with the most remaining capacity, then to a
    random draw. Rows without any positive label fill the folds with the most
    remaining capacity.
    """
    labels = np.asarray(labels, dtype=bool)
    n, q = labels.shape
    capacity = np.full(folds, n / folds)
    wanted = np.outer(labels.sum(axis=0), np.full(folds, 1.0 / folds))  # (q, folds)
    fold_of = np.full(n, -1, dtype=np.int64)
    order = rng.permutation(n)
    remaining = labels.sum(axis=0).astype(np.int64)

    while True:
        active = np.flatnonzero(remaining > 0)
        if active.size == 0:
            break
        label = int(active[np.argmin(remaining[active])])
        for i in order:
            if fold_of[i] >= 0 or not labels[i, label]:
                continue
            desire = wanted[label]
            best = np.flatnonzero(desire == desire.max())
            if best.size > 1:
                room = capacity[best]
                best = best[room == room.max()]
            f = _pick(best, rng)
            fold_of[i] = f
            capacity[f] -= 1
            wanted[labels[i], f] -= 1
            remaining[labels[i]] -= 1

    for i in order:
        if fold_of[i] >= 0:
            continue
        best = np.flatnonzero(capacity == capacity.max())
        f = _pick(best, rng)
        fold_of[i] = f
        capacity[f] -= 1
    return fold_of


def stratified_folds(dataset, folds, repeats=1, seed=0):
    """Iteratively stratified fold assignments, one per repeat.

    Repeat ``r`` draws from ``numpy.random.default_rng([seed, r])``, so results
    depend only on ``(seed, r)``.
    """
    if folds < 2:
        raise DatasetError(f"folds must be >= 2, got {folds}")
    if folds > dataset.n:
        raise DatasetError(f"folds ({folds}) exceeds number of instances ({dataset.n})")
    if repeats < 1:
        raise DatasetError(f"repeats must be >= 1, got {repeats}")
    out = []
    for r in range(repeats):
        rng = np.random.default_rng([seed, r])
        fold_of = iterative_stratification(dataset.labels, folds, rng)
        fold_of.setflags(write=False)
        out.append(FoldAssignment(fold_of, r))
    return out
