"""Macro-averaged F-measure, AUC-ROC and AUCPR.

Labels whose ground truth holds a single class have no defined AUC; they are
left out of the AUC macro averages (but not of macro-F) and listed in
``MetricsReport.skipped_labels``.
"""
import csv
import json
from dataclasses import dataclass

import numpy as np
from scipy.stats import rankdata


def f1(pred, truth):
    """2TP / (2TP + FP + FN), or 0 when nothing is predicted or true."""
    pred = np.asarray(pred).astype(bool)
    truth = np.asarray(truth).astype(bool)
    if pred.shape != truth.shape:
        raise ValueError(f"length mismatch: {pred.shape} vs {truth.shape}")
    tp = np.sum(pred & truth)
    denom = pred.sum() + truth.sum()
    return float(2 * tp / denom) if denom else 0.0


def _single_class(truth):
    p = truth.sum()
    return p == 0 or p == truth.size


def auc_roc(scores, truth):
    """Probability that a random positive outscores a random negative
    (ties count one half). ``None`` for single-class truth."""
    scores = np.asarray(scores, dtype=np.float64)
    truth = np.asarray(truth).astype(bool)
    if scores.shape != truth.shape:
        raise ValueError(f"length mismatch: {scores.shape} vs {truth.shape}")
    if _single_class(truth):
        return None
    ranks = rankdata(scores)
    p = truth.sum()
    neg = truth.size - p
    return float((ranks[truth].sum() - p * (p + 1) / 2) / (p * neg))


def auc_pr(scores, truth):
    """Step-wise area under the precision-recall curve (average precision).

    Thresholds sweep the distinct scores from high to low; each recall
    increment is weighted by the precision reached at that threshold.
    ``None`` for single-class truth.
    """
    scores = np.asarray(scores, dtype=np.float64)
    truth = np.asarray(truth).astype(bool)
    if scores.shape != truth.shape:
        raise ValueError(f"length mismatch: {scores.shape} vs {truth.shape}")
    if _single_class(truth):
        return None
    order = np.argsort(-scores, kind="stable")
    s, t = scores[order], truth[order]
    tps = np.cumsum(t)
    fps = np.cumsum(~t)
    last = np.r_[np.flatnonzero(np.diff(s) != 0), s.size - 1]
    tp, fp = tps[last], fps[last]
    precision = tp / (tp + fp)
    recall = tp / t.sum()
    return float(np.sum(np.diff(np.r_[0.0, recall]) * precision))


@dataclass(frozen=True)
class MetricsReport:
    macro_f: float
    macro_auc_roc: float
    macro_aucpr: float
    per_label: tuple  # (f1, auc_roc | None, auc_pr | None) per label
    skipped_labels: tuple

    def to_dict(self, label_names=None):
        names = label_names or [f"y{j}" for j in range(len(self.per_label))]
        return {
            "macro_f": self.macro_f,
            "macro_auc_roc": self.macro_auc_roc,
            "macro_aucpr": self.macro_aucpr,
            "skipped_labels": list(self.skipped_labels),
            "per_label": [{"label": name, "f": f, "auc_roc": roc, "aucpr": pr}
                          for name, (f, roc, pr) in zip(names, self.per_label)],
        }

    def write_json(self, path, label_names=None):
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_dict(label_names), fh, indent=2)
            fh.write("\n")

    def write_csv(self, path, label_names=None):
        names = label_names or [f"y{j}" for j in range(len(self.per_label))]
        with open(path, "w", encoding="utf-8", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["label", "f", "auc_roc", "aucpr"])
            for name, row in zip(names, self.per_label):
                w.writerow([name, *("" if v is None else repr(v) for v in row)])
            w.writerow(["macro", *("" if v is None else repr(v)
                                   for v in (self.macro_f, self.macro_auc_roc, self.macro_aucpr))])


def _mean_or_none(values):
    values = [v for v in values if v is not None]
    return float(np.mean(values)) if values else None


def evaluate(scores, preds, truth):
    """Per-label and macro-averaged metrics for (n, q) score, prediction and truth matrices."""
    scores = np.asarray(scores, dtype=np.float64)
    preds = np.asarray(preds)
    truth = np.asarray(truth)
    if not scores.shape == preds.shape == truth.shape:
        raise ValueError(f"shape mismatch: {scores.shape}, {preds.shape}, {truth.shape}")
    if scores.ndim != 2 or scores.shape[1] == 0:
        raise ValueError("need at least one label")
    per_label = []
    skipped = []
    for j in range(truth.shape[1]):
        roc = auc_roc(scores[:, j], truth[:, j])
        pr = auc_pr(scores[:, j], truth[:, j])
        if roc is None:
            skipped.append(j)
        per_label.append((f1(preds[:, j], truth[:, j]), roc, pr))
    return MetricsReport(
        macro_f=float(np.mean([row[0] for row in per_label])),
        macro_auc_roc=_mean_or_none(row[1] for row in per_label),
        macro_aucpr=_mean_or_none(row[2] for row in per_label),
        per_label=tuple(per_label),
        skipped_labels=tuple(skipped),
    )
