"""Cross-validated comparison of resampling methods.

Every (repeat, fold) pair is an independent job with its own stream seed, so
results do not depend on how jobs are scheduled across workers. Resampling
only ever sees the training part of a fold.
"""
import csv
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .dataset import MultiLabelDataset, stratified_folds
from .ensemble import train_emls
from .learners import DEFAULT_THRESHOLD, br_knn
from .metrics import evaluate
from .mlsmote import MlsmoteConfig, mlsmote_with_trace
from .sampler import SamplerConfig, mlsol_with_trace

SAMPLERS = ("none", "mlsol", "mlsmote")
WORKERS_ENV = "MLSOL_WORKERS"


@dataclass(frozen=True)
class MethodSpec:
    sampler: str
    ensemble: int = None  # None: single model with the learner's default threshold

    def __post_init__(self):
        if self.sampler not in SAMPLERS:
            raise ValueError(f"unknown method {self.sampler!r}; choose from {', '.join(SAMPLERS)}")
        if self.ensemble is not None and self.ensemble < 1:
            raise ValueError(f"ensemble size must be >= 1, got {self.ensemble}")

    @property
    def name(self):
        return self.sampler if self.ensemble is None else f"e{self.sampler}"

    @classmethod
    def parse(cls, token, ensemble=None):
        """``mlsol`` / ``emlsol`` style names; a leading ``e`` selects the ensemble."""
        if token not in SAMPLERS and token.startswith("e") and token[1:] in SAMPLERS:
            return cls(token[1:], ensemble or 5)
        return cls(token, ensemble)


@dataclass(frozen=True)
class BenchmarkSpec:
    methods: tuple
    k: int = 5
    ratio: float = 0.3
    learner_k: int = 10
    folds: int = 2
    repeats: int = 5
    seed: int = 0
    scale: bool = False
    split_seed: int = None  # fold assignment seed; defaults to ``seed``

    def __post_init__(self):
        if not self.methods:
            raise ValueError("at least one method is required")
        if self.folds < 2:
            raise ValueError(f"folds must be >= 2, got {self.folds}")
        if self.repeats < 1:
            raise ValueError(f"repeats must be >= 1, got {self.repeats}")
        if not self.ratio > 0:
            raise ValueError(f"ratio must be > 0, got {self.ratio}")


@dataclass
class FoldRun:
    method: str
    repeat: int
    fold: int
    stream_seed: int
    train_indices: np.ndarray
    test_indices: np.ndarray
    resampled_sizes: list
    synthetic_origins: list  # per model, list of (seed, reference) in original dataset indices
    n_evaluated: int
    report: object

    def log_record(self):
        return {
            "method": self.method,
            "repeat": self.repeat,
            "fold": self.fold,
            "stream_seed": self.stream_seed,
            "train_indices": self.train_indices.tolist(),
            "test_indices": self.test_indices.tolist(),
            "test_rows_evaluated": self.n_evaluated,
            "resampled_train_sizes": self.resampled_sizes,
            "synthetic_origins": [[list(map(int, o)) for o in org] for org in self.synthetic_origins],
        }


@dataclass
class BenchmarkResult:
    runs: list = field(default_factory=list)

    def averages(self):
        out = {}
        for run in self.runs:
            out.setdefault(run.method, []).append(run.report)
        return {m: _average(reports) for m, reports in out.items()}

    def rows(self):
        rows = []
        for run in self.runs:
            r = run.report
            rows.append({
                "method": run.method, "repeat": run.repeat, "fold": run.fold,
                "stream_seed": run.stream_seed, "n_train": len(run.train_indices),
                "n_test": len(run.test_indices),
                "n_synthetic": sum(s - len(run.train_indices) for s in run.resampled_sizes),
                "macro_f": r.macro_f, "macro_auc_roc": r.macro_auc_roc, "macro_aucpr": r.macro_aucpr,
                "skipped_labels": list(r.skipped_labels),
            })
        for method, avg in self.averages().items():
            rows.append({"method": method, "repeat": "mean", "fold": "mean", "stream_seed": "",
                         "n_train": "", "n_test": "", "n_synthetic": "", **avg, "skipped_labels": []})
        return rows

    def write_csv(self, path):
        columns = ["method", "repeat", "fold", "stream_seed", "n_train", "n_test", "n_synthetic",
                   "macro_f", "macro_auc_roc", "macro_aucpr", "skipped_labels"]
        with open(path, "w", encoding="utf-8", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(columns)
            for row in self.rows():
                w.writerow([_cell(row[c]) for c in columns])

    def write_json(self, path, label_names=None):
        payload = {
            "runs": [{"method": run.method, "repeat": run.repeat, "fold": run.fold,
                      "stream_seed": run.stream_seed, **run.report.to_dict(label_names)}
                     for run in self.runs],
            "averages": self.averages(),
        }
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2)
            fh.write("\n")

    def write_log(self, path):
        with open(path, "w", encoding="utf-8") as fh:
            for run in self.runs:
                fh.write(json.dumps(run.log_record()) + "\n")


def _cell(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, list):
        return ";".join(map(str, v))
    return str(v)


def _average(reports):
    def mean(attr):
        vals = [getattr(r, attr) for r in reports if getattr(r, attr) is not None]
        return float(np.mean(vals)) if vals else None
    return {"macro_f": mean("macro_f"), "macro_auc_roc": mean("macro_auc_roc"),
            "macro_aucpr": mean("macro_aucpr")}


def stream_seed(seed, repeat, fold):
    """Seed for one fold-run, derived from ``(seed, repeat, fold)`` only."""
    return int(np.random.SeedSequence([seed, repeat, fold]).generate_state(1)[0])


def make_sampler(name, k=5, ratio=0.3):
    """Callable ``(dataset, seed) -> (dataset, origins)`` for a method name."""
    if name == "none":
        return lambda ds, seed: (ds, [])
    if name == "mlsol":
        def run(ds, seed):
            out, trace = mlsol_with_trace(ds, SamplerConfig(k=k, gen_ratio=ratio, seed=seed))
            return out, [(t.seed, t.reference) for t in trace]
        return run
    if name == "mlsmote":
        return lambda ds, seed: mlsmote_with_trace(ds, MlsmoteConfig(k=k, seed=seed))
    raise ValueError(f"unknown method {name!r}")


def minmax_scale(train, test):
    """Scale both parts to the training range; constant columns map to 0."""
    lo = train.features.min(axis=0)
    span = train.features.max(axis=0) - lo
    span[span == 0] = 1.0
    def apply(ds):
        return MultiLabelDataset((ds.features - lo) / span, ds.labels, ds.feature_names, ds.label_names)
    return apply(train), apply(test)


def _fold_job(args):
    dataset, spec, repeat, fold, train_idx, test_idx = args
    seed = stream_seed(spec.seed, repeat, fold)
    train, test = dataset.subset(train_idx), dataset.subset(test_idx)
    if spec.scale:
        train, test = minmax_scale(train, test)
    learner = br_knn(spec.learner_k)
    runs = []
    for method in spec.methods:
        sampler = make_sampler(method.sampler, spec.k, spec.ratio)
        if method.ensemble is None:
            resampled, origins = sampler(train, seed)
            model = learner(resampled)
            scores = model.predict_scores(test.features)
            preds = (scores > DEFAULT_THRESHOLD).astype(np.int8)
            sizes, all_origins = [resampled.n], [origins]
        else:
            model = train_emls(train, sampler, learner, method.ensemble, seed)
            scores, preds = model.predict(test.features)
            sizes = [train.n + len(o) for o in model.member_origins]
            all_origins = list(model.member_origins)
        runs.append(FoldRun(
            method=method.name, repeat=repeat, fold=fold, stream_seed=seed,
            train_indices=train_idx, test_indices=test_idx, resampled_sizes=sizes,
            synthetic_origins=[[(int(train_idx[s]), int(train_idx[r])) for s, r in org]
                               for org in all_origins],
            n_evaluated=int(scores.shape[0]),
            report=evaluate(scores, preds, test.labels),
        ))
    return runs


def default_workers():
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, "1")))
    except ValueError:
        return 1


def run_benchmark(dataset, spec, workers=None):
    """Run every method on every (repeat, fold); results ordered by repeat, fold, method."""
    workers = default_workers() if workers is None else workers
    jobs = []
    split_seed = spec.seed if spec.split_seed is None else spec.split_seed
    for assignment in stratified_folds(dataset, spec.folds, spec.repeats, split_seed):
        for fold in range(spec.folds):
            jobs.append((dataset, spec, assignment.repeat_index, fold,
                         assignment.train_indices(fold), assignment.test_indices(fold)))
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            batches = list(pool.map(_fold_job, jobs))
    else:
        batches = [_fold_job(job) for job in jobs]
    return BenchmarkResult([run for batch in batches for run in batch])
