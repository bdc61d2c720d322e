"""Synthetic oversampling of imbalanced multi-label data from local label distributions.

Main entry points:

* :func:`mlsol` / :class:`SamplerConfig` - the oversampler,
* :func:`train_emls` - ensemble of models over independently resampled data,
* :func:`mlsmote` - MLSMOTE baseline (Ranking label rule),
* :func:`run_benchmark` - stratified cross-validation harness.
"""
from .benchmark import BenchmarkSpec, MethodSpec, run_benchmark
from .dataset import (DatasetError, MultiLabelDataset, dataset_stats, filter_rare_labels,
                      load_csv, load_dataset, load_mulan, minority_class, stratified_folds, write_csv)
from .ensemble import EnsembleModel, predict_ensemble, train_emls, tune_thresholds
from .learners import predict_bipartition, predict_scores, train_br_knn
from .local_stats import (InstanceType, compute_opposition, compute_weights, init_types,
                          naive_weights)
from .metrics import auc_pr, auc_roc, evaluate, f1
from .mlsmote import MlsmoteConfig, minority_labels, mlsmote
from .neighbors import build_knn, euclidean, knn_of_point
from .sampler import (NoEligibleSeedError, SamplerConfig, generate_instance, mlsol,
                      mlsol_with_trace, replay_labels, resample_trace, select_seed)

__version__ = "0.1.0"

__all__ = [
    "BenchmarkSpec", "MethodSpec", "run_benchmark",
    "DatasetError", "MultiLabelDataset", "dataset_stats", "filter_rare_labels", "load_csv",
    "load_dataset", "load_mulan", "minority_class", "stratified_folds", "write_csv",
    "EnsembleModel", "predict_ensemble", "train_emls", "tune_thresholds",
    "predict_bipartition", "predict_scores", "train_br_knn",
    "InstanceType", "compute_opposition", "compute_weights", "init_types", "naive_weights",
    "auc_pr", "auc_roc", "evaluate", "f1",
    "MlsmoteConfig", "minority_labels", "mlsmote",
    "build_knn", "euclidean", "knn_of_point",
    "NoEligibleSeedError", "SamplerConfig", "generate_instance", "mlsol", "mlsol_with_trace",
    "replay_labels", "resample_trace", "select_seed",
]
