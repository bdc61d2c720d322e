"""Command-line interface: ``mlsol resample | benchmark | inspect``.

Exit codes: 0 success, 1 runtime error, 2 usage error.
"""
import argparse
import csv
import json
import os
import sys

import numpy as np

from .benchmark import SAMPLERS, BenchmarkSpec, MethodSpec, default_workers, run_benchmark
from .dataset import (MultiLabelDataset, filter_rare_labels, load_dataset, write_csv,
                      write_mulan)
from .local_stats import InstanceType, type_histogram
from .mlsmote import MlsmoteConfig, mlsmote_with_trace
from .sampler import SamplerConfig, local_state, mlsol_with_trace, write_trace_csv


def _positive_float(text):
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not value > 0 or not np.isfinite(value):
        raise argparse.ArgumentTypeError(f"must be > 0, got {text}")
    return value


def _positive_int(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {text}")
    return value


def _min_int(minimum):
    def parse(text):
        value = _positive_int(text)
        if value < minimum:
            raise argparse.ArgumentTypeError(f"must be >= {minimum}, got {text}")
        return value
    return parse


def _method_token(text):
    if text in SAMPLERS or (text.startswith("e") and text[1:] in SAMPLERS[1:]):
        return text
    raise argparse.ArgumentTypeError(f"unknown method {text!r} (choose from none, mlsol, mlsmote, "
                                     f"emlsol, emlsmote)")


def _minmax(dataset):
    lo = dataset.features.min(axis=0)
    span = dataset.features.max(axis=0) - lo
    span[span == 0] = 1.0
    return MultiLabelDataset((dataset.features - lo) / span, dataset.labels,
                             dataset.feature_names, dataset.label_names)


def _load(args, scale=None):
    dataset = load_dataset(args.data, args.labels)
    if not args.keep_rare:
        dataset = filter_rare_labels(dataset)
    if args.scale if scale is None else scale:
        dataset = _minmax(dataset)
    return dataset


def _write_dataset(dataset, output, labels_out):
    if output.lower().endswith(".arff"):
        write_mulan(dataset, output, labels_out or os.path.splitext(output)[0] + ".xml")
    else:
        write_csv(dataset, output, labels_out or os.path.splitext(output)[0] + ".labels.csv")


def cmd_resample(args):
    dataset = _load(args)
    if args.method == "mlsol":
        out, trace = mlsol_with_trace(dataset, SamplerConfig(k=args.k, gen_ratio=args.ratio, seed=args.seed))
    else:
        out, origins = mlsmote_with_trace(dataset, MlsmoteConfig(k=args.k, seed=args.seed))
        trace = None
    _write_dataset(out, args.output, args.labels_out)
    if args.trace:
        if trace is None:
            with open(args.trace, "w", encoding="utf-8", newline="") as fh:
                w = csv.writer(fh, lineterminator="\n")
                w.writerow(["synthetic", "seed", "reference"])
                w.writerows([c, s, r] for c, (s, r) in enumerate(origins))
        else:
            write_trace_csv(args.trace, trace, dataset.label_names)
    print(f"original={dataset.n} generated={out.n - dataset.n} total={out.n}")
    return 0


def cmd_benchmark(args):
    # scaling is fitted per training fold inside the benchmark
    dataset = _load(args, scale=False)
    methods = tuple(MethodSpec.parse(token, args.ensemble) if token != "none" else MethodSpec("none")
                    for token in args.methods)
    spec = BenchmarkSpec(methods=methods, k=args.k, ratio=args.ratio, learner_k=args.learner_k,
                         folds=args.folds, repeats=args.repeats, seed=args.seed,
                         scale=args.scale, split_seed=args.split_seed)
    result = run_benchmark(dataset, spec, workers=args.workers)
    stem, ext = os.path.splitext(args.output)
    base = stem if ext.lower() in (".csv", ".json") else args.output
    result.write_csv(base + ".csv")
    result.write_json(base + ".json", dataset.label_names)
    if args.log:
        result.write_log(args.log)
    for method, avg in result.averages().items():
        print(f"{method}: " + " ".join(f"{k}={'nan' if v is None else f'{v:.4f}'}" for k, v in avg.items()))
    return 0


def cmd_inspect(args):
    dataset = _load(args)
    state = local_state(dataset, args.k)
    os.makedirs(args.output, exist_ok=True)
    names = list(dataset.label_names)
    C = state.opposition.values

    def dump(filename, header, rows):
        with open(os.path.join(args.output, filename), "w", encoding="utf-8", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(header)
            w.writerows(rows)

    dump("opposition.csv", ["instance", *names], ([i, *map(repr, map(float, row))] for i, row in enumerate(C)))
    dump("weights.csv", ["instance", "weight"], ([i, repr(float(v))] for i, v in enumerate(state.weights)))
    dump("types.csv", ["instance", *names],
         ([i, *(InstanceType(t).name for t in row)] for i, row in enumerate(state.types)))
    hist = type_histogram(state.types)
    summary = {
        "n": dataset.n, "q": dataset.q, "k": args.k,
        "type_histogram": {name: {t.name: int(hist[j, t]) for t in InstanceType}
                           for j, name in enumerate(names)},
    }
    with open(os.path.join(args.output, "summary.json"), "w", encoding="utf-8") as fh:
        json.dump(summary, fh, indent=2)
        fh.write("\n")
    for name, counts in summary["type_histogram"].items():
        print(f"{name}: " + " ".join(f"{t}={c}" for t, c in counts.items()))
    return 0


def _add_data_args(p):
    p.add_argument("data", help="features CSV or Mulan .arff")
    p.add_argument("labels", help="labels CSV or Mulan label .xml")
    p.add_argument("--scale", action="store_true", help="min-max scale features (default off)")
    p.add_argument("--keep-rare", action="store_true",
                   help="skip removal of labels with a single minority instance")


def build_parser():
    parser = argparse.ArgumentParser(prog="mlsol", description="Multi-label synthetic oversampling")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("resample", help="oversample a dataset")
    _add_data_args(p)
    p.add_argument("output", help="output features CSV, or .arff (labels XML written alongside)")
    p.add_argument("--labels-out", help="output labels CSV / XML path")
    p.add_argument("--method", choices=["mlsol", "mlsmote"], default="mlsol")
    p.add_argument("--k", type=_positive_int, default=5)
    p.add_argument("--ratio", type=_positive_float, default=0.3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trace", help="write per-synthetic provenance CSV")
    p.set_defaults(func=cmd_resample)

    p = sub.add_parser("benchmark", help="cross-validated comparison")
    _add_data_args(p)
    p.add_argument("--output", required=True, help="report path stem; writes .csv and .json")
    p.add_argument("--methods", nargs="+", type=_method_token, default=["none", "mlsol"])
    p.add_argument("--ensemble", type=_positive_int, help="wrap resampling methods in EMLS of this size")
    p.add_argument("--learner", choices=["br-knn"], default="br-knn")
    p.add_argument("--learner-k", type=_positive_int, default=10)
    p.add_argument("--k", type=_positive_int, default=5)
    p.add_argument("--ratio", type=_positive_float, default=0.3)
    p.add_argument("--folds", type=_min_int(2), default=2)
    p.add_argument("--repeats", type=_positive_int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--split-seed", type=int, help="fold assignment seed (default: --seed)")
    p.add_argument("--workers", type=_positive_int, default=None,
                   help="parallel fold jobs (default: $MLSOL_WORKERS or 1)")
    p.add_argument("--log", help="JSON-lines run log with fold indices and synthetic provenance")
    p.set_defaults(func=cmd_benchmark)

    p = sub.add_parser("inspect", help="dump opposition, weights and types")
    _add_data_args(p)
    p.add_argument("output", help="directory for the CSV dumps")
    p.add_argument("--k", type=_positive_int, default=5)
    p.set_defaults(func=cmd_inspect)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "workers", 1) is None:
        args.workers = default_workers()
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"mlsol {args.command}: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
