import itertools
import os

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from mlsol.arff import write_arff, write_label_xml
from mlsol.dataset import (DatasetError, MultiLabelDataset, dataset_stats, filter_rare_labels,
                           load_csv, load_mulan, minority_class, stratified_folds, write_csv)

from conftest import random_dataset


def _write(path, text):
    path.write_text(text, encoding="utf-8")
    return str(path)


MULAN_ARFF = """% toy mulan file
@relation 'toy: -C -2'

@attribute f1 numeric
@attribute 'f 2' real
@attribute zone {1,2,3}
@attribute red {0,1}
@attribute blue {0,1}

@data
1.5,2,1,1,0
-0.25,3e-2,3,0,1
{0 4, 1 1, 2 2, 4 1}
"""

MULAN_XML = """<?xml version="1.0" encoding="utf-8"?>
<labels xmlns="http://mulan.sourceforge.net/labels">
<label name="red"></label>
<label name="blue"></label>
</labels>
"""


class TestLoadMulan:
    def test_parses_dense_sparse_and_nominal(self, tmp_path):
        ds = load_mulan(_write(tmp_path / "a.arff", MULAN_ARFF), _write(tmp_path / "a.xml", MULAN_XML))
        assert (ds.n, ds.d, ds.q) == (3, 3, 2)
        assert ds.feature_names == ("f1", "f 2", "zone")
        assert ds.label_names == ("red", "blue")
        np.testing.assert_array_equal(ds.features, [[1.5, 2, 1], [-0.25, 0.03, 3], [4, 1, 2]])
        np.testing.assert_array_equal(ds.labels, [[1, 0], [0, 1], [0, 1]])

    def test_empty_data_section(self, tmp_path):
        text = MULAN_ARFF.split("@data")[0] + "@data\n"
        with pytest.raises(DatasetError, match="empty dataset"):
            load_mulan(_write(tmp_path / "a.arff", text), _write(tmp_path / "a.xml", MULAN_XML))

    def test_non_binary_label_names_attribute(self, tmp_path):
        text = MULAN_ARFF.replace("@attribute blue {0,1}", "@attribute blue numeric").replace(
            "-0.25,3e-2,3,0,1", "-0.25,3e-2,3,0,2")
        with pytest.raises(DatasetError, match="blue") as exc:
            load_mulan(_write(tmp_path / "a.arff", text), _write(tmp_path / "a.xml", MULAN_XML))
        assert "line" in str(exc.value)

    def test_label_missing_from_header(self, tmp_path):
        xml = MULAN_XML.replace('"blue"', '"green"')
        with pytest.raises(DatasetError, match="green"):
            load_mulan(_write(tmp_path / "a.arff", MULAN_ARFF), _write(tmp_path / "a.xml", xml))

    def test_non_numeric_feature(self, tmp_path):
        text = MULAN_ARFF.replace("@attribute zone {1,2,3}", "@attribute zone {north,south,east}").replace(
            "1.5,2,1,1,0", "1.5,2,north,1,0").replace("-0.25,3e-2,3,0,1", "-0.25,3e-2,east,0,1").replace(
            "{0 4, 1 1, 2 2, 4 1}", "4,1,south,0,1")
        with pytest.raises(DatasetError, match="zone"):
            load_mulan(_write(tmp_path / "a.arff", text), _write(tmp_path / "a.xml", MULAN_XML))

    def test_missing_file(self, tmp_path):
        with pytest.raises(DatasetError, match="no such file"):
            load_mulan(str(tmp_path / "nope.arff"), _write(tmp_path / "a.xml", MULAN_XML))

    def test_arff_writer_round_trip(self, tmp_path, rng):
        ds = random_dataset(rng, 20, 3, 2)
        write_arff(tmp_path / "o.arff", "r", ds.feature_names, ds.features, ds.label_names, ds.labels)
        write_label_xml(tmp_path / "o.xml", ds.label_names)
        back = load_mulan(str(tmp_path / "o.arff"), str(tmp_path / "o.xml"))
        assert back.equals(ds)


FLAGS_ARFF = os.environ.get("MLSOL_FLAGS_ARFF")
FLAGS_XML = os.environ.get("MLSOL_FLAGS_XML")


@pytest.mark.skipif(not (FLAGS_ARFF and FLAGS_XML),
                    reason="Mulan flags dataset not available; set MLSOL_FLAGS_ARFF and MLSOL_FLAGS_XML")
def test_flags_dataset_matches_published_summary():
    ds = load_mulan(FLAGS_ARFF, FLAGS_XML)
    assert (ds.n, ds.d, ds.q) == (194, 19, 7)
    stats = dataset_stats(filter_rare_labels(ds))
    assert stats.mean_imbalance_ratio == pytest.approx(2.753, abs=5e-4)
    assert stats.cardinality == pytest.approx(3.392, abs=5e-4)


class TestLoadCsv:
    def test_shape(self, tmp_path):
        f = _write(tmp_path / "x.csv", "a,b\n1,2\n3,4\n5,6\n7,8\n")
        y = _write(tmp_path / "y.csv", "l1,l2,l3\n1,0,0\n0,1,0\n0,0,1\n1,1,0\n")
        ds = load_csv(f, y)
        assert (ds.n, ds.d, ds.q) == (4, 2, 3)
        assert ds.feature_names == ("a", "b")

    def test_row_count_mismatch(self, tmp_path):
        f = _write(tmp_path / "x.csv", "a,b\n1,2\n3,4\n5,6\n7,8\n")
        y = _write(tmp_path / "y.csv", "l1\n1\n0\n0\n1\n0\n")
        with pytest.raises(DatasetError, match="mismatch"):
            load_csv(f, y)

    def test_fractional_label(self, tmp_path):
        f = _write(tmp_path / "x.csv", "a\n1\n2\n")
        y = _write(tmp_path / "y.csv", "l1\n0.5\n1\n")
        with pytest.raises(DatasetError, match="non-binary"):
            load_csv(f, y)

    def test_nan_feature(self, tmp_path):
        f = _write(tmp_path / "x.csv", "a\nnan\n2\n")
        y = _write(tmp_path / "y.csv", "l1\n0\n1\n")
        with pytest.raises(DatasetError, match="non-finite"):
            load_csv(f, y)

    def test_ragged_row(self, tmp_path):
        f = _write(tmp_path / "x.csv", "a,b\n1,2\n3\n")
        y = _write(tmp_path / "y.csv", "l1\n0\n1\n")
        with pytest.raises(DatasetError, match="line 3"):
            load_csv(f, y)

    @settings(max_examples=60, deadline=None)
    @given(x=arrays(np.float64, st.tuples(st.integers(1, 6), st.integers(1, 4)),
                    elements=st.floats(allow_nan=False, allow_infinity=False)),
           seed=st.integers(0, 2**32 - 1))
    def test_round_trip_is_bit_exact(self, tmp_path_factory, x, seed):
        y = np.random.default_rng(seed).integers(0, 2, size=(x.shape[0], 3))
        ds = MultiLabelDataset(x, y)
        d = tmp_path_factory.mktemp("rt")
        write_csv(ds, d / "x.csv", d / "y.csv")
        back = load_csv(str(d / "x.csv"), str(d / "y.csv"))
        assert back.equals(ds)
        assert np.array_equal(back.features.view(np.uint64), ds.features.view(np.uint64))


def test_dataset_is_immutable(toy):
    with pytest.raises(ValueError):
        toy.features[0, 0] = 1.0
    with pytest.raises(ValueError):
        toy.labels[0, 0] = 0


@pytest.mark.parametrize("column, expected", [
    ([1, 0, 0, 0], 1),
    ([1, 1, 1, 0], 0),
    ([1, 1, 0, 0], 1),
])
def test_minority_class(column, expected):
    ds = MultiLabelDataset(np.zeros((4, 1)), np.array(column)[:, None])
    assert minority_class(ds, 0) == expected


class TestFilterRareLabels:
    def test_drops_single_minority(self):
        y = np.array([[1, 1], [0, 1], [0, 0], [0, 0], [0, 0]])
        out = filter_rare_labels(MultiLabelDataset(np.zeros((5, 1)), y, label_names=["rare", "ok"]))
        assert out.label_names == ("ok",)
        np.testing.assert_array_equal(out.labels[:, 0], [1, 1, 0, 0, 0])

    def test_minority_zero_counts(self):
        # four ones, one zero: the minority class (0) has a single instance
        y = np.array([[1], [1], [1], [1], [0]])
        with pytest.raises(DatasetError, match="no usable labels"):
            filter_rare_labels(MultiLabelDataset(np.zeros((5, 1)), y))

    def test_all_rare(self):
        y = np.array([[1, 0], [0, 0], [0, 0], [0, 1]])
        with pytest.raises(DatasetError, match="no usable labels"):
            filter_rare_labels(MultiLabelDataset(np.zeros((4, 1)), y))

    def test_idempotent(self, rng):
        y = (rng.random((30, 8)) < 0.08).astype(int)
        y[:2, 0] = 1
        once = filter_rare_labels(MultiLabelDataset(rng.normal(size=(30, 2)), y))
        assert filter_rare_labels(once).equals(once)
        assert np.all(np.minimum(once.labels.sum(0), once.n - once.labels.sum(0)) >= 2)


class TestDatasetStats:
    def test_hand_count(self):
        ds = MultiLabelDataset(np.zeros((4, 1)), [[1, 0], [1, 0], [0, 0], [0, 1]])
        stats = dataset_stats(ds)
        assert stats.cardinality == 0.75
        assert stats.per_label_imr == (1.0, 3.0)
        assert stats.mean_imbalance_ratio == 2.0

    def test_balanced_label(self):
        ds = MultiLabelDataset(np.zeros((6, 1)), [[1], [0], [1], [0], [1], [0]])
        assert dataset_stats(ds).per_label_imr == (1.0,)


# ------------------------------------------------------------ stratification

def _balanced(labels, fold_of, folds):
    for j in range(labels.shape[1]):
        if labels[:, j].sum() >= folds:
            counts = [labels[fold_of == f, j].sum() for f in range(folds)]
            if max(counts) - min(counts) > 1:
                return False
    return True


def _exhaustive_balance_exists(labels):
    n = labels.shape[0]
    for bits in itertools.product((0, 1), repeat=n):
        a = np.array(bits)
        if 0 < a.sum() < n and _balanced(labels, a, 2):
            return True
    return False


class TestStratifiedFolds:
    def test_single_label_example(self):
        ds = MultiLabelDataset(np.zeros((4, 1)), [[1], [1], [0], [0]])
        for seed in range(20):
            (a,) = stratified_folds(ds, 2, 1, seed)
            assert sorted(ds.labels[a.fold_of_instance == f, 0].sum() for f in range(2)) == [1, 1]
            assert _balanced(ds.labels, a.fold_of_instance, 2)

    def test_folds_must_be_at_least_two(self, toy):
        with pytest.raises(DatasetError):
            stratified_folds(toy, 1, 1, 0)

    def test_more_folds_than_instances(self, toy):
        with pytest.raises(DatasetError):
            stratified_folds(toy, toy.n + 1, 1, 0)

    def test_deterministic(self, rng):
        ds = random_dataset(rng, 40, 2, 4)
        a = stratified_folds(ds, 2, 5, seed=3)
        b = stratified_folds(ds, 2, 5, seed=3)
        for x, y in zip(a, b):
            np.testing.assert_array_equal(x.fold_of_instance, y.fold_of_instance)
        assert any(not np.array_equal(a[0].fold_of_instance, r.fold_of_instance) for r in a[1:])

    def test_partition_and_nonempty(self, rng):
        for trial in range(200):
            n = int(rng.integers(2, 30))
            folds = int(rng.integers(2, min(n, 6) + 1))
            y = (rng.random((n, int(rng.integers(1, 5)))) < rng.uniform(0.05, 0.6)).astype(int)
            (a,) = stratified_folds(MultiLabelDataset(np.zeros((n, 1)), y), folds, 1, trial)
            assert a.fold_of_instance.shape == (n,)
            assert set(a.fold_of_instance.tolist()) == set(range(folds))

    def test_single_label_matches_exhaustive_optimum(self, rng):
        for trial in range(300):
            n = int(rng.integers(2, 13))
            y = (rng.random((n, 1)) < rng.uniform(0.1, 0.9)).astype(int)
            (a,) = stratified_folds(MultiLabelDataset(np.zeros((n, 1)), y), 2, 1, trial)
            assert _exhaustive_balance_exists(y)
            assert _balanced(y, a.fold_of_instance, 2)

    def test_disjoint_labels_match_exhaustive_optimum(self, rng):
        for trial in range(200):
            n = int(rng.integers(4, 13))
            owner = rng.integers(-1, 3, size=n)  # -1: no label
            y = np.stack([(owner == j) for j in range(3)], axis=1).astype(int)
            (a,) = stratified_folds(MultiLabelDataset(np.zeros((n, 1)), y), 2, 1, trial)
            assert _exhaustive_balance_exists(y)
            assert _balanced(y, a.fold_of_instance, 2)

    def test_scarcest_label_always_balanced(self, rng):
        for trial in range(300):
            n = int(rng.integers(4, 40))
            folds = int(rng.integers(2, 5))
            y = (rng.random((n, 4)) < rng.uniform(0.1, 0.6)).astype(int)
            counts = y.sum(0).astype(float)
            counts[counts == 0] = np.inf
            if not np.isfinite(counts).any():
                continue
            j = int(np.argmin(counts))
            (a,) = stratified_folds(MultiLabelDataset(np.zeros((n, 1)), y), folds, 1, trial)
            per_fold = [y[a.fold_of_instance == f, j].sum() for f in range(folds)]
            assert max(per_fold) - min(per_fold) <= 1
