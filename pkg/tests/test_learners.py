import numpy as np
import pytest

from mlsol.dataset import MultiLabelDataset
from mlsol.learners import br_knn, predict_bipartition, predict_scores, train_br_knn


@pytest.fixture
def line():
    x = np.arange(8.0)[:, None]
    y = np.array([[1, 0], [1, 0], [1, 1], [0, 1], [1, 0], [0, 0], [0, 0], [0, 0]])
    return MultiLabelDataset(x, y)


def test_scores_are_neighbour_frequencies(line):
    model = train_br_knn(line, 5)
    # neighbours of 0.0 are rows 0..4: label 0 on four of them, label 1 on two
    np.testing.assert_array_equal(predict_scores(model, [0.0]), [0.8, 0.4])
    np.testing.assert_array_equal(predict_scores(model, [7.0]), [0.2, 0.2])


def test_all_positive_neighbourhood():
    ds = MultiLabelDataset(np.arange(6.0)[:, None], [[1]] * 5 + [[0]])
    assert predict_scores(train_br_knn(ds, 5), [0.0])[0] == 1.0


def test_batch_matches_single(line, rng):
    model = train_br_knn(line, 3)
    q = rng.uniform(-1, 8, size=(10, 1))
    batch = model.predict_scores(q)
    for i in range(10):
        np.testing.assert_array_equal(batch[i], model.predict_scores(q[i]))
    assert set(np.unique(batch * 3)) <= {0.0, 1.0, 2.0, 3.0}


def test_k_equal_n_allowed(line):
    np.testing.assert_allclose(train_br_knn(line, 8).predict_scores([3.0]), line.labels.mean(0))


@pytest.mark.parametrize("k", [0, 9])
def test_bad_k(line, k):
    with pytest.raises(ValueError):
        train_br_knn(line, k)


def test_dimension_mismatch(line):
    with pytest.raises(ValueError, match="dimension"):
        train_br_knn(line, 2).predict_scores([1.0, 2.0])


class TestBipartition:
    class Fixed:
        def __init__(self, scores):
            self.scores = np.asarray(scores)

        def predict_scores(self, x):
            return self.scores

    def test_strictly_above(self):
        model = self.Fixed([0.6, 0.5, 0.4])
        assert predict_bipartition(model, None, [0.5, 0.5, 0.5]).tolist() == [1, 0, 0]

    def test_threshold_one_predicts_nothing(self):
        assert predict_bipartition(self.Fixed([1.0, 0.9]), None, [1.0, 1.0]).tolist() == [0, 0]

    def test_default_threshold(self, line):
        model = br_knn(5)(line)
        assert model.predict([0.0]).tolist() == [1, 0]


def test_training_data_untouched(line):
    before = line.labels.copy()
    train_br_knn(line, 3).predict_scores(np.zeros((4, 1)))
    np.testing.assert_array_equal(line.labels, before)
