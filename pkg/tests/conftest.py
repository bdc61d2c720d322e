import numpy as np
import pytest

from mlsol.dataset import MultiLabelDataset


def random_dataset(rng, n, d, q, pos_rate=None):
    """Random dataset whose labels each keep >= 2 instances of both classes."""
    x = rng.normal(size=(n, d))
    y = np.zeros((n, q), dtype=np.int8)
    for j in range(q):
        p = rng.uniform(0.1, 0.5) if pos_rate is None else pos_rate
        col = rng.random(n) < p
        if col.sum() < 2:
            col[rng.choice(n, 2, replace=False)] = True
        if (~col).sum() < 2:
            col[rng.choice(np.flatnonzero(col), 2, replace=False)] = False
        y[:, j] = col
    return MultiLabelDataset(x, y)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def toy():
    """Two clusters on a line with one label each, plus a co-occurring label."""
    x = np.array([[0.0], [0.1], [0.2], [0.3], [5.0], [5.1], [5.2], [5.3], [5.4], [9.0]])
    y = np.array([
        [1, 0], [1, 0], [1, 1], [0, 0], [0, 1],
        [0, 1], [0, 0], [0, 0], [0, 0], [0, 0],
    ])
    return MultiLabelDataset(x, y)


# criterion number -> (title, passed, detail); filled by test_acceptance
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        title, passed, detail = ACCEPTANCE[number]
        terminalreporter.write_line(f"[{'PASS' if passed else 'FAIL'}] {number:2d}. {title}: {detail}")
