import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from kfpls.fdata import FunctionalDataset, Grid  # noqa: E402

ACCEPTANCE_LINES = []


def random_dataset(rng, n=8, p=2, G=21, responses=True):
    grid = Grid.uniform(G)
    values = [rng.standard_normal((n, G)) for _ in range(p)]
    y = rng.standard_normal(n) if responses else None
    return FunctionalDataset([grid] * p, values, y)


def constant_curve_dataset(X, y=None, G=3):
    """Each feature column becomes a curve that is constant on [0, 1], so
    L2 inner products reduce to Euclidean ones."""
    X = np.asarray(X, float)
    grid = Grid.uniform(G)
    values = [np.repeat(X[:, [j]], G, axis=1) for j in range(X.shape[1])]
    return FunctionalDataset([grid] * X.shape[1], values, y)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
