import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from kfpls.errors import ConfigError, StructuralError, UndefinedMetricError
from kfpls.metrics import EvalReport, arpe, evaluate, mc_summarize, rase

vals = st.floats(-100, 100, allow_nan=False)


def test_rase_examples():
    assert rase([1.0, 2.0], [1.0, 2.0]) == 0.0
    assert rase([1.0, 1.0], [0.0, 0.0]) == 1.0
    assert abs(rase([1, 1, 1], [1, 2, 3]) - np.sqrt(5 / 3)) < 1e-12
    assert rase([1, 1, 1], [1, 2, 3]) == pytest.approx(1.29099, abs=1e-5)


def test_arpe_examples():
    assert arpe([3.0, -1.0], [3.0, -1.0]) == 0.0
    assert abs(arpe([2.0, 0.0], [2.0, -4.0]) - 0.5) < 1e-12


def test_arpe_all_zero():
    with pytest.raises(UndefinedMetricError):
        arpe([1.0, 2.0], [0.0, 0.0])


def test_length_mismatch():
    with pytest.raises(StructuralError):
        rase([1.0], [1.0, 2.0])
    with pytest.raises(StructuralError):
        arpe([], [])


@given(arrays(float, 8, elements=vals), arrays(float, 8, elements=vals), st.floats(0.01, 100))
def test_arpe_scale_invariant(yh, y, c):
    if np.abs(y).max() < 1e-3:
        return
    assert arpe(c * yh, c * y) == pytest.approx(arpe(yh, y), rel=1e-9, abs=1e-12)


@given(arrays(float, 8, elements=vals), arrays(float, 8, elements=vals), st.permutations(range(8)))
def test_rase_permutation_invariant(yh, y, perm):
    perm = list(perm)
    assert rase(yh[perm], y[perm]) == pytest.approx(rase(yh, y), rel=1e-12, abs=1e-12)


def test_evaluate_uses_split_max():
    rep = evaluate([0.0, 1.0], [2.0, -4.0])
    assert rep.y_max_abs == 4.0 and rep.n == 2


def test_mc_summary():
    reps = [EvalReport(0.1, 0.01, 5, 1.0), EvalReport(0.3, 0.03, 5, 1.0)]
    s = mc_summarize(reps)
    assert s.mean_rase == pytest.approx(0.2) and s.sd_rase == pytest.approx(0.1414, abs=1e-4)
    assert s.sd_rase == pytest.approx(np.sqrt(0.02), rel=1e-12)
    assert s.n_runs == 2
    same = mc_summarize([reps[0]] * 3)
    assert same.sd_rase == 0.0 and same.sd_arpe == 0.0
    assert s.format()[0] == "0.2000 (0.1414)"


def test_mc_summary_needs_two():
    with pytest.raises(ConfigError):
        mc_summarize([EvalReport(0.1, 0.1, 1, 1.0)])
