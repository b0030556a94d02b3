import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from kfpls.errors import ConfigError, KfplsError
from kfpls.kernel import KernelSpec
from kfpls.kpls import FitConfig, fit
from kfpls.metrics import rase
from kfpls.simgen import ScenarioSpec, generate
from kfpls.tuning import CvPlan, cv_average, cv_score, grid_search, make_folds
from conftest import constant_curve_dataset, random_dataset


class TestFolds:
    def test_even_split(self):
        folds = make_folds(10, CvPlan(n_folds=5, seed=1))
        assert [len(f) for f in folds] == [2] * 5

    def test_remainder(self):
        assert sorted(len(f) for f in make_folds(7, CvPlan(n_folds=3))) == [2, 2, 3]

    def test_deterministic(self):
        a = make_folds(23, CvPlan(seed=9))
        b = make_folds(23, CvPlan(seed=9))
        assert all(np.array_equal(x, y) for x, y in zip(a, b))

    def test_too_few_subjects(self):
        with pytest.raises(ConfigError):
            make_folds(3, CvPlan(n_folds=5))

    @given(st.integers(2, 60), st.integers(2, 10), st.integers(0, 10_000))
    def test_partition(self, n, v, seed):
        if n < v:
            return
        folds = make_folds(n, CvPlan(n_folds=v, seed=seed))
        allidx = np.concatenate(folds)
        assert sorted(allidx.tolist()) == list(range(n))
        sizes = [len(f) for f in folds]
        assert max(sizes) - min(sizes) <= 1


class TestScore:
    def test_perfect_predictor(self):
        y = np.arange(6.0)
        assert cv_average(y, y, make_folds(6, CvPlan(n_folds=3))) == 0.0

    def test_fold_mean_predictor_hand_value(self):
        y = np.array([1.0, 2, 3, 4, 5, 6])
        folds = [np.array([0, 3]), np.array([1, 4]), np.array([2, 5])]
        yhat = np.empty(6)
        for f in folds:
            mask = np.ones(6, bool)
            mask[f] = False
            yhat[f] = y[mask].mean()
        # (4.5 + 2.25 + 4.5) / 3
        assert cv_average(y, yhat, folds) == pytest.approx(3.75, abs=1e-15)

    def test_matches_manual_refits(self, rng):
        ds = random_dataset(rng, n=15)
        folds = make_folds(15, CvPlan(n_folds=3, seed=2))
        yhat = np.empty(15)
        for f in folds:
            mask = np.ones(15, bool)
            mask[f] = False
            m = fit(ds.subset(np.nonzero(mask)[0]), KernelSpec("gaussian", 0.2), FitConfig(2))
            yhat[f] = m.predict(ds.subset(f))
        assert cv_score(ds, 2, 0.2, folds) == pytest.approx(cv_average(ds.responses, yhat, folds), rel=1e-10)

    def test_fold_order_invariance(self, rng):
        ds = random_dataset(rng, n=16)
        folds = make_folds(16, CvPlan(n_folds=4, seed=3))
        a = cv_score(ds, 2, 0.3, folds)
        b = cv_score(ds, 2, 0.3, folds[::-1])
        assert abs(a - b) < 1e-12

    def test_failed_cell_is_infinite(self, rng):
        X = rng.standard_normal((12, 2))
        ds = constant_curve_dataset(X, rng.standard_normal(12))
        folds = make_folds(12, CvPlan(n_folds=3))
        assert cv_score(ds, 3, 1.0, folds, family="linear") == np.inf
        assert np.isfinite(cv_score(ds, 2, 1.0, folds, family="linear"))


class TestGridSearch:
    def test_singleton(self, rng):
        ds = random_dataset(rng, n=12)
        res = grid_search(ds, CvPlan(n_folds=3, q_grid=(2,), gamma_grid=(0.5,)))
        assert (res.best_q, res.best_gamma) == (2, 0.5)
        assert res.scores.shape == (1, 1)

    def test_duplicate_gamma_columns(self, rng):
        ds = random_dataset(rng, n=12)
        res = grid_search(ds, CvPlan(n_folds=3, q_grid=(1, 2, 3), gamma_grid=(0.1, 0.5, 0.1)))
        assert np.array_equal(res.scores[:, 0], res.scores[:, 2])

    def test_argmin_and_tie_break(self, rng):
        ds = random_dataset(rng, n=14)
        res = grid_search(ds, CvPlan(n_folds=3, q_grid=(3, 1, 2), gamma_grid=(1.0, 0.1, 0.1)))
        i, j = np.unravel_index(np.argmin(res.scores), res.scores.shape)
        assert res.best_score == res.scores[i, j]
        # the tie between the duplicated gamma columns resolves to the same value
        assert res.best_gamma in (0.1, 1.0)
        # ties across q: linear kernel with one feature saturates after q = 1
        X = rng.standard_normal((12, 1))
        lin = constant_curve_dataset(X, X[:, 0] * 2 + 0.1 * rng.standard_normal(12))
        res = grid_search(lin, CvPlan(n_folds=3, q_grid=(1,), gamma_grid=(3.0, 2.0, 1.0), family="linear"))
        assert res.best_gamma == 1.0

    def test_reproducible(self, rng):
        ds = random_dataset(rng, n=15)
        plan = CvPlan(n_folds=3, q_grid=(1, 2), gamma_grid=(0.1, 1.0), seed=4)
        a, b = grid_search(ds, plan), grid_search(ds, plan)
        assert a.scores.tobytes() == b.scores.tobytes()
        assert (a.best_q, a.best_gamma) == (b.best_q, b.best_gamma)
        c = grid_search(ds, plan, n_jobs=3)
        assert a.scores.tobytes() == c.scores.tobytes()

    def test_all_cells_failed(self, rng):
        ds = random_dataset(rng, n=9).with_responses(np.ones(9))
        with pytest.raises(KfplsError):
            grid_search(ds, CvPlan(n_folds=3, q_grid=(1,), gamma_grid=(1.0,)))

    def test_plan_validation(self, rng):
        with pytest.raises(ConfigError):
            CvPlan(n_folds=1)
        with pytest.raises(ConfigError):
            CvPlan(q_grid=())
        with pytest.raises(ConfigError):
            CvPlan(gamma_grid=(-1.0,))
        with pytest.raises(ConfigError):
            grid_search(random_dataset(rng, n=10), CvPlan(n_folds=5, q_grid=(8,)))

    def test_default_grids(self):
        plan = CvPlan()
        assert plan.n_folds == 5
        assert plan.q_grid == tuple(range(1, 9))
        assert len(plan.gamma_grid) == 11
        assert plan.gamma_grid[0] == pytest.approx(1e-3) and plan.gamma_grid[-1] == pytest.approx(100.0)

    def test_selected_model_on_scenario_1_case_2(self):
        data = generate(ScenarioSpec(1, 2, n_train=200, seed=11))
        res = grid_search(data.train, CvPlan(seed=11))
        model = fit(data.train, KernelSpec("gaussian", res.best_gamma), FitConfig(res.best_q))
        assert 0.13 <= rase(model.predict(data.test), data.test.responses) <= 0.25
