"""V-fold cross-validation over the component count and kernel bandwidth.

The squared-distance matrix of the whole dataset is computed once; every
fold and every bandwidth reuses slices of it.  For each (fold, gamma) a
single NIPALS run with the largest requested component count yields the
predictions for all smaller counts, since components are extracted in
sequence.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, KfplsError, StructuralError
from .fdata import FunctionalDataset
from .kernel import KernelSpec, base_matrix, center_cross_gram, gram_from_raw, kernel_from_base
from .kpls import FitConfig, nipals_scores, solve_coef

DEFAULT_Q_GRID = tuple(range(1, 9))
DEFAULT_GAMMA_GRID = tuple(float(10.0 ** k) for k in np.arange(-3.0, 2.01, 0.5))


@dataclass(frozen=True)
class CvPlan:
    n_folds: int = 5
    seed: int = 0
    q_grid: tuple = DEFAULT_Q_GRID
    gamma_grid: tuple = DEFAULT_GAMMA_GRID
    family: str = "gaussian"

    def __post_init__(self):
        object.__setattr__(self, "q_grid", tuple(int(q) for q in self.q_grid))
        object.__setattr__(self, "gamma_grid", tuple(float(g) for g in self.gamma_grid))
        if self.n_folds < 2:
            raise ConfigError("cross-validation needs at least 2 folds")
        if not self.q_grid or not self.gamma_grid:
            raise ConfigError("q_grid and gamma_grid must be nonempty")
        if min(self.q_grid) < 1:
            raise ConfigError("component counts must be positive")
        for g in self.gamma_grid:
            KernelSpec(self.family, g)

    def check_size(self, n: int):
        if n < self.n_folds:
            raise ConfigError(f"{n} subjects cannot be split into {self.n_folds} folds")
        smallest_train = n - -(-n // self.n_folds)
        if max(self.q_grid) > smallest_train - 1:
            raise ConfigError(
                f"q={max(self.q_grid)} exceeds the smallest training fold size minus one "
                f"({smallest_train - 1})"
            )


@dataclass(frozen=True, eq=False)
class CvResult:
    scores: np.ndarray
    best_q: int
    best_gamma: float
    per_fold: np.ndarray
    q_grid: tuple
    gamma_grid: tuple
    folds: list = field(repr=False)

    @property
    def best_score(self) -> float:
        i = self.q_grid.index(self.best_q)
        j = self.gamma_grid.index(self.best_gamma)
        return float(self.scores[i, j])


def make_folds(n: int, plan: CvPlan) -> list:
    """Random partition of ``range(n)`` into ``plan.n_folds`` near-equal parts."""
    if n < plan.n_folds:
        raise ConfigError(f"{n} subjects cannot be split into {plan.n_folds} folds")
    perm = np.random.default_rng(plan.seed).permutation(n)
    return [np.sort(f) for f in np.array_split(perm, plan.n_folds)]


def _check_folds(folds, n):
    allidx = np.concatenate([np.asarray(f, dtype=int) for f in folds])
    if allidx.size != n or not np.array_equal(np.sort(allidx), np.arange(n)):
        raise StructuralError("folds must partition the subject indices")


def cv_average(y, y_hat, folds) -> float:
    """Mean over folds of the within-fold mean squared error."""
    y = np.asarray(y, dtype=float)
    y_hat = np.asarray(y_hat, dtype=float)
    return float(np.mean([np.mean((y[f] - y_hat[f]) ** 2) for f in folds]))


def _fold_path(base, y, train_idx, test_idx, spec, q_values, cfg):
    """Held-out MSE for each q in ``q_values``; ``inf`` where the fit fails."""
    out = np.full(len(q_values), np.inf)
    K = kernel_from_base(base[np.ix_(train_idx, train_idx)], spec)
    K0 = kernel_from_base(base[np.ix_(test_idx, train_idx)], spec)
    y_tr = y[train_idx]
    y_mean = y_tr.mean()
    yc = y_tr - y_mean
    try:
        G = gram_from_raw(K)
        T, U = nipals_scores(G.centered, yc, max(q_values), cfg, partial=True)
    except KfplsError:
        return out
    K0c = center_cross_gram(K0, G.raw)
    for i, q in enumerate(q_values):
        if q > T.shape[1]:
            continue
        try:
            coef = solve_coef(G.centered, T[:, :q], U[:, :q], yc)
        except KfplsError:
            continue
        resid = y[test_idx] - (K0c @ coef + y_mean)
        out[i] = np.mean(resid ** 2)
    return out


def _per_fold_scores(ds, plan, folds, cfg, n_jobs=1, base=None):
    if ds.responses is None:
        raise StructuralError("cross-validation needs responses")
    n = len(ds)
    _check_folds(folds, n)
    y = np.asarray(ds.responses, dtype=float)
    if base is None:
        base = base_matrix(ds, None, KernelSpec(plan.family, plan.gamma_grid[0]))
    q_values = plan.q_grid
    splits = []
    for f in folds:
        mask = np.ones(n, dtype=bool)
        mask[f] = False
        splits.append((np.nonzero(mask)[0], np.asarray(f, dtype=int)))
    tasks = [(j, v) for j in range(len(plan.gamma_grid)) for v in range(len(splits))]

    def run(task):
        j, v = task
        spec = KernelSpec(plan.family, plan.gamma_grid[j])
        return _fold_path(base, y, *splits[v], spec, q_values, cfg)

    if n_jobs and n_jobs > 1:
        with ThreadPoolExecutor(max_workers=n_jobs) as pool:
            results = list(pool.map(run, tasks))
    else:
        results = [run(t) for t in tasks]
    per_fold = np.empty((len(q_values), len(plan.gamma_grid), len(splits)))
    for (j, v), r in zip(tasks, results):
        per_fold[:, j, v] = r
    return per_fold


def _reduce(per_fold):
    with np.errstate(invalid="ignore"):
        scores = per_fold.mean(axis=-1)
    scores[~np.isfinite(scores)] = np.inf
    return scores


def cv_score(ds: FunctionalDataset, q: int, gamma: float, folds, family="gaussian",
             fit_config: FitConfig = FitConfig()) -> float:
    """CV score of one (q, gamma) cell; ``inf`` if any fold fit fails."""
    plan = CvPlan(n_folds=max(2, len(folds)), q_grid=(q,), gamma_grid=(gamma,), family=family)
    return float(_reduce(_per_fold_scores(ds, plan, folds, fit_config))[0, 0])


def grid_search(ds: FunctionalDataset, plan: CvPlan = CvPlan(),
                fit_config: FitConfig = FitConfig(), n_jobs: int = 1, folds=None) -> CvResult:
    """Evaluate the CV score on the full grid and return the minimizer.

    Ties go to the smallest q, then the smallest gamma.
    """
    plan.check_size(len(ds))
    if folds is None:
        folds = make_folds(len(ds), plan)
    per_fold = _per_fold_scores(ds, plan, folds, fit_config, n_jobs=n_jobs)
    scores = _reduce(per_fold)
    best = None
    order = sorted(
        ((q, g, i, j) for i, q in enumerate(plan.q_grid) for j, g in enumerate(plan.gamma_grid)),
        key=lambda c: (c[0], c[1]),
    )
    for q, g, i, j in order:
        s = scores[i, j]
        if np.isfinite(s) and (best is None or s < best[0]):
            best = (s, q, g)
    if best is None:
        raise KfplsError("every (q, gamma) cell failed during cross-validation")
    for a in (scores, per_fold):
        a.setflags(write=False)
    return CvResult(scores, best[1], best[2], per_fold, plan.q_grid, plan.gamma_grid, folds)
