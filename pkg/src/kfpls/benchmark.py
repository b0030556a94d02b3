"""Monte Carlo and random-split evaluation harnesses.

A replicate is simulate -> cross-validate -> refit -> evaluate.  Replicate
``r`` of a run with master seed ``s`` uses data seed ``s + r`` and fold seed
``s + r``, so replicates are independent of execution order and can be run
in parallel.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .errors import ConfigError, KfplsError
from .fdata import FunctionalDataset
from .kernel import KernelSpec
from .kpls import FitConfig, fit
from .metrics import EvalReport, McSummary, evaluate, mc_summarize
from .simgen import ScenarioSpec, generate
from .tuning import CvPlan, grid_search

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ReplicateResult:
    index: int
    seed: int
    q: int
    gamma: float
    train: EvalReport
    test: EvalReport


@dataclass(frozen=True, eq=False)
class BenchmarkResult:
    replicates: tuple
    failures: tuple
    train: McSummary
    test: McSummary

    @property
    def n_failed(self) -> int:
        return len(self.failures)


def fit_and_evaluate(train: FunctionalDataset, test: FunctionalDataset, plan: CvPlan,
                     fit_config: FitConfig = FitConfig(), fixed=None):
    """Tune (unless ``fixed=(q, gamma)``), refit on all of ``train`` and
    report train/test metrics.  Returns ``(q, gamma, train_report, test_report)``."""
    if fixed is None:
        cv = grid_search(train, plan, fit_config)
        q, gamma = cv.best_q, cv.best_gamma
    else:
        q, gamma = fixed
    model = fit(train, KernelSpec(plan.family, gamma), replace(fit_config, n_components=q))
    return (
        q,
        gamma,
        evaluate(model.fitted_values(), train.responses),
        evaluate(model.predict(test), test.responses),
    )


def run_replicate(spec: ScenarioSpec, plan: CvPlan, index: int,
                  fit_config: FitConfig = FitConfig(), fixed=None) -> ReplicateResult:
    seed = spec.seed + index
    data = generate(spec.with_seed(seed))
    q, gamma, tr, te = fit_and_evaluate(
        data.train, data.test, replace(plan, seed=plan.seed + index), fit_config, fixed
    )
    return ReplicateResult(index, seed, q, gamma, tr, te)


def _safe(fn, *args):
    try:
        return fn(*args)
    except KfplsError as exc:
        return exc


def _collect(results):
    ok = tuple(r for r in results if isinstance(r, ReplicateResult))
    failed = tuple((i, str(r)) for i, r in enumerate(results) if not isinstance(r, ReplicateResult))
    if failed:
        log.warning("%d replicate(s) failed and were excluded", len(failed))
    if len(ok) < 2:
        raise KfplsError(f"only {len(ok)} replicate(s) succeeded; need at least 2 for a summary")
    return BenchmarkResult(
        ok, failed, mc_summarize(r.train for r in ok), mc_summarize(r.test for r in ok)
    )


def _map(fn, arglists, n_jobs):
    if n_jobs and n_jobs > 1:
        with ProcessPoolExecutor(max_workers=n_jobs) as pool:
            futures = [pool.submit(_safe, fn, *a) for a in arglists]
            return [f.result() for f in futures]
    return [_safe(fn, *a) for a in arglists]


def run_benchmark(spec: ScenarioSpec, n_replicates: int = 100, plan: CvPlan = CvPlan(),
                  fit_config: FitConfig = FitConfig(), n_jobs: int = 1, fixed=None) -> BenchmarkResult:
    """Monte Carlo study of one scenario/case; failed replicates are excluded."""
    if n_replicates < 2:
        raise ConfigError("a benchmark needs at least 2 replicates")
    args = [(spec, plan, r, fit_config, fixed) for r in range(n_replicates)]
    return _collect(_map(run_replicate, args, n_jobs))


def split_sizes(n: int, n_train: int = 165, n_test: int = 50, canonical_n: int = 215):
    """Training/test sizes for a dataset of ``n`` rows.

    The canonical dataset uses 165/50; other sizes keep the same proportion.
    """
    if n == canonical_n:
        return n_train, n_test
    test = max(1, int(math.floor(n * n_test / canonical_n + 0.5)))
    if n - test < 3:
        raise ConfigError(f"{n} rows are too few for a train/test split")
    return n - test, test


def run_split(ds: FunctionalDataset, plan: CvPlan, index: int, seed: int, n_test: int,
              fit_config: FitConfig = FitConfig(), fixed=None) -> ReplicateResult:
    split_seed = seed + index
    perm = np.random.default_rng(split_seed).permutation(len(ds))
    test_idx = np.sort(perm[:n_test])
    train_idx = np.sort(perm[n_test:])
    q, gamma, tr, te = fit_and_evaluate(
        ds.subset(train_idx), ds.subset(test_idx), replace(plan, seed=split_seed), fit_config, fixed
    )
    return ReplicateResult(index, split_seed, q, gamma, tr, te)


def run_random_splits(ds: FunctionalDataset, n_splits: int = 100, seed: int = 0,
                      plan: CvPlan = CvPlan(), fit_config: FitConfig = FitConfig(),
                      n_jobs: int = 1, fixed=None) -> BenchmarkResult:
    """Repeated random train/test splits of a real dataset, tuned per split."""
    if ds.responses is None:
        raise ConfigError("dataset has no responses")
    if n_splits < 2:
        raise ConfigError("need at least 2 splits")
    n_train, n_test = split_sizes(len(ds))
    if n_train + n_test != len(ds):
        raise ConfigError("split sizes do not add up")
    if len(ds) != 215:
        log.warning("dataset has %d rows (expected 215); using a %d/%d split", len(ds), n_train, n_test)
    args = [(ds, plan, i, seed, n_test, fit_config, fixed) for i in range(n_splits)]
    return _collect(_map(run_split, args, n_jobs))
