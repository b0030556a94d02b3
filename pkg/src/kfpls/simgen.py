"""Simulated functional regression data.

Covariate curves are random cubic B-spline combinations with standard normal
coefficients; responses follow one of three nonlinear models built from the
coefficient functions ``2 sin(2 pi t)`` and ``2 cos(2 pi t)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .errors import ConfigError
from .fdata import FunctionalDataset, FunctionalSample, Grid, trapezoid_integral

SCENARIO_CASES = {1: (1, 2, 3, 4), 2: (1, 2), 3: (1,)}


@dataclass(frozen=True, eq=False)
class BsplineBasis:
    """Clamped B-spline basis on [0, 1] with equally spaced breakpoints.

    ``n_breaks`` counts the breakpoints including both endpoints, so the
    default (order 4, 21 breakpoints) has 19 interior knots and 23 functions.
    """

    order: int = 4
    n_breaks: int = 21
    knots: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if self.order < 1 or self.n_breaks < 2:
            raise ConfigError("B-spline basis needs order >= 1 and at least 2 breakpoints")
        breaks = np.linspace(0.0, 1.0, self.n_breaks)
        knots = np.concatenate([np.zeros(self.order - 1), breaks, np.ones(self.order - 1)])
        knots.setflags(write=False)
        object.__setattr__(self, "knots", knots)

    @property
    def breakpoints(self) -> np.ndarray:
        return np.linspace(0.0, 1.0, self.n_breaks)

    @property
    def n_basis(self) -> int:
        return self.n_breaks + self.order - 2


def bspline_eval(basis: BsplineBasis, t) -> np.ndarray:
    """Evaluate every basis function at ``t`` by the Cox-de Boor recursion.

    Returns shape ``(n_basis,)`` for scalar ``t`` and ``(len(t), n_basis)``
    otherwise.  The right endpoint belongs to the last knot span.
    """
    scalar = np.ndim(t) == 0
    x = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(~np.isfinite(x)) or np.any(x < 0.0) or np.any(x > 1.0):
        raise ConfigError("B-spline evaluation points must lie in [0, 1]")
    k = basis.knots
    n_spans = k.size - 1
    # order-1 indicators; the last nonempty span is closed on the right
    last = int(np.nonzero(k[:-1] < k[1:])[0][-1])
    B = np.zeros((x.size, n_spans))
    for i in range(n_spans):
        if k[i] < k[i + 1]:
            hi = x <= k[i + 1] if i == last else x < k[i + 1]
            B[:, i] = (x >= k[i]) & hi
    for d in range(1, basis.order):
        nxt = np.zeros((x.size, n_spans - d))
        for i in range(n_spans - d):
            left = k[i + d] - k[i]
            right = k[i + d + 1] - k[i + 1]
            if left > 0:
                nxt[:, i] += (x - k[i]) / left * B[:, i]
            if right > 0:
                nxt[:, i] += (k[i + d + 1] - x) / right * B[:, i + 1]
        B = nxt
    return B[0] if scalar else B


def beta1(t):
    return 2.0 * np.sin(2.0 * np.pi * np.asarray(t))


def beta2(t):
    return 2.0 * np.cos(2.0 * np.pi * np.asarray(t))


def _sinc10(x):
    x = np.asarray(x, dtype=float)
    safe = np.where(x == 0.0, 1.0, x)
    return np.where(x == 0.0, 10.0, 10.0 * np.sin(safe) / safe)


def _cos_half_pi(x):
    return np.cos(np.pi * np.asarray(x) / 2)


def _sin_half_pi(x):
    return np.sin(np.pi * np.asarray(x) / 2)


_S1_LINKS = {
    1: lambda x: np.asarray(x, dtype=float),
    2: lambda x: np.asarray(x, dtype=float) ** 2,
    3: _cos_half_pi,
    4: _sinc10,
}
_S2_LINKS = {
    1: (_cos_half_pi, _sin_half_pi),
    2: (_cos_half_pi, lambda x: np.asarray(x, dtype=float) ** 2),
}


def _check_case(scenario, case):
    if scenario not in SCENARIO_CASES or case not in SCENARIO_CASES[scenario]:
        raise ConfigError(f"no case {case} in scenario {scenario}")


def link_value(scenario: int, case: int, z):
    """Apply the link of (scenario, case).

    Scenario 1 takes a single index ``z``; scenario 2 takes a pair
    ``(z1, z2)`` and returns ``g1(z1) + g2(z2)``.
    """
    _check_case(scenario, case)
    if scenario == 1:
        out = _S1_LINKS[case](z)
    elif scenario == 2:
        z1, z2 = z
        g1, g2 = _S2_LINKS[case]
        out = g1(z1) + g2(z2)
    else:
        raise ConfigError("scenario 3 has no link function")
    return float(out) if np.ndim(out) == 0 else out


def _indices(values1, values2, grid: Grid):
    pts = grid.points
    z1 = trapezoid_integral(values1 * beta1(pts), grid)
    z2 = trapezoid_integral(values2 * beta2(pts), grid)
    return z1, z2


def _truth_arrays(scenario, case, v1, v2, grid):
    if scenario == 3:
        t = grid.points
        return trapezoid_integral(t * np.sin(v1), grid) + trapezoid_integral(t * np.cos(v2), grid)
    z1, z2 = _indices(v1, v2, grid)
    if scenario == 1:
        return _S1_LINKS[case](z1 + z2)
    g1, g2 = _S2_LINKS[case]
    return g1(z1) + g2(z2)


def _two_curves(sample: FunctionalSample):
    if sample.p != 2:
        raise ConfigError(f"simulation models use 2 predictors, sample has {sample.p}")
    c1, c2 = sample.curves
    if c1.grid != c2.grid:
        raise ConfigError("both predictors must share one grid")
    return c1.values, c2.values, c1.grid


def truth_value_S1_S2(sample: FunctionalSample, scenario: int, case: int) -> float:
    _check_case(scenario, case)
    if scenario == 3:
        raise ConfigError("use truth_value_S3 for scenario 3")
    v1, v2, grid = _two_curves(sample)
    return float(_truth_arrays(scenario, case, v1, v2, grid))


def truth_value_S3(sample: FunctionalSample) -> float:
    v1, v2, grid = _two_curves(sample)
    return float(_truth_arrays(3, 1, v1, v2, grid))


def truth_values(ds: FunctionalDataset, scenario: int, case: int) -> np.ndarray:
    """Noise-free responses for every subject of ``ds``."""
    _check_case(scenario, case)
    if ds.p != 2 or ds.grids[0] != ds.grids[1]:
        raise ConfigError("simulation models use 2 predictors on one grid")
    return np.asarray(_truth_arrays(scenario, case, ds.values[0], ds.values[1], ds.grids[0]), dtype=float)


@dataclass(frozen=True)
class ScenarioSpec:
    scenario: int = 1
    case: int = 1
    n_train: int = 200
    n_test: int = 500
    noise_sd: float = 0.05
    grid_size: int = 101
    seed: int = 0
    order: int = 4
    n_breaks: int = 21

    def __post_init__(self):
        _check_case(self.scenario, self.case)
        if self.n_train < 1 or self.n_test < 1:
            raise ConfigError("n_train and n_test must be positive")
        if not self.noise_sd >= 0:
            raise ConfigError("noise_sd must be nonnegative")
        if self.grid_size < 2:
            raise ConfigError("grid_size must be at least 2")

    def with_seed(self, seed: int) -> "ScenarioSpec":
        return replace(self, seed=seed)


@dataclass(frozen=True, eq=False)
class GeneratedData:
    spec: ScenarioSpec
    train: FunctionalDataset
    test: FunctionalDataset
    truth_train: np.ndarray
    truth_test: np.ndarray


def gen_covariates(n: int, basis: BsplineBasis, grid: Grid, rng, coefficients=None) -> list:
    """Draw ``n`` two-curve samples.

    Coefficients are drawn as one ``(n, 2, n_basis)`` standard normal block
    (subject-major: first curve then second curve).  Passing ``coefficients``
    of that shape bypasses the draw.
    """
    return make_covariates(n, basis, grid, rng, coefficients).samples


def make_covariates(n, basis, grid, rng, coefficients=None) -> FunctionalDataset:
    if n < 1:
        raise ConfigError("n must be at least 1")
    if coefficients is None:
        coefficients = rng.standard_normal((n, 2, basis.n_basis))
    coefficients = np.asarray(coefficients, dtype=float)
    if coefficients.shape != (n, 2, basis.n_basis):
        raise ConfigError(f"coefficients must have shape {(n, 2, basis.n_basis)}")
    B = bspline_eval(basis, grid.points)
    return FunctionalDataset([grid, grid], [coefficients[:, 0] @ B.T, coefficients[:, 1] @ B.T])


def generate(spec: ScenarioSpec) -> GeneratedData:
    """Generate train and test splits.

    One PCG64 stream seeded by ``spec.seed`` is consumed in this order:
    train coefficients, train noise, test coefficients, test noise.
    """
    rng = np.random.default_rng(spec.seed)
    basis = BsplineBasis(spec.order, spec.n_breaks)
    grid = Grid.uniform(spec.grid_size)
    splits = []
    for n in (spec.n_train, spec.n_test):
        X = make_covariates(n, basis, grid, rng)
        truth = truth_values(X, spec.scenario, spec.case)
        noise = rng.standard_normal(n) * spec.noise_sd
        splits.append((X.with_responses(truth + noise), truth))
    (train, truth_tr), (test, truth_te) = splits
    truth_tr.setflags(write=False)
    truth_te.setflags(write=False)
    return GeneratedData(spec, train, test, truth_tr, truth_te)
