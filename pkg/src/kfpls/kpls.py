"""Kernel PLS by NIPALS with Gram deflation, and prediction from the scores.

The response is centered before fitting and its mean restored on output.
Score vectors are extracted from a working copy of the centered Gram that is
deflated after every component; the output formulas use the undeflated
centered Gram ``Kc``::

    yhat  = Kc  U (T' Kc U)^{-1} T' yc + ybar
    yhat0 = K0c U (T' Kc U)^{-1} T' yc + ybar
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
import scipy.linalg

from .errors import ConfigError, ConvergenceError, RankExhaustionError, SingularSystemError, StructuralError
from .fdata import FunctionalDataset
from .kernel import GramBundle, KernelSpec, cross_gram, gram

# relative size below which a score direction counts as annihilated
RANK_TOL = 1e-12
MAX_CONDITION = 1e12

INITS = ("response", "random")


@dataclass(frozen=True)
class FitConfig:
    """NIPALS settings.

    ``init="response"`` starts each component from the normalized working
    response, which is the fixed point for a scalar response, so the loop
    converges after one pass.  ``init="random"`` draws a standard normal
    start from ``seed`` instead.
    """

    n_components: int = 2
    tol: float = 1e-8
    max_iter: int = 100
    init: str = "response"
    seed: int = 0

    def __post_init__(self):
        if int(self.n_components) != self.n_components or self.n_components < 1:
            raise ConfigError(f"n_components must be a positive integer, got {self.n_components!r}")
        if not self.tol > 0:
            raise ConfigError("tol must be positive")
        if int(self.max_iter) != self.max_iter or self.max_iter < 1:
            raise ConfigError("max_iter must be a positive integer")
        if self.init not in INITS:
            raise ConfigError(f"init must be one of {INITS}")


class Component(NamedTuple):
    t: np.ndarray
    u: np.ndarray
    n_iter: int


def _unit(v, scale, what, component=None):
    nv = np.linalg.norm(v)
    if nv == 0 or nv <= RANK_TOL * scale:
        raise RankExhaustionError(
            f"{what} vanished at component {component}; use fewer components",
            component=component,
        )
    return v / nv


def nipals_component(K_work, y_work, cfg: FitConfig = FitConfig(), *, rng=None,
                     k_scale=None, component=None) -> Component:
    """Extract one score pair ``(t, u)`` from a working Gram and response.

    Alternates ``t = K u / |K u|`` and ``u = y y't / |y y't|`` until
    successive ``t`` differ by less than ``cfg.tol`` in 2-norm (after sign
    alignment).  ``k_scale`` is the reference norm used to decide that
    ``K u`` has vanished; it defaults to the Frobenius norm of ``K_work``.
    """
    K = np.asarray(K_work, dtype=float)
    y = np.asarray(y_work, dtype=float).reshape(-1)
    if K.shape != (y.size, y.size):
        raise StructuralError(f"Gram of shape {K.shape} does not match {y.size} responses")
    if k_scale is None:
        k_scale = np.linalg.norm(K)
    if cfg.init == "random":
        rng = np.random.default_rng(cfg.seed) if rng is None else rng
        u = _unit(rng.standard_normal(y.size), 1.0, "initial u", component)
    else:
        u = _unit(y, 0.0, "working response", component)

    t = _unit(K @ u, k_scale, "K u", component)
    for it in range(1, cfg.max_iter + 1):
        u = _unit(y * (y @ t), 0.0, "working response", component)
        t_new = _unit(K @ u, k_scale, "K u", component)
        if t_new @ t < 0:
            t_new = -t_new
        step = np.linalg.norm(t_new - t)
        t = t_new
        if step < cfg.tol:
            break
    else:
        raise ConvergenceError(
            f"NIPALS did not converge in {cfg.max_iter} iterations (last step {step:.3g})",
            t=t, u=u,
        )
    if t @ y < 0:
        t, u = -t, -u
    return Component(t, u, it)


def nipals_scores(Kc, yc, n_components: int, cfg: FitConfig = FitConfig(), *, partial=False):
    """Run NIPALS with deflation for up to ``n_components`` components.

    Returns ``(T, U)`` with one column per component.  With ``partial=True`` a
    rank exhaustion stops the loop and the components found so far are
    returned; otherwise the error propagates.
    """
    Kc = np.asarray(Kc, dtype=float)
    yc = np.asarray(yc, dtype=float).reshape(-1)
    n = yc.size
    if n_components > n - 1:
        raise ConfigError(f"n_components={n_components} exceeds n - 1 = {n - 1}")
    K = Kc.copy()
    y = yc.copy()
    k_scale = np.linalg.norm(Kc)
    y_scale = np.linalg.norm(yc)
    rng = np.random.default_rng(cfg.seed) if cfg.init == "random" else None
    ts, us = [], []
    for comp in range(1, n_components + 1):
        if comp > 1 and np.linalg.norm(y) <= RANK_TOL * y_scale:
            if partial:
                break
            raise RankExhaustionError(
                f"response fully explained before component {comp}; use fewer components",
                component=comp,
            )
        try:
            t, u, _ = nipals_component(K, y, cfg, rng=rng, k_scale=k_scale, component=comp)
        except RankExhaustionError:
            if partial and comp > 1:
                break
            raise
        ts.append(t)
        us.append(u)
        # K <- (I - tt') K (I - tt'),  y <- y - t t'y
        Kt = K @ t
        tKt = t @ Kt
        K = K - np.outer(t, Kt) - np.outer(Kt, t) + tKt * np.outer(t, t)
        y = y - t * (t @ y)
    return np.column_stack(ts), np.column_stack(us)


def solve_coef(Kc, T, U, yc) -> np.ndarray:
    """Dual coefficients ``U (T' Kc U)^{-1} T' yc``."""
    M = T.T @ Kc @ U
    cond = np.linalg.cond(M)
    if not np.isfinite(cond) or cond > MAX_CONDITION:
        raise SingularSystemError(
            f"T'KU is ill-conditioned (cond={cond:.3g}); use fewer components or another gamma"
        )
    lu = scipy.linalg.lu_factor(M)
    return U @ scipy.linalg.lu_solve(lu, T.T @ yc)


@dataclass(frozen=True, eq=False)
class KfplsModel:
    spec: KernelSpec
    T: np.ndarray
    U: np.ndarray
    K_raw: np.ndarray
    K_c: np.ndarray
    coef: np.ndarray
    y_mean: float
    train: FunctionalDataset
    config: FitConfig = FitConfig()

    @property
    def n_components(self) -> int:
        return self.T.shape[1]

    def fitted_values(self) -> np.ndarray:
        return self.K_c @ self.coef + self.y_mean

    def predict(self, new_samples: FunctionalDataset) -> np.ndarray:
        return predict(self, new_samples)


def fit_gram(G: GramBundle, y, cfg: FitConfig):
    """Fit on a precomputed Gram; returns ``(T, U, coef, y_mean)``."""
    y = np.asarray(y, dtype=float).reshape(-1)
    if y.size < 3:
        raise ConfigError("fitting needs at least 3 subjects")
    y_mean = float(y.mean())
    yc = y - y_mean
    if np.linalg.norm(yc) <= RANK_TOL * max(np.linalg.norm(y), 1.0):
        raise RankExhaustionError("response is constant; nothing to fit", component=1)
    T, U = nipals_scores(G.centered, yc, cfg.n_components, cfg)
    coef = solve_coef(G.centered, T, U, yc)
    return T, U, coef, y_mean


def fit(train: FunctionalDataset, spec: KernelSpec, cfg: FitConfig) -> KfplsModel:
    if train.responses is None:
        raise StructuralError("training data has no responses")
    if len(train) < 3:
        raise ConfigError("fitting needs at least 3 subjects")
    G = gram(train, spec)
    T, U, coef, y_mean = fit_gram(G, train.responses, cfg)
    for a in (T, U, coef):
        a.setflags(write=False)
    return KfplsModel(spec, T, U, G.raw, G.centered, coef, y_mean, train, cfg)


def predict(model: KfplsModel, new_samples: FunctionalDataset) -> np.ndarray:
    model.train.check_compatible(new_samples)
    C = cross_gram(new_samples, model.train, model.spec, model.K_raw)
    return C.centered @ model.coef + model.y_mean
