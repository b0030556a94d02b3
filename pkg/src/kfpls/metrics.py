"""Prediction error metrics and Monte Carlo summaries."""

from __future__ import annotations

import statistics
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, StructuralError, UndefinedMetricError


def _pair(y_hat, y):
    y_hat = np.asarray(y_hat, dtype=float).reshape(-1)
    y = np.asarray(y, dtype=float).reshape(-1)
    if y_hat.size != y.size:
        raise StructuralError(f"{y_hat.size} predictions for {y.size} responses")
    if y.size == 0:
        raise StructuralError("metrics need at least one observation")
    return y_hat, y


def rase(y_hat, y) -> float:
    """Root average squared error."""
    y_hat, y = _pair(y_hat, y)
    return float(np.sqrt(np.mean((y_hat - y) ** 2)))


def arpe(y_hat, y) -> float:
    """Average absolute error relative to ``max |y|`` of the same split."""
    y_hat, y = _pair(y_hat, y)
    y_max = np.max(np.abs(y))
    if y_max == 0:
        raise UndefinedMetricError("ARPE is undefined when every response is zero")
    return float(np.mean(np.abs(y_hat - y)) / y_max)


@dataclass(frozen=True)
class EvalReport:
    rase: float
    arpe: float
    n: int
    y_max_abs: float


def evaluate(y_hat, y) -> EvalReport:
    y_hat, y = _pair(y_hat, y)
    return EvalReport(rase(y_hat, y), arpe(y_hat, y), int(y.size), float(np.max(np.abs(y))))


@dataclass(frozen=True)
class McSummary:
    mean_rase: float
    sd_rase: float
    mean_arpe: float
    sd_arpe: float
    n_runs: int

    def format(self, digits: int = 4) -> tuple:
        """``("mean (sd)", "mean (sd)")`` strings for RASE and ARPE."""
        f = f"{{:.{digits}f}} ({{:.{digits}f}})"
        return f.format(self.mean_rase, self.sd_rase), f.format(self.mean_arpe, self.sd_arpe)


def mc_summarize(reports) -> McSummary:
    reports = list(reports)
    if len(reports) < 2:
        raise ConfigError("a Monte Carlo summary needs at least 2 reports")
    # statistics works in exact rationals, so identical reports give sd == 0
    r = [float(x.rase) for x in reports]
    a = [float(x.arpe) for x in reports]
    return McSummary(
        statistics.mean(r), statistics.stdev(r), statistics.mean(a), statistics.stdev(a), len(reports)
    )
