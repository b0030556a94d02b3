"""Sampled functional observations and L2 geometry on the product space.

Curves are stored as values on an observation grid.  All integrals use the
composite trapezoid rule on that grid, so every inner product and distance is
exact for the piecewise-linear interpolant of the samples.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import StructuralError

# rows per block when forming pairwise differences; keeps peak memory small
_BLOCK_ELEMS = 1 << 20


def _frozen(a) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Grid:
    """Strictly increasing observation points on a closed interval."""

    points: np.ndarray

    def __post_init__(self):
        pts = _frozen(self.points)
        if pts.ndim != 1 or pts.size < 2:
            raise StructuralError("a grid needs at least 2 points in a 1-d array")
        if not np.all(np.isfinite(pts)):
            raise StructuralError("grid points must be finite")
        if np.any(np.diff(pts) <= 0):
            raise StructuralError("grid points must be strictly increasing")
        object.__setattr__(self, "points", pts)

    def __len__(self) -> int:
        return self.points.size

    def __eq__(self, other) -> bool:
        if not isinstance(other, Grid):
            return NotImplemented
        return self.points.shape == other.points.shape and bool(
            np.array_equal(self.points, other.points)
        )

    def __hash__(self):
        return hash(self.points.tobytes())

    @classmethod
    def uniform(cls, size: int, lower: float = 0.0, upper: float = 1.0) -> "Grid":
        return cls(np.linspace(lower, upper, size))

    @property
    def weights(self) -> np.ndarray:
        """Trapezoid weights ``w`` with ``sum(w * v) == trapezoid_integral(v)``."""
        h = np.diff(self.points)
        w = np.zeros_like(self.points)
        w[:-1] += h / 2
        w[1:] += h / 2
        return w


@dataclass(frozen=True, eq=False)
class SampledCurve:
    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        vals = _frozen(self.values)
        if vals.ndim != 1 or vals.size != len(self.grid):
            raise StructuralError(
                f"curve has {vals.size} values but its grid has {len(self.grid)} points"
            )
        if not np.all(np.isfinite(vals)):
            raise StructuralError("curve values must be finite")
        object.__setattr__(self, "values", vals)


@dataclass(frozen=True, eq=False)
class FunctionalSample:
    """The ``p`` functional predictors observed for one subject."""

    curves: tuple

    def __post_init__(self):
        curves = tuple(self.curves)
        if len(curves) < 1:
            raise StructuralError("a sample needs at least one curve")
        object.__setattr__(self, "curves", curves)

    @property
    def p(self) -> int:
        return len(self.curves)

    @property
    def grids(self) -> tuple:
        return tuple(c.grid for c in self.curves)

    @classmethod
    def from_arrays(cls, grids: Sequence[Grid], values: Sequence) -> "FunctionalSample":
        if len(grids) != len(values):
            raise StructuralError("one grid is needed per curve")
        return cls(tuple(SampledCurve(g, v) for g, v in zip(grids, values)))


def _check_same_structure(a: FunctionalSample, b: FunctionalSample):
    if a.p != b.p:
        raise StructuralError(f"samples have {a.p} and {b.p} curves")
    for j, (ga, gb) in enumerate(zip(a.grids, b.grids)):
        if ga != gb:
            raise StructuralError(f"grids differ for predictor {j + 1}")


class FunctionalDataset:
    """``n`` subjects sharing one grid per predictor, with optional responses.

    Curve values are held as one ``(n, G_j)`` array per predictor ``j``.
    The object is read-only after construction.
    """

    __slots__ = ("grids", "values", "responses")

    def __init__(self, grids: Sequence[Grid], values: Sequence, responses=None):
        grids = tuple(g if isinstance(g, Grid) else Grid(g) for g in grids)
        if len(grids) < 1:
            raise StructuralError("a dataset needs at least one predictor")
        if len(values) != len(grids):
            raise StructuralError(
                f"{len(values)} value blocks supplied for {len(grids)} grids"
            )
        blocks = []
        n = None
        for j, (g, v) in enumerate(zip(grids, values)):
            v = np.array(v, dtype=float)
            if v.ndim == 1:
                v = v[None, :]
            if v.ndim != 2 or v.shape[1] != len(g):
                raise StructuralError(
                    f"predictor {j + 1}: values have shape {v.shape}, grid has {len(g)} points"
                )
            if n is None:
                n = v.shape[0]
            elif v.shape[0] != n:
                raise StructuralError("all predictors must have the same number of rows")
            if not np.all(np.isfinite(v)):
                raise StructuralError(f"predictor {j + 1}: curve values must be finite")
            v.setflags(write=False)
            blocks.append(v)
        if responses is not None:
            responses = _frozen(responses).reshape(-1)
            if responses.size != n:
                raise StructuralError(f"{responses.size} responses for {n} subjects")
            if not np.all(np.isfinite(responses)):
                raise StructuralError("responses must be finite")
        object.__setattr__(self, "grids", grids)
        object.__setattr__(self, "values", tuple(blocks))
        object.__setattr__(self, "responses", responses)

    def __setattr__(self, name, value):
        raise AttributeError("FunctionalDataset is immutable")

    @classmethod
    def from_samples(cls, samples: Iterable[FunctionalSample], responses=None):
        samples = list(samples)
        if not samples:
            raise StructuralError("no samples given")
        first = samples[0]
        for s in samples[1:]:
            _check_same_structure(first, s)
        values = [np.stack([s.curves[j].values for s in samples]) for j in range(first.p)]
        return cls(first.grids, values, responses)

    def __len__(self) -> int:
        return self.values[0].shape[0]

    @property
    def n(self) -> int:
        return len(self)

    @property
    def p(self) -> int:
        return len(self.grids)

    def sample(self, i: int) -> FunctionalSample:
        return FunctionalSample.from_arrays(self.grids, [v[i] for v in self.values])

    @property
    def samples(self) -> list:
        return [self.sample(i) for i in range(len(self))]

    def subset(self, index) -> "FunctionalDataset":
        index = np.asarray(index)
        y = None if self.responses is None else self.responses[index]
        return FunctionalDataset(self.grids, [v[index] for v in self.values], y)

    def with_responses(self, responses) -> "FunctionalDataset":
        return FunctionalDataset(self.grids, self.values, responses)

    def same_structure(self, other: "FunctionalDataset") -> bool:
        return self.p == other.p and all(a == b for a, b in zip(self.grids, other.grids))

    def check_compatible(self, other: "FunctionalDataset"):
        if self.p != other.p:
            raise StructuralError(f"datasets have {self.p} and {other.p} predictors")
        for j, (a, b) in enumerate(zip(self.grids, other.grids)):
            if a != b:
                raise StructuralError(f"grids differ for predictor {j + 1}")


def trapezoid_integral(values, grid: Grid):
    """Composite trapezoid integral of ``values`` over ``grid``.

    ``values`` may carry leading batch axes; the last axis runs over the grid.
    """
    v = np.asarray(values, dtype=float)
    if v.shape[-1:] != (len(grid),):
        raise StructuralError(
            f"values with trailing length {v.shape[-1] if v.ndim else 0} "
            f"do not match a grid of {len(grid)} points"
        )
    h = np.diff(grid.points)
    return np.sum(h * (v[..., 1:] + v[..., :-1]), axis=-1) / 2


def sq_l2_distance(a: FunctionalSample, b: FunctionalSample) -> float:
    """Squared distance in the product space: sum over predictors of the
    integrated squared difference."""
    _check_same_structure(a, b)
    total = 0.0
    for ca, cb in zip(a.curves, b.curves):
        total += float(trapezoid_integral((ca.values - cb.values) ** 2, ca.grid))
    return total


def inner_product(a: FunctionalSample, b: FunctionalSample) -> float:
    _check_same_structure(a, b)
    return float(
        sum(trapezoid_integral(ca.values * cb.values, ca.grid) for ca, cb in zip(a.curves, b.curves))
    )


def pairwise_sq_distances(a: FunctionalDataset, b: FunctionalDataset | None = None) -> np.ndarray:
    """Matrix of squared product-space distances between rows of ``a`` and ``b``.

    Differences are formed explicitly (no norm expansion) so the diagonal of
    ``pairwise_sq_distances(a)`` is exactly zero.
    """
    if b is None:
        b = a
    a.check_compatible(b)
    m, n = len(a), len(b)
    out = np.zeros((m, n))
    for grid, va, vb in zip(a.grids, a.values, b.values):
        step = max(1, _BLOCK_ELEMS // max(1, n * len(grid)))
        for start in range(0, m, step):
            d = va[start:start + step, None, :] - vb[None, :, :]
            out[start:start + step] += trapezoid_integral(d * d, grid)
    return out


def pairwise_inner_products(a: FunctionalDataset, b: FunctionalDataset | None = None) -> np.ndarray:
    if b is None:
        b = a
    a.check_compatible(b)
    out = np.zeros((len(a), len(b)))
    for grid, va, vb in zip(a.grids, a.values, b.values):
        out += (va * grid.weights) @ vb.T
    return out


def rescale_domain(ds: FunctionalDataset) -> FunctionalDataset:
    """Map every grid affinely onto [0, 1]; curve values are left unchanged."""
    grids = []
    for g in ds.grids:
        lo, hi = g.points[0], g.points[-1]
        pts = (g.points - lo) / (hi - lo)
        pts[0], pts[-1] = 0.0, 1.0
        grids.append(Grid(pts))
    return FunctionalDataset(grids, ds.values, ds.responses)
