import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from kfpls.errors import StructuralError
from kfpls.fdata import (
    FunctionalDataset,
    FunctionalSample,
    Grid,
    SampledCurve,
    pairwise_inner_products,
    pairwise_sq_distances,
    rescale_domain,
    sq_l2_distance,
    trapezoid_integral,
)
from kfpls.simgen import BsplineBasis, bspline_eval
from oracles import fine_integral, scipy_basis

finite = st.floats(-1e3, 1e3, allow_nan=False, allow_infinity=False)


def sample(grid, *curves):
    return FunctionalSample.from_arrays([grid] * len(curves), curves)


class TestGrid:
    def test_rejects_bad_points(self):
        with pytest.raises(StructuralError):
            Grid([0.0])
        with pytest.raises(StructuralError):
            Grid([0.0, 0.5, 0.5])
        with pytest.raises(StructuralError):
            Grid([0.0, np.inf])

    def test_points_are_read_only(self):
        g = Grid.uniform(5)
        with pytest.raises(ValueError):
            g.points[0] = 3.0

    def test_weights_match_trapezoid(self, rng):
        g = Grid(np.sort(rng.uniform(0, 1, 30)))
        v = rng.standard_normal(30)
        assert g.weights @ v == pytest.approx(trapezoid_integral(v, g), abs=1e-14)


class TestTrapezoid:
    @pytest.mark.parametrize("pts", [np.linspace(0, 1, 7), [0.0, 0.1, 0.15, 0.7, 1.0]])
    def test_constant(self, pts):
        g = Grid(pts)
        assert trapezoid_integral(np.ones(len(g)), g) == pytest.approx(1.0, abs=1e-15)

    def test_linear_exact(self):
        g = Grid.uniform(101)
        assert trapezoid_integral(g.points, g) == pytest.approx(0.5, abs=1e-15)

    def test_sine_against_fine_quadrature(self):
        g = Grid.uniform(101)
        oracle = fine_integral(lambda t: np.sin(2 * np.pi * t))
        value = trapezoid_integral(np.sin(2 * np.pi * g.points), g)
        assert abs(value - oracle) < 1e-6
        assert abs(value) < 1e-6

    def test_length_mismatch(self):
        with pytest.raises(StructuralError):
            trapezoid_integral(np.ones(4), Grid.uniform(5))

    @given(arrays(float, 12, elements=finite), arrays(float, 12, elements=finite), finite, finite)
    def test_linearity(self, u, v, a, b):
        g = Grid.uniform(12)
        lhs = trapezoid_integral(a * u + b * v, g)
        rhs = a * trapezoid_integral(u, g) + b * trapezoid_integral(v, g)
        scale = 1 + abs(a) * np.abs(u).sum() + abs(b) * np.abs(v).sum()
        assert abs(lhs - rhs) <= 1e-12 * scale


class TestDistance:
    def test_identity_is_zero(self, rng):
        g = Grid.uniform(11)
        a = sample(g, rng.standard_normal(11), rng.standard_normal(11))
        assert sq_l2_distance(a, a) == 0.0

    def test_constant_difference(self):
        g = Grid.uniform(11)
        assert sq_l2_distance(sample(g, np.ones(11)), sample(g, np.zeros(11))) == pytest.approx(1.0)

    def test_random_splines_against_fine_grid(self, rng):
        # dense sampling so trapezoid error is below the 1e-4 target
        G = 2001
        basis, ev = BsplineBasis(), scipy_basis()
        B = bspline_eval(basis, np.linspace(0, 1, G))
        g = Grid.uniform(G)
        ca, cb = rng.standard_normal((2, 23)), rng.standard_normal((2, 23))
        a = sample(g, ca[0] @ B.T, ca[1] @ B.T)
        b = sample(g, cb[0] @ B.T, cb[1] @ B.T)
        oracle = sum(fine_integral(lambda t: ((ca[j] - cb[j]) @ ev(t).T) ** 2) for j in range(2))
        assert sq_l2_distance(a, b) == pytest.approx(oracle, rel=1e-4)

    def test_grid_mismatch(self):
        a = sample(Grid.uniform(5), np.zeros(5))
        b = sample(Grid(np.linspace(0, 2, 5)), np.zeros(5))
        with pytest.raises(StructuralError):
            sq_l2_distance(a, b)
        with pytest.raises(StructuralError):
            sq_l2_distance(a, sample(Grid.uniform(5), np.zeros(5), np.zeros(5)))

    @settings(max_examples=50)
    @given(arrays(float, (2, 9), elements=finite), arrays(float, (2, 9), elements=finite))
    def test_symmetric_nonnegative(self, x, y):
        g = Grid.uniform(9)
        a, b = sample(g, *x), sample(g, *y)
        d = sq_l2_distance(a, b)
        assert d >= 0
        assert d == sq_l2_distance(b, a)
        if np.array_equal(x, y):
            assert d == 0
        elif np.abs(x - y).max() > 1e-100:
            assert d > 0

    def test_pairwise_matches_scalar(self, rng):
        g = Grid(np.sort(np.r_[0, rng.uniform(0, 1, 15), 1]))
        A = FunctionalDataset([g, g], [rng.standard_normal((4, 17)), rng.standard_normal((4, 17))])
        B = FunctionalDataset([g, g], [rng.standard_normal((3, 17)), rng.standard_normal((3, 17))])
        D = pairwise_sq_distances(A, B)
        P = pairwise_inner_products(A, B)
        for i in range(4):
            for h in range(3):
                assert D[i, h] == pytest.approx(sq_l2_distance(A.sample(i), B.sample(h)), rel=1e-13)
                s = sum(trapezoid_integral(A.values[j][i] * B.values[j][h], g) for j in range(2))
                assert P[i, h] == pytest.approx(s, rel=1e-12, abs=1e-14)
        assert np.all(np.diag(pairwise_sq_distances(A)) == 0.0)


class TestDataset:
    def test_round_trip_samples(self, rng):
        g = Grid.uniform(6)
        ds = FunctionalDataset([g, g], [rng.standard_normal((3, 6)), rng.standard_normal((3, 6))], [1, 2, 3])
        again = FunctionalDataset.from_samples(ds.samples, ds.responses)
        assert all(np.array_equal(a, b) for a, b in zip(ds.values, again.values))
        assert ds.subset([2, 0]).responses.tolist() == [3.0, 1.0]

    def test_rejects_mixed_grids(self):
        s1 = sample(Grid.uniform(4), np.zeros(4))
        s2 = sample(Grid(np.linspace(0, 1, 5)), np.zeros(5))
        with pytest.raises(StructuralError):
            FunctionalDataset.from_samples([s1, s2])

    def test_rejects_bad_shapes(self):
        g = Grid.uniform(4)
        with pytest.raises(StructuralError):
            FunctionalDataset([g], [np.zeros((3, 5))])
        with pytest.raises(StructuralError):
            FunctionalDataset([g, g], [np.zeros((3, 4)), np.zeros((2, 4))])
        with pytest.raises(StructuralError):
            FunctionalDataset([g], [np.zeros((3, 4))], [1.0, 2.0])
        with pytest.raises(StructuralError):
            FunctionalDataset([g], [np.zeros((2, 4))], [1.0, np.nan])
        with pytest.raises(StructuralError):
            SampledCurve(g, [0.0, 1.0, np.nan, 2.0])

    def test_immutable(self, rng):
        ds = FunctionalDataset([Grid.uniform(3)], [np.zeros((2, 3))], [0.0, 1.0])
        with pytest.raises(AttributeError):
            ds.responses = None
        with pytest.raises(ValueError):
            ds.values[0][0, 0] = 1.0


class TestRescale:
    @pytest.mark.parametrize(
        "pts, expected",
        [([850, 950, 1050], [0, 0.5, 1]), ([0, 0.25, 1], [0, 0.25, 1]), ([2, 4], [0, 1])],
    )
    def test_affine_map(self, pts, expected):
        ds = FunctionalDataset([Grid(pts)], [np.arange(len(pts), dtype=float)])
        out = rescale_domain(ds)
        assert out.grids[0].points.tolist() == pytest.approx(expected, abs=1e-15)
        assert np.array_equal(out.values[0], ds.values[0])

    def test_degenerate_grid_rejected(self):
        with pytest.raises(StructuralError):
            Grid([850.0])
