import math

import numpy as np
import pytest

import frakspace as fs
import oracles


def rough_sample(cloud, seed=5):
    """A function with structure at every scale, nowhere locally polynomial."""
    rng = np.random.default_rng(seed)
    x = cloud.points
    vals = np.abs(x[:, 0] - 0.37) ** 0.6 + 0.3 * np.sin(9.0 * x.sum(axis=1))
    vals += 0.05 * rng.standard_normal(cloud.size)
    return vals


class TestDegreeConventions:
    def test_sharp_convention(self):
        assert fs.degree_for_sharp(0.3) == 1
        assert fs.degree_for_sharp(1.0) == 1
        assert fs.degree_for_sharp(1.5) == 2
        assert fs.degree_for_sharp(2.0) == 2

    def test_flat_convention(self):
        assert fs.degree_for_flat(0.3) == 1
        assert fs.degree_for_flat(1.0) == 2
        assert fs.degree_for_flat(1.5) == 2
        assert fs.degree_for_flat(2.0) == 3

    def test_conventions_differ_only_at_integers(self):
        for alpha in (0.3, 0.7, 1.2, 2.6):
            assert fs.degree_for_sharp(alpha) == fs.degree_for_flat(alpha)
        for alpha in (1.0, 2.0, 3.0):
            assert fs.degree_for_flat(alpha) == fs.degree_for_sharp(alpha) + 1

    def test_nonpositive_alpha_rejected(self):
        with pytest.raises(fs.NonpositiveAlpha):
            fs.degree_for_sharp(0.0)
        with pytest.raises(fs.NonpositiveAlpha):
            fs.degree_for_flat(-1.0)

    def test_unknown_variant_rejected(self, interval6):
        with pytest.raises(fs.OutOfRange):
            fs.sharp_maximal(interval6, np.ones(64), 0.5, variant="round")


class TestScaleGrid:
    def test_interval_depth_six_levels(self, interval6):
        grid = fs.ScaleGrid.dyadic(interval6)
        assert list(grid.levels) == [0, 1, 2, 3, 4]
        assert np.allclose(grid.scales, interval6.diam * 2.0 ** -np.arange(5.0))
        assert len(grid) == 5

    def test_finer_than_admissible_rejected(self, interval6):
        with pytest.raises(fs.ScaleTooFine):
            fs.ScaleGrid.dyadic(interval6, nu_max=5)

    def test_window_restriction(self, interval6):
        grid = fs.ScaleGrid.dyadic(interval6, nu_min=2, nu_max=3)
        assert list(grid.levels) == [2, 3]

    def test_empty_window_rejected(self, interval6):
        with pytest.raises(fs.ScaleTooFine):
            fs.ScaleGrid.dyadic(interval6, nu_min=5)

    def test_scales_must_decrease(self):
        with pytest.raises(fs.OutOfRange):
            fs.ScaleGrid(
                scales=np.array([0.5, 1.0]),
                levels=np.array([1, 0]),
                diam=1.0,
                factor=4.0,
            )

    def test_looser_factor_allows_deeper_levels(self, interval6):
        assert len(fs.ScaleGrid.dyadic(interval6, factor=2.0)) == 6


class TestGridFunction:
    def test_wrong_length_rejected(self, dust3):
        with pytest.raises(fs.OutOfRange):
            fs.GridFunction(dust3, np.ones(63))

    def test_non_finite_rejected(self, dust3):
        vals = np.ones(64)
        vals[10] = np.nan
        with pytest.raises(fs.NonFiniteValue):
            fs.GridFunction(dust3, vals)

    def test_values_read_only(self, dust3):
        gf = fs.GridFunction(dust3, np.ones(64))
        with pytest.raises(ValueError):
            gf.values[0] = 2.0


class TestAgainstBruteForce:
    @pytest.mark.parametrize("u", [1.0, 2.0])
    def test_sharp_matches_exhaustive_scan(self, dust3, interval6, u):
        for cloud in (dust3, interval6):
            vals = rough_sample(cloud)
            grid = fs.ScaleGrid.dyadic(cloud)
            got = fs.sharp_maximal(cloud, vals, 0.5, u=u, grid=grid).values
            want = oracles.sharp_maximal_constant_fit(
                cloud, vals, 0.5, u, grid.scales
            )
            assert np.max(np.abs(got - want) / np.abs(want)) <= 1e-6

    @pytest.mark.parametrize("sigma", [1.0, 2.0])
    def test_hl_matches_exhaustive_scan(self, dust3, interval6, sigma):
        for cloud in (dust3, interval6):
            vals = rough_sample(cloud, seed=7)
            grid = fs.ScaleGrid.dyadic(cloud)
            got = fs.hl_maximal(cloud, vals, sigma, grid=grid).values
            want = oracles.hl_maximal(cloud, vals, sigma, grid.scales)
            assert np.max(np.abs(got - want) / np.abs(want)) <= 1e-6


class TestSharpProperties:
    def test_constants_give_zero(self, dust3, interval6):
        for cloud in (dust3, interval6):
            for c in (1.0, -3.7):
                out = fs.sharp_maximal(cloud, np.full(cloud.size, c), 0.5)
                assert np.all(out.values == 0.0)

    def test_covered_polynomials_give_zero(self, dust3):
        x = dust3.points
        linear = 0.4 - 1.3 * x[:, 0] + 0.7 * x[:, 1]
        for u in (1.0, 2.0):
            out = fs.sharp_maximal(dust3, linear, 1.5, u=u)
            assert np.all(out.values == 0.0)

    @pytest.mark.parametrize(
        "lam,u",
        [(2.0, 1.0), (0.5, 1.0), (2.0, 2.0), (0.5, 2.0), (-4.0, 2.0)],
    )
    def test_homogeneity_exact_for_binary_scalars(self, dust3, lam, u):
        vals = rough_sample(dust3)
        base = fs.sharp_maximal(dust3, vals, 0.5, u=u).values
        scaled = fs.sharp_maximal(dust3, lam * vals, 0.5, u=u).values
        assert np.array_equal(scaled, abs(lam) * base)

    def test_homogeneity_close_otherwise(self, dust3):
        # Sign flips reorder the median scan and non-binary scalars or
        # u > 2 round through pow, so equality holds only to the ulp level.
        vals = rough_sample(dust3)
        for lam, u in [(-4.0, 1.0), (3.0, 1.0), (2.0, 3.0)]:
            base = fs.sharp_maximal(dust3, vals, 0.5, u=u).values
            scaled = fs.sharp_maximal(dust3, lam * vals, 0.5, u=u).values
            assert np.allclose(scaled, abs(lam) * base, rtol=1e-12)

    def test_pointwise_ordering_in_u(self, dust3):
        vals = rough_sample(dust3)
        outs = {
            u: fs.sharp_maximal(dust3, vals, 0.5, u=u).values
            for u in (1.0, 2.0, 3.0)
        }
        assert np.all(outs[1.0] <= outs[2.0] * (1.0 + 1e-8))
        assert np.all(outs[2.0] <= outs[3.0] * (1.0 + 1e-8))

    def test_grid_function_input_and_meta(self, dust3):
        gf = fs.GridFunction(dust3, rough_sample(dust3), name="rough")
        out = fs.sharp_maximal(dust3, gf, 0.7, u=2.0)
        assert out.name == "sharp(rough)"
        assert out.meta["k"] == 1
        assert out.meta["u"] == 2.0
        assert out.meta["nu_max"] == 2

    def test_exponent_validation(self, dust3):
        with pytest.raises(fs.OutOfRange):
            fs.sharp_maximal(dust3, np.ones(64), 0.5, u=0.5)
        with pytest.raises(fs.OutOfRange):
            fs.sharp_maximal(dust3, np.ones(64), 0.5, u=math.inf)


class TestErrorMatrix:
    def test_nan_pattern_shared_across_u(self, dust3):
        vals = rough_sample(dust3)
        grid = fs.ScaleGrid.dyadic(dust3, factor=0.5)
        masks = [
            np.isnan(fs.approx_error_matrix(dust3, vals, 1, u, grid))
            for u in (1.0, 2.0, 3.0)
        ]
        assert masks[0].any()
        assert np.array_equal(masks[0], masks[1])
        assert np.array_equal(masks[0], masks[2])

    def test_skips_scales_below_point_quota(self, make_cloud, rng):
        # Two tight four-point clusters far apart: at the small scale each
        # cube sees its own cluster only, below the quota for a planar fit.
        corners = np.repeat([[0.0, 0.0], [1.0, 1.0]], 4, axis=0)
        pts = corners + 0.01 * rng.random((8, 2))
        cloud = make_cloud(pts)
        grid = fs.ScaleGrid(
            scales=np.array([2.0, 0.05]),
            levels=np.array([0, 1]),
            diam=2.0,
            factor=1.0,
        )
        out = fs.approx_error_matrix(cloud, rng.random(8), 2, 1.0, grid)
        assert not np.isnan(out[:, 0]).any()
        assert np.isnan(out[:, 1]).all()

    def test_isolated_point_raises(self, make_cloud):
        pts = [[0.0, 0.0], [0.01, 0.0], [5.0, 5.0]]
        cloud = make_cloud(pts)
        grid = fs.ScaleGrid(
            scales=np.array([0.1]), levels=np.array([0]), diam=7.1, factor=1.0
        )
        with pytest.raises(fs.TooFewPoints):
            fs.approx_error_matrix(cloud, [1.0, 2.0, 3.0], 1, 1.0, grid)

    def test_row_count_matches_cloud(self, interval6):
        grid = fs.ScaleGrid.dyadic(interval6)
        out = fs.approx_error_matrix(interval6, rough_sample(interval6), 2, 2.0, grid)
        assert out.shape == (64, 5)


class TestHlProperties:
    def test_constant_function(self, dust3):
        out = fs.hl_maximal(dust3, np.full(64, -2.0), 1.0)
        assert np.allclose(out.values, 2.0, rtol=1e-12)

    def test_monotone_in_sigma(self, interval6):
        vals = rough_sample(interval6, seed=9)
        m1 = fs.hl_maximal(interval6, vals, 1.0).values
        m2 = fs.hl_maximal(interval6, vals, 2.0).values
        assert np.all(m1 <= m2 * (1.0 + 1e-12))

    def test_bounded_by_sup(self, dust3):
        vals = rough_sample(dust3, seed=11)
        out = fs.hl_maximal(dust3, vals, 2.0).values
        assert np.max(out) <= np.max(np.abs(vals)) * (1.0 + 1e-12)

    def test_sigma_validation(self, dust3):
        with pytest.raises(fs.OutOfRange):
            fs.hl_maximal(dust3, np.ones(64), 0.0)
