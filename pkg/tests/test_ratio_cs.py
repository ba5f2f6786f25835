import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gpcs.errors import EmptyConfidenceSet, GridMismatch
from gpcs.gp import Dataset, GpPrior, GridGaussian, posterior_on_grid, prior_on_grid
from gpcs.kernel import NoiseModel, SeKernelParams, widen
from gpcs.linalg import cholesky_with_jitter
from gpcs.ratio_cs import (
    BandPoint,
    CsConfig,
    RatioGaussian,
    band_arrays,
    band_at,
    band_on_grid,
    cs_radius,
    ratio_gaussian,
    ratio_gaussian_at,
)
from oracles import direct_log_ratio, random_ratio_instance, traverse_radius

PRIOR_B = GpPrior(SeKernelParams(3.0, 1.0), NoiseModel(0.1))


def scalar(mean, var):
    return GridGaussian(np.zeros((1, 1)), np.array([mean]), np.array([[var]]))


def widened(prior, gamma):
    return GpPrior(widen(prior.kernel, gamma), prior.noise, prior.mean_value)


def random_data(rng, t, lo=-10, hi=10):
    xs = rng.uniform(lo, hi, t)
    return Dataset(xs, np.sin(xs) + 0.3 * rng.standard_normal(t))


def general_route(prior, data, x, gamma):
    """Ratio Gaussian on observed + x built from the two grid Gaussians."""
    grid = np.append(data.xs.ravel(), x)
    post = posterior_on_grid(prior, data, grid)
    wide = prior_on_grid(widened(prior, gamma), grid)
    return post, wide, ratio_gaussian(post, wide)


class TestCsConfig:
    @pytest.mark.parametrize(
        "kwargs", [{"alpha": 0.0}, {"alpha": 1.0}, {"gamma": 0.0}, {"beta_power": 0.0}, {"beta_power": 1.5}]
    )
    def test_rejects(self, kwargs):
        with pytest.raises(ValueError):
            CsConfig(**kwargs)

    def test_defaults(self):
        cfg = CsConfig()
        assert (cfg.alpha, cfg.gamma, cfg.beta_power) == (0.05, 1e-2, 1.0)
        assert np.exp(-cfg.log_threshold) == pytest.approx(20.0)


class TestRatioGaussian:
    def test_prior_only_scalar(self):
        r = ratio_gaussian(scalar(0.0, 1.0), scalar(0.0, 1.01))
        assert r.sigma_c[0, 0] == pytest.approx(101.0, rel=1e-10)
        assert r.mu_c[0] == 0.0

    def test_half_variance_scalar(self):
        r = ratio_gaussian(scalar(0.0, 1.0), scalar(0.0, 2.0))
        assert r.sigma_c[0, 0] == pytest.approx(2.0)
        assert r.mu_c[0] == 0.0
        assert r.log_c == pytest.approx(0.5 * np.log(8 * np.pi), rel=1e-12)

    def test_half_variance_identity_by_hand(self):
        r = ratio_gaussian(scalar(0.0, 1.0), scalar(0.0, 2.0))
        for f in (-1.3, 0.0, 2.2):
            lhs = -0.5 * f**2 + 0.5 * np.log(2.0) + 0.25 * f**2
            assert r.log_ratio([f]) == pytest.approx(lhs, abs=1e-12)

    def test_shifted_means(self):
        r = ratio_gaussian(scalar(1.0, 0.5), scalar(-1.0, 1.0))
        # precisions subtract: 1/0.5 - 1 = 1; centre 2*1 - 1*(-1) = 3
        assert r.sigma_c[0, 0] == pytest.approx(1.0)
        assert r.mu_c[0] == pytest.approx(3.0)

    def test_identity_random_instances(self):
        rng = np.random.default_rng(0)
        for i in range(40):
            post, wide = random_ratio_instance(rng, int(rng.integers(1, 9)), (1e-2, 1e-1)[i % 2])
            r = ratio_gaussian(post, wide)
            for f in rng.multivariate_normal(post.mean, wide.cov, size=20):
                assert abs(direct_log_ratio(f, post, wide) - r.log_ratio(f)) < 1e-8

    def test_grid_mismatch(self):
        a = prior_on_grid(PRIOR_B, [0.0, 1.0])
        b = prior_on_grid(widened(PRIOR_B, 0.01), [0.0, 2.0])
        with pytest.raises(GridMismatch):
            ratio_gaussian(a, b)

    def test_sigma_c_positive_definite(self):
        rng = np.random.default_rng(1)
        post, wide = random_ratio_instance(rng, 6, 1e-2)
        r = ratio_gaussian(post, wide)
        assert np.linalg.eigvalsh(r.sigma_c).min() > 0


class TestInformationForm:
    @pytest.mark.parametrize("t", [0, 1, 4, 9])
    def test_matches_general_route(self, t):
        rng = np.random.default_rng(t)
        data = random_data(rng, t)
        x = rng.uniform(-10, 10)
        _, _, ref = general_route(PRIOR_B, data, x, 1e-2)
        got = ratio_gaussian_at(PRIOR_B, data, [x], 1e-2)
        np.testing.assert_allclose(got.mu_c, ref.mu_c, atol=1e-8)
        np.testing.assert_allclose(got.sigma_c, ref.sigma_c, rtol=1e-8, atol=1e-8)
        # log_c alone inherits each route's log-determinant error; the peak does not
        assert got.log_peak == pytest.approx(ref.log_peak, abs=1e-6)

    def test_several_test_points_identity(self):
        rng = np.random.default_rng(5)
        data = random_data(rng, 3)
        tests = np.array([-7.0, 1.5, 8.0])
        r = ratio_gaussian_at(PRIOR_B, data, tests, 0.1)
        post = posterior_on_grid(PRIOR_B, data, r.grid)
        wide = prior_on_grid(widened(PRIOR_B, 0.1), r.grid)
        for f in rng.multivariate_normal(post.mean, post.cov, size=10):
            assert r.log_ratio(f) == pytest.approx(direct_log_ratio(f, post, wide), abs=1e-8)


class TestRadius:
    def unit(self, log_c):
        return RatioGaussian(np.zeros((1, 1)), np.zeros(1), np.eye(1), log_c)

    def test_scalar_closed_form(self):
        r = self.unit(0.5 * np.log(2 * np.pi) + 2.0)
        assert cs_radius(r, CsConfig()) == pytest.approx(3.1610, abs=1e-4)

    def test_powered_is_wider(self):
        r = self.unit(0.5 * np.log(2 * np.pi) + 2.0)
        k = cs_radius(r, CsConfig(beta_power=0.75))
        assert k == pytest.approx(np.sqrt(2 * (2 - np.log(0.05) / 0.75)), rel=1e-12)
        assert k == pytest.approx(3.4631, abs=1e-3)
        assert k > cs_radius(r, CsConfig())

    def test_empty_set(self):
        with pytest.raises(EmptyConfidenceSet):
            cs_radius(self.unit(-10.0), CsConfig())

    @pytest.mark.parametrize("seed", range(4))
    def test_matches_outward_traversal(self, seed):
        rng = np.random.default_rng(seed)
        data = random_data(rng, 3)
        post, wide, r = general_route(PRIOR_B, data, 2.0, 1e-2)
        cfg = CsConfig()
        lower = cholesky_with_jitter(r.sigma_c).lower_factor
        u = rng.standard_normal(r.size)
        u /= np.linalg.norm(u)
        dist = traverse_radius(
            lambda f: direct_log_ratio(f, post, wide), r.mu_c, lower @ u, cfg.log_threshold
        )
        assert dist == pytest.approx(cs_radius(r, cfg), rel=1e-6)


class TestBandAt:
    def test_invariants(self):
        rng = np.random.default_rng(10)
        data = random_data(rng, 5)
        b = band_at(PRIOR_B, data, 0.3, CsConfig())
        assert isinstance(b, BandPoint)
        centre = 0.5 * (b.lower + b.upper)
        assert b.lower <= centre <= b.upper
        assert b.radius_k > 0

    def test_matches_general_projection(self):
        rng = np.random.default_rng(11)
        data = random_data(rng, 6)
        cfg = CsConfig()
        _, _, r = general_route(PRIOR_B, data, -4.0, cfg.gamma)
        k = cs_radius(r, cfg)
        half = k * np.sqrt(r.sigma_c[-1, -1])
        b = band_at(PRIOR_B, data, -4.0, cfg)
        assert b.radius_k == pytest.approx(k, rel=1e-8)
        assert b.lower == pytest.approx(r.mu_c[-1] - half, rel=1e-7, abs=1e-7)
        assert b.upper == pytest.approx(r.mu_c[-1] + half, rel=1e-7, abs=1e-7)

    def test_rejection_sampled_projection(self):
        # one observation plus the test point: a 2-D ellipsoid
        prior = GpPrior(SeKernelParams(1.0, 1.0), NoiseModel(0.1))
        data = Dataset([0.0], [0.6])
        cfg = CsConfig(gamma=0.5)
        post, wide, r = general_route(prior, data, 0.7, cfg.gamma)
        evals, _ = np.linalg.eigh(r.sigma_c)
        reach = 1.05 * cs_radius(r, cfg) * np.sqrt(evals.max())
        rng = np.random.default_rng(12)
        pts = r.mu_c + rng.uniform(-reach, reach, (1_000_000, 2))
        from scipy.stats import multivariate_normal

        inside = (
            multivariate_normal.logpdf(pts, post.mean, post.cov)
            - multivariate_normal.logpdf(pts, wide.mean, wide.cov)
            >= cfg.log_threshold
        )
        b = band_at(prior, data, 0.7, cfg)
        assert pts[inside, 1].min() == pytest.approx(b.lower, abs=0.01)
        assert pts[inside, 1].max() == pytest.approx(b.upper, abs=0.01)

    def test_width_nonincreasing_in_beta(self):
        rng = np.random.default_rng(13)
        data = random_data(rng, 7)
        for x in np.linspace(-10, 10, 9):
            widths = [
                (lambda b: b.upper - b.lower)(band_at(PRIOR_B, data, x, CsConfig(beta_power=beta)))
                for beta in (0.5, 0.75, 1.0)
            ]
            assert widths[0] >= widths[1] >= widths[2]

    @settings(max_examples=30, deadline=None)
    @given(x=st.floats(-10, 10), gamma=st.sampled_from([1e-4, 1e-2, 1e-1]))
    def test_no_data_symmetric(self, x, gamma):
        b = band_at(PRIOR_B, Dataset.empty(), x, CsConfig(gamma=gamma))
        assert b.lower == -b.upper

    @settings(max_examples=40, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1), t=st.integers(1, 12), x=st.floats(-10, 10))
    def test_finite_and_ordered(self, seed, t, x):
        rng = np.random.default_rng(seed)
        xs = rng.choice(np.linspace(-10, 10, 2001), size=t, replace=False)
        data = Dataset(xs, rng.normal(size=t))
        b = band_at(PRIOR_B, data, x, CsConfig(gamma=1e-4))
        assert np.isfinite(b.lower) and np.isfinite(b.upper)
        assert b.lower <= b.upper

    def test_two_dimensional_inputs(self):
        prior = GpPrior(SeKernelParams(2.0, 1.0), NoiseModel(0.1))
        rng = np.random.default_rng(14)
        data = Dataset(rng.uniform(0, 5, (4, 2)), rng.normal(size=4))
        b = band_at(prior, data, [1.0, 2.0], CsConfig())
        assert b.x.shape == (2,)
        assert b.lower < b.upper


class TestBandOnGrid:
    def test_empty_grid(self):
        assert band_on_grid(PRIOR_B, Dataset.empty(), [], CsConfig()) == []

    def test_singleton_equals_band_at(self):
        data = Dataset([1.0, 2.0], [0.1, -0.3])
        (got,) = band_on_grid(PRIOR_B, data, [0.5], CsConfig())
        ref = band_at(PRIOR_B, data, 0.5, CsConfig())
        assert (got.lower, got.upper, got.radius_k) == (ref.lower, ref.upper, ref.radius_k)

    def test_bit_exact_against_band_at(self):
        rng = np.random.default_rng(15)
        data = random_data(rng, 5)
        grid = np.linspace(-10, 10, 50)
        bands = band_on_grid(PRIOR_B, data, grid, CsConfig())
        assert [b.x[0] for b in bands] == list(grid)
        for b, x in zip(bands, grid):
            ref = band_at(PRIOR_B, data, x, CsConfig())
            assert b.lower == ref.lower and b.upper == ref.upper

    def test_batch_composition_irrelevant(self):
        rng = np.random.default_rng(16)
        data = random_data(rng, 8)
        grid = rng.uniform(-10, 10, 30)
        lo_all, hi_all = band_arrays(PRIOR_B, data, grid, CsConfig())
        lo_rev, hi_rev = band_arrays(PRIOR_B, data, grid[::-1], CsConfig())
        np.testing.assert_array_equal(lo_all, lo_rev[::-1])
        np.testing.assert_array_equal(hi_all, hi_rev[::-1])

    def test_band_arrays_match_records(self):
        data = Dataset([0.0], [1.0])
        grid = np.linspace(-3, 3, 7)
        lo, hi = band_arrays(PRIOR_B, data, grid, CsConfig())
        bands = band_on_grid(PRIOR_B, data, grid, CsConfig())
        np.testing.assert_array_equal(lo, [b.lower for b in bands])
        np.testing.assert_array_equal(hi, [b.upper for b in bands])
