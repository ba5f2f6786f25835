"""Regularized prior-posterior ratio and the confidence bands it induces.

The ratio ``GP_t(f) / GP~_0(f)`` between the working posterior and a
slightly widened prior is proportional to a Gaussian density
``c * N(f | mu_c, Sigma_c)``. Its superlevel set at ``alpha`` is an
ellipsoid; projecting that ellipsoid onto one coordinate gives a
confidence interval for the function value there.

Two constructions are provided:

* :func:`ratio_gaussian` works from any pair of grid Gaussians and is
  the literal matrix-algebra route.
* :func:`ratio_gaussian_at` uses the fact that, on a grid containing
  every observed input, ``Sigma_c^{-1} = K_0^{-1} gamma / (1 + gamma) +
  H^T H / eta^2``. The ratio Gaussian is then the GP posterior under the
  prior inflated by ``(1 + gamma) / gamma``, and the radius only needs
  ``t x t`` matrices that stay well conditioned. :func:`band_at` and
  :func:`band_on_grid` use this route.
"""
from dataclasses import dataclass

import numpy as np

from gpcs import linalg
from gpcs.errors import BandError, EmptyConfidenceSet, GridMismatch, NotPositiveDefinite
from gpcs.gp import data_factor
from gpcs.kernel import as_points, cross_kernel, kernel_matrix
from gpcs.linalg import LOG_2PI


@dataclass(frozen=True)
class CsConfig:
    alpha: float = 0.05
    gamma: float = 1e-2
    beta_power: float = 1.0

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise ValueError(f"alpha must lie in (0, 1), got {self.alpha}")
        if not self.gamma > 0.0:
            raise ValueError(f"gamma must be positive, got {self.gamma}")
        if not 0.0 < self.beta_power <= 1.0:
            raise ValueError(f"beta_power must lie in (0, 1], got {self.beta_power}")

    @property
    def log_threshold(self):
        """Log of ``alpha ** (1 / beta)``, the level the ratio density must exceed."""
        return np.log(self.alpha) / self.beta_power


@dataclass(frozen=True)
class RatioGaussian:
    grid: np.ndarray
    mu_c: np.ndarray
    sigma_c: np.ndarray
    log_c: float
    log_det_sigma_c: float = None

    def __post_init__(self):
        if self.log_det_sigma_c is None:
            fac = linalg.cholesky_with_jitter(self.sigma_c)
            object.__setattr__(self, "log_det_sigma_c", linalg.log_det_spd(fac))

    @property
    def size(self):
        return self.mu_c.shape[0]

    @property
    def log_peak(self):
        """Log of the ratio at its maximizer ``mu_c``."""
        return self.log_c - 0.5 * self.size * LOG_2PI - 0.5 * self.log_det_sigma_c

    def log_ratio(self, f):
        """``log c + log N(f | mu_c, Sigma_c)``."""
        fac = linalg.cholesky_with_jitter(self.sigma_c)
        return self.log_c + linalg.log_mvn_density(f, self.mu_c, fac)


@dataclass(frozen=True)
class BandPoint:
    x: np.ndarray
    lower: float
    upper: float
    radius_k: float


def ratio_gaussian(posterior, widened_prior):
    """Gaussian form of ``posterior(f) / widened_prior(f)`` on a shared grid.

    With ``A`` the posterior covariance, ``B`` the widened prior
    covariance and ``D = B - A``, this uses
    ``Sigma_c = (A^{-1} - B^{-1})^{-1} = A + A D^{-1} A`` and
    ``mu_c = mu_t + A D^{-1} (mu_t - mu~_0)`` so neither ``A`` nor ``B``
    is ever inverted directly.

    Raises
    ------
    GridMismatch
        If the two Gaussians live on different grids.
    NotPositiveDefinite
        If ``B - A`` cannot be factored, which means gamma is too small
        for the conditioning of the problem.
    """
    if posterior.grid.shape != widened_prior.grid.shape or not np.array_equal(
        posterior.grid, widened_prior.grid
    ):
        raise GridMismatch("posterior and widened prior are on different grids")
    a = posterior.cov
    b = widened_prior.cov
    m = posterior.size
    delta = posterior.mean - widened_prior.mean
    d_fac = linalg.cholesky_with_jitter(b - a)
    sigma_c = a + a @ linalg.solve_spd(d_fac, a)
    sigma_c = 0.5 * (sigma_c + sigma_c.T)
    d_inv_delta = linalg.solve_spd(d_fac, delta)
    mu_c = posterior.mean + a @ d_inv_delta
    log_det_b = linalg.log_det_spd(linalg.cholesky_with_jitter(b))
    log_c = (
        log_det_b
        - 0.5 * linalg.log_det_spd(d_fac)
        + 0.5 * m * LOG_2PI
        + 0.5 * float(delta @ d_inv_delta)
    )
    return RatioGaussian(posterior.grid, mu_c, sigma_c, float(log_c))


def cs_radius(r, cfg):
    """Mahalanobis radius of the set where the ratio density exceeds the threshold.

    Solves ``log c + log N(f | mu_c, Sigma_c) = log(alpha) / beta`` for
    ``(f - mu_c)^T Sigma_c^{-1} (f - mu_c)``.
    """
    slack = r.log_peak - cfg.log_threshold
    if not slack >= 0.0:
        raise EmptyConfidenceSet(
            f"ratio density peaks at log {r.log_peak:.4g}, below the "
            f"threshold log {cfg.log_threshold:.4g}"
        )
    return float(np.sqrt(2.0 * slack))


class _BandContext:
    """Per-dataset quantities shared by every test point's band.

    For a grid made of the ``t`` observed inputs plus one test point,
    the squared radius is

        (t + 1) log(1 + gamma) + log|I + K / eta^2|
        + r^T (K + eta^2 I)^{-1} r - r^T (s K + eta^2 I)^{-1} r
        - 2 log(alpha) / beta

    with ``r`` the centred observations and ``s = (1 + gamma) / gamma``.
    """

    def __init__(self, prior, data, cfg):
        self.prior = prior
        self.data = data
        self.cfg = cfg
        self.scale = (1.0 + cfg.gamma) / cfg.gamma
        t = len(data)
        self.t = t
        resid = data.ys - prior.mean_value
        eta2 = prior.noise.noise_variance
        log_peak = 0.5 * (t + 1) * np.log1p(cfg.gamma)
        if t:
            plain = data_factor(prior, data)
            gram = self.scale * kernel_matrix(data.xs, prior.kernel)
            gram[np.diag_indices_from(gram)] += eta2
            self.inflated = linalg.cholesky_with_jitter(gram)
            self.weights = linalg.solve_spd(self.inflated, resid)
            quad_plain = float(resid @ linalg.solve_spd(plain, resid))
            quad_inflated = float(resid @ self.weights)
            log_det = linalg.log_det_spd(plain) - t * np.log(eta2)
            log_peak += 0.5 * (log_det + quad_plain - quad_inflated)
        self.log_peak = float(log_peak)
        slack = self.log_peak - cfg.log_threshold
        if not slack >= 0.0:
            raise EmptyConfidenceSet(
                f"ratio density peaks at log {self.log_peak:.4g}, below the "
                f"threshold log {cfg.log_threshold:.4g}"
            )
        self.radius = float(np.sqrt(2.0 * slack))

    def marginals(self, points):
        """Centres and variances of the ratio Gaussian at each point.

        Every column is computed by the same fixed sequence of
        elementwise operations, so a point's result does not depend on
        which other points share the batch.
        """
        p = self.prior
        s = self.scale
        n = points.shape[0]
        prior_var = np.full(n, s * p.kernel.signal_variance)
        centre = np.full(n, float(p.mean_value))
        if self.t == 0:
            return centre, prior_var
        k = s * cross_kernel(self.data.xs, points, p.kernel)
        lower = self.inflated.lower_factor
        v = np.empty_like(k)
        quad = np.zeros(n)
        acc = np.zeros(n)
        for i in range(self.t):
            row = k[i].copy()
            for j in range(i):
                row -= lower[i, j] * v[j]
            v[i] = row / lower[i, i]
            quad += v[i] * v[i]
            acc += k[i] * self.weights[i]
        return centre + acc, np.clip(prior_var - quad, 0.0, None)

    def bands(self, points):
        points = as_points(points)
        centre, var = self.marginals(points)
        half = self.radius * np.sqrt(var)
        return centre - half, centre + half

    def band(self, x):
        x = as_points(np.atleast_1d(x).reshape(1, -1))
        lower, upper = self.bands(x)
        return BandPoint(x[0], float(lower[0]), float(upper[0]), self.radius)


def ratio_gaussian_at(prior, data, test_points, gamma):
    """Ratio Gaussian on the grid ``observed inputs + test_points``.

    The observed inputs come first, in arrival order. ``log_c`` relies on
    a log-determinant of ``Sigma_c`` and is therefore only as accurate as
    that factorization; the radius does not depend on it.
    """
    test_points = as_points(test_points)
    cfg = CsConfig(alpha=0.5, gamma=gamma)
    ctx = _BandContext(prior, data, cfg)
    grid = np.vstack([data.xs, test_points]) if len(data) else test_points
    m = grid.shape[0]
    s = ctx.scale
    kg = s * kernel_matrix(grid, prior.kernel)
    mu_c = np.full(m, float(prior.mean_value))
    sigma_c = kg
    if len(data):
        k_xg = s * cross_kernel(data.xs, grid, prior.kernel)
        v = linalg.whiten(ctx.inflated, k_xg)
        mu_c = mu_c + k_xg.T @ ctx.weights
        sigma_c = kg - v.T @ v
    sigma_c = 0.5 * (sigma_c + sigma_c.T)
    # context was built for t + 1 grid points; rescale the volume term to m
    log_peak = ctx.log_peak + 0.5 * (m - len(data) - 1) * np.log1p(gamma)
    log_det = linalg.log_det_spd(linalg.cholesky_with_jitter(sigma_c))
    log_c = log_peak + 0.5 * m * LOG_2PI + 0.5 * log_det
    return RatioGaussian(grid, mu_c, sigma_c, float(log_c), log_det)


def band_at(prior, data, x_test, cfg):
    """Confidence interval for ``f(x_test)`` from the ellipsoid on observed inputs + ``x_test``."""
    return _BandContext(prior, data, cfg).band(x_test)


def band_on_grid(prior, data, plot_grid, cfg):
    """Independent :func:`band_at` intervals for every point of ``plot_grid``.

    Each point gets its own grid (observed inputs plus that point); the
    points are only batched for speed and match :func:`band_at` exactly.

    Raises
    ------
    BandError
        Carrying the offending point and the underlying error.
    """
    lower, upper, radius, pts = _band_batch(prior, data, plot_grid, cfg)
    return [BandPoint(x, float(lo), float(hi), radius) for x, lo, hi in zip(pts, lower, upper)]


def _band_batch(prior, data, plot_grid, cfg):
    pts = as_points(plot_grid) if np.size(plot_grid) else np.zeros((0, max(data.dim, 1)))
    if pts.shape[0] == 0:
        return np.zeros(0), np.zeros(0), float("nan"), pts
    try:
        ctx = _BandContext(prior, data, cfg)
    except (EmptyConfidenceSet, NotPositiveDefinite) as err:
        raise BandError(pts[0], err) from err
    lower, upper = ctx.bands(pts)
    bad = ~(np.isfinite(lower) & np.isfinite(upper))
    if np.any(bad):
        x = pts[int(np.argmax(bad))]
        raise BandError(x, NotPositiveDefinite("non-finite band"))
    return lower, upper, ctx.radius, pts


def band_arrays(prior, data, plot_grid, cfg):
    """``(lower, upper)`` arrays, equal to the fields of :func:`band_on_grid`."""
    lower, upper, _, _ = _band_batch(prior, data, plot_grid, cfg)
    return lower, upper
