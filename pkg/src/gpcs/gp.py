"""Finite-grid GP prior/posterior and the exact prior-posterior ratio.

All quantities are computed on finite point sets. The working model is a
constant-mean GP with a squared-exponential kernel and Gaussian
observation noise; nothing here assumes that the data were actually
generated by that prior.
"""
from dataclasses import dataclass

import numpy as np

from gpcs import linalg
from gpcs.errors import DimensionMismatch, EmptyGrid
from gpcs.kernel import NoiseModel, SeKernelParams, as_points, cross_kernel, kernel_matrix


@dataclass(frozen=True)
class GpPrior:
    kernel: SeKernelParams
    noise: NoiseModel
    mean_value: float = 0.0


@dataclass(frozen=True)
class Dataset:
    """Observations in arrival order; row ``i`` of ``xs`` pairs with ``ys[i]``."""

    xs: np.ndarray
    ys: np.ndarray = None

    def __post_init__(self):
        xs = as_points(self.xs)
        ys = np.zeros(0) if self.ys is None else np.asarray(self.ys, dtype=float).ravel()
        if xs.shape[0] != ys.shape[0]:
            raise DimensionMismatch(
                f"{xs.shape[0]} inputs but {ys.shape[0]} observations"
            )
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "ys", ys)

    @classmethod
    def empty(cls, dim=1):
        return cls(np.zeros((0, dim)), np.zeros(0))

    def __len__(self):
        return self.ys.shape[0]

    @property
    def dim(self):
        return self.xs.shape[1]

    def append(self, x, y):
        x = np.atleast_1d(np.asarray(x, dtype=float)).reshape(1, -1)
        if x.shape[1] != self.dim:
            raise DimensionMismatch(f"point has dim {x.shape[1]}, data has {self.dim}")
        return Dataset(np.vstack([self.xs, x]), np.append(self.ys, float(y)))

    def prefix(self, t):
        return Dataset(self.xs[:t], self.ys[:t])


@dataclass(frozen=True)
class GridGaussian:
    grid: np.ndarray
    mean: np.ndarray
    cov: np.ndarray

    @property
    def size(self):
        return self.mean.shape[0]

    def factor(self):
        return linalg.cholesky_with_jitter(self.cov)


def prior_on_grid(prior, grid):
    grid = as_points(grid)
    if grid.shape[0] == 0:
        raise EmptyGrid("grid must contain at least one point")
    mean = np.full(grid.shape[0], float(prior.mean_value))
    return GridGaussian(grid, mean, kernel_matrix(grid, prior.kernel))


def _check_dims(data, grid):
    if len(data) and data.dim != grid.shape[1]:
        raise DimensionMismatch(f"data has dim {data.dim}, grid has {grid.shape[1]}")


def data_factor(prior, data):
    """Cholesky factor of ``K(X, X) + eta^2 I`` for the observed inputs."""
    gram = kernel_matrix(data.xs, prior.kernel)
    gram[np.diag_indices_from(gram)] += prior.noise.noise_variance
    return linalg.cholesky_with_jitter(gram)


def posterior_on_grid(prior, data, grid):
    """Condition the working prior on ``data`` and restrict it to ``grid``."""
    g = prior_on_grid(prior, grid)
    _check_dims(data, g.grid)
    if len(data) == 0:
        return g
    mu0 = prior.mean_value
    fac = data_factor(prior, data)
    k_xg = cross_kernel(data.xs, g.grid, prior.kernel)
    alpha = linalg.solve_spd(fac, data.ys - mu0)
    v = linalg.whiten(fac, k_xg)
    mean = mu0 + k_xg.T @ alpha
    cov = g.cov - v.T @ v
    return GridGaussian(g.grid, mean, 0.5 * (cov + cov.T))


def log_likelihood(f_at_xs, data, noise):
    """Gaussian working log-likelihood of function values at the observed inputs."""
    f_at_xs = np.asarray(f_at_xs, dtype=float).ravel()
    if f_at_xs.shape[0] != len(data):
        raise DimensionMismatch(f"{f_at_xs.shape[0]} values for {len(data)} observations")
    if len(data) == 0:
        return 0.0
    eta2 = noise.noise_variance
    resid = data.ys - f_at_xs
    return float(-0.5 * len(data) * np.log(2 * np.pi * eta2) - 0.5 * resid @ resid / eta2)


def log_marginal_likelihood(prior, data):
    if len(data) == 0:
        return 0.0
    fac = data_factor(prior, data)
    return linalg.log_mvn_density(data.ys, np.full(len(data), prior.mean_value), fac)


def exact_log_ppr(prior, data, f_at_xs):
    """Log prior-posterior ratio at a function, given its values at the inputs.

    The ratio equals the prior-mixture likelihood ratio
    ``E_g[L(g)] / L(f)``, so it is the log evidence minus the
    log-likelihood of ``f``.
    """
    f_at_xs = np.asarray(f_at_xs, dtype=float).ravel()
    if f_at_xs.shape[0] != len(data):
        raise DimensionMismatch(f"{f_at_xs.shape[0]} values for {len(data)} observations")
    if len(data) == 0:
        return 0.0
    return log_marginal_likelihood(prior, data) - log_likelihood(f_at_xs, data, prior.noise)


def sample_function(g, rng):
    return linalg.sample_mvn(g.mean, g.factor(), rng)
