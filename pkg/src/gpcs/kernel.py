"""Squared-exponential kernel and its widened variant."""
from dataclasses import dataclass, replace

import numpy as np

from gpcs.errors import DimensionMismatch, NegativeGamma


@dataclass(frozen=True)
class SeKernelParams:
    lengthscale: float
    signal_variance: float

    def __post_init__(self):
        for name in ("lengthscale", "signal_variance"):
            v = getattr(self, name)
            if not (np.isfinite(v) and v > 0):
                raise ValueError(f"{name} must be positive and finite, got {v}")


@dataclass(frozen=True)
class NoiseModel:
    noise_variance: float

    def __post_init__(self):
        v = self.noise_variance
        if not (np.isfinite(v) and v > 0):
            raise ValueError(f"noise_variance must be positive and finite, got {v}")

    @property
    def std(self):
        return float(np.sqrt(self.noise_variance))


def as_points(points):
    """Coerce to an ``(n, d)`` float array; a flat sequence is ``n`` 1-D points."""
    arr = np.asarray(points, dtype=float)
    if arr.ndim == 0:
        return arr.reshape(1, 1)
    if arr.ndim == 1:
        return arr.reshape(-1, 1)
    if arr.ndim != 2:
        raise DimensionMismatch(f"points must be at most 2-D, got shape {arr.shape}")
    return arr


def _se(sq_dist, p):
    return p.signal_variance * np.exp(-sq_dist / (2.0 * p.lengthscale**2))


def se_eval(x, x_prime, p):
    """Kernel value between two single points."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    x_prime = np.atleast_1d(np.asarray(x_prime, dtype=float))
    if x.shape != x_prime.shape or x.ndim != 1:
        raise DimensionMismatch(f"point shapes differ: {x.shape} vs {x_prime.shape}")
    diff = x - x_prime
    return float(_se(np.sum(diff**2), p))


def cross_kernel(points_a, points_b, p):
    a = as_points(points_a)
    b = as_points(points_b)
    if a.shape[1] != b.shape[1]:
        raise DimensionMismatch(
            f"point dimensions differ: {a.shape[1]} vs {b.shape[1]}"
        )
    diff = a[:, None, :] - b[None, :, :]
    return _se(np.sum(diff**2, axis=-1), p)


def kernel_matrix(points, p):
    return cross_kernel(points, points, p)


def widen(p, gamma):
    """Inflate the signal variance by ``1 + gamma``; the lengthscale is kept."""
    if gamma < 0:
        raise NegativeGamma(f"gamma must be nonnegative, got {gamma}")
    return replace(p, signal_variance=p.signal_variance * (1.0 + gamma))
