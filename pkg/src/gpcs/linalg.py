"""Dense symmetric positive-definite helpers.

Every matrix inverse and determinant in the package goes through a
Cholesky factor built here. Factorization escalates a diagonal jitter
through a fixed ladder and records how much was needed.
"""
from dataclasses import dataclass

import numpy as np
from scipy import linalg as sla

from gpcs.errors import DimensionMismatch, NotPositiveDefinite

LOG_2PI = np.log(2.0 * np.pi)

# relative to mean(diag(a)); 0.0 is tried first
JITTER_LADDER = (0.0, 1e-10, 1e-9, 1e-8, 1e-7, 1e-6)


@dataclass(frozen=True)
class SpdFactor:
    """Lower Cholesky factor of ``a + jitter_applied * I``."""

    dim: int
    lower_factor: np.ndarray
    jitter_applied: float = 0.0

    def reconstruct(self):
        return self.lower_factor @ self.lower_factor.T


def cholesky_with_jitter(a):
    """Factor a symmetric matrix, adding diagonal jitter only if needed.

    Parameters
    ----------
    a : (n, n) array_like
        Symmetric matrix. It is symmetrized as ``(a + a.T) / 2`` first.

    Returns
    -------
    SpdFactor

    Raises
    ------
    NotPositiveDefinite
        If the factorization fails at every rung of the jitter ladder.
    """
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {a.shape}")
    n = a.shape[0]
    if n == 0:
        raise DimensionMismatch("cannot factor an empty matrix")
    a = 0.5 * (a + a.T)
    if not np.all(np.isfinite(a)):
        raise NotPositiveDefinite("matrix has non-finite entries")
    scale = float(np.mean(np.diag(a)))
    if not scale > 0.0:
        scale = 1.0
    eye = np.eye(n)
    for eps in JITTER_LADDER:
        jitter = eps * scale
        try:
            lower = sla.cholesky(a + jitter * eye, lower=True, check_finite=False)
        except sla.LinAlgError:
            continue
        if np.all(np.diag(lower) > 0.0):
            return SpdFactor(n, lower, jitter)
    raise NotPositiveDefinite(
        f"{n}x{n} matrix not positive definite even with jitter "
        f"{JITTER_LADDER[-1] * scale:.3g}"
    )


def _check_rows(f, b):
    if b.shape[0] != f.dim:
        raise DimensionMismatch(f"expected {f.dim} rows, got {b.shape[0]}")


def solve_spd(f, b):
    """Solve ``M x = b`` where ``M`` is the matrix ``f`` factors."""
    b = np.asarray(b, dtype=float)
    _check_rows(f, b)
    return sla.cho_solve((f.lower_factor, True), b, check_finite=False)


def log_det_spd(f):
    return 2.0 * float(np.sum(np.log(np.diag(f.lower_factor))))


def whiten(f, b):
    """Return ``L^{-1} b``; its squared norm is the Mahalanobis form."""
    b = np.asarray(b, dtype=float)
    _check_rows(f, b)
    return sla.solve_triangular(f.lower_factor, b, lower=True, check_finite=False)


def mahalanobis_sq(f, delta):
    """``delta^T M^{-1} delta`` via one triangular solve."""
    z = whiten(f, np.asarray(delta, dtype=float).ravel())
    return float(z @ z)


def sample_mvn(mean, f, rng):
    """Draw ``mean + L z`` with ``z`` standard normal from ``rng``."""
    mean = np.asarray(mean, dtype=float).ravel()
    _check_rows(f, mean)
    z = rng.standard_normal(f.dim)
    return mean + f.lower_factor @ z


def log_mvn_density(x, mean, f):
    x = np.asarray(x, dtype=float).ravel()
    mean = np.asarray(mean, dtype=float).ravel()
    if x.shape != mean.shape:
        raise DimensionMismatch(f"x has shape {x.shape}, mean has {mean.shape}")
    return (
        -0.5 * f.dim * LOG_2PI
        - 0.5 * log_det_spd(f)
        - 0.5 * mahalanobis_sq(f, x - mean)
    )
