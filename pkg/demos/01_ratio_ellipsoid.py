"""Build the ratio Gaussian for a tiny dataset and read a band off it.

Three noisy observations of sin(x) under the prior B working model. The
posterior-over-widened-prior ratio is a scaled Gaussian; its level set at
alpha is an ellipsoid over (f(x1), f(x2), f(x3), f(x')), and the band at
x' is that ellipsoid's shadow on the last axis.
"""
import numpy as np
from scipy.stats import multivariate_normal

from gpcs import CsConfig, Dataset, band_at, posterior_on_grid, prior_on_grid
from gpcs.experiments.config import PRIOR_B
from gpcs.gp import GpPrior
from gpcs.kernel import widen
from gpcs.ratio_cs import cs_radius, ratio_gaussian

cfg = CsConfig(alpha=0.05, gamma=1e-2)
data = Dataset([-4.0, 0.5, 3.0], np.sin([-4.0, 0.5, 3.0]) + [0.1, -0.2, 0.05])
x_test = 1.5

grid = np.append(data.xs.ravel(), x_test)
post = posterior_on_grid(PRIOR_B, data, grid)
wide_prior = GpPrior(widen(PRIOR_B.kernel, cfg.gamma), PRIOR_B.noise)
wide = prior_on_grid(wide_prior, grid)
r = ratio_gaussian(post, wide)

f = post.mean + 0.3
direct = multivariate_normal.logpdf(f, post.mean, post.cov) - multivariate_normal.logpdf(f, wide.mean, wide.cov)
print(f"log ratio at a test vector: direct {direct:.10f}, Gaussian form {r.log_ratio(f):.10f}")

k = cs_radius(r, cfg)
half = k * np.sqrt(r.sigma_c[-1, -1])
print(f"radius k = {k:.4f}; band at x'={x_test}: [{r.mu_c[-1] - half:.4f}, {r.mu_c[-1] + half:.4f}]")

b = band_at(PRIOR_B, data, x_test, cfg)
print(f"band_at (information form):        [{b.lower:.4f}, {b.upper:.4f}]")
print(f"GP 95% band for comparison:        [{post.mean[-1] - 1.96 * np.sqrt(post.cov[-1, -1]):.4f}, "
      f"{post.mean[-1] + 1.96 * np.sqrt(post.cov[-1, -1]):.4f}]")
