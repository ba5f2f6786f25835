"""Anytime-valid confidence sequences for GP working models, and CS-LCB."""
from gpcs.gp import Dataset, GpPrior, GridGaussian, posterior_on_grid, prior_on_grid
from gpcs.kernel import NoiseModel, SeKernelParams
from gpcs.ratio_cs import BandPoint, CsConfig, band_at, band_on_grid

__version__ = "0.1.0"
