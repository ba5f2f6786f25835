"""Grid-based Bayesian optimization with GP-LCB and CS-LCB acquisitions."""
from dataclasses import dataclass, field
from typing import Callable, Optional, Union

import numpy as np

from gpcs.errors import GpcsError, NonFiniteAcquisition, StepError
from gpcs.gp import Dataset, posterior_on_grid
from gpcs.kernel import NoiseModel, as_points
from gpcs.ratio_cs import CsConfig, band_arrays


@dataclass(frozen=True)
class GpLcb:
    beta_t: float = 4.0
    name: str = field(default="gp_lcb", init=False)


@dataclass(frozen=True)
class CsLcb:
    cfg: CsConfig = CsConfig()
    name: str = field(default="cs_lcb", init=False)


AcquisitionKind = Union[GpLcb, CsLcb]


@dataclass(frozen=True)
class BlackBox:
    """Noisy objective; ``noise`` is the true observation noise, not the model's."""

    objective: Callable[[np.ndarray], float]
    noise: NoiseModel
    domain_bounds: np.ndarray

    def __post_init__(self):
        bounds = np.atleast_2d(np.asarray(self.domain_bounds, dtype=float))
        if bounds.shape[1] != 2 or np.any(bounds[:, 0] >= bounds[:, 1]):
            raise ValueError(f"bounds must be rows of [lo, hi] with lo < hi, got {bounds}")
        object.__setattr__(self, "domain_bounds", bounds)

    def contains(self, points):
        pts = as_points(points)
        lo, hi = self.domain_bounds[:, 0], self.domain_bounds[:, 1]
        return bool(np.all((pts >= lo) & (pts <= hi)))


class GridFunction:
    """A function known only through its values on a finite grid."""

    def __init__(self, grid, values):
        self.grid = as_points(grid)
        self.values = np.asarray(values, dtype=float).ravel()
        if self.values.shape[0] != self.grid.shape[0]:
            raise ValueError("one value per grid point required")

    def index_of(self, x):
        x = np.atleast_1d(np.asarray(x, dtype=float)).reshape(1, -1)
        dist = np.sum((self.grid - x) ** 2, axis=1)
        j = int(np.argmin(dist))
        if dist[j] > 1e-18:
            raise ValueError(f"{x.ravel()} is not a grid point")
        return j

    def __call__(self, x):
        return float(self.values[self.index_of(x)])


@dataclass(frozen=True)
class BoStep:
    t: int
    x_chosen: np.ndarray
    y_observed: float
    acquisition_value: float
    best_so_far: float


@dataclass
class BoRun:
    seed: int
    acquisition_kind: AcquisitionKind
    steps: list = field(default_factory=list)
    error: Optional[str] = None

    @property
    def best_curve(self):
        return np.array([s.best_so_far for s in self.steps])


def gp_lcb(posterior, beta_t):
    """``mu - sqrt(beta_t) * sigma`` over the grid; tiny negative variances clip to 0."""
    var = np.clip(np.diag(posterior.cov), 0.0, None)
    return posterior.mean - np.sqrt(beta_t) * np.sqrt(var)


def cs_lcb(prior, data, candidate_grid, cfg):
    lower, _ = band_arrays(prior, data, candidate_grid, cfg)
    return lower


def argmin_grid(values, grid):
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        raise NonFiniteAcquisition("empty acquisition vector")
    if not np.all(np.isfinite(values)):
        raise NonFiniteAcquisition("acquisition has non-finite entries")
    idx = int(np.argmin(values))
    return idx, as_points(grid)[idx]


def acquisition(kind, prior, data, candidate_grid):
    if isinstance(kind, GpLcb):
        return gp_lcb(posterior_on_grid(prior, data, candidate_grid), kind.beta_t)
    if isinstance(kind, CsLcb):
        return cs_lcb(prior, data, candidate_grid, kind.cfg)
    raise TypeError(f"unknown acquisition kind {kind!r}")


def bo_run(box, prior, kind, budget, candidate_grid, seed):
    """Run ``budget`` steps of grid BO against a noisy black box.

    The acquisition at step ``t`` sees only the first ``t - 1``
    observations. Observation noise comes from ``default_rng(seed)``, one
    normal draw per step, so two runs with the same seed share the same
    noise stream whatever they query. ``best_so_far`` tracks the
    noise-free objective at the queried points.

    An acquisition failure stops the run; the partial trajectory is
    returned with ``error`` set and the failure is not raised.
    """
    if budget < 1:
        raise ValueError("budget must be at least 1")
    grid = as_points(candidate_grid)
    if not box.contains(grid):
        raise ValueError("candidate grid leaves the domain bounds")
    rng = np.random.default_rng(seed)
    data = Dataset.empty(grid.shape[1])
    run = BoRun(seed=seed, acquisition_kind=kind)
    best = np.inf
    for t in range(1, budget + 1):
        try:
            values = acquisition(kind, prior, data, grid)
            idx, x = argmin_grid(values, grid)
        except GpcsError as err:
            run.error = str(StepError(t, err))
            break
        f_x = box.objective(x)
        y = f_x + box.noise.std * rng.standard_normal()
        best = min(best, f_x)
        run.steps.append(BoStep(t, x.copy(), float(y), float(values[idx]), float(best)))
        data = data.append(x, y)
    return run


def replay_data(run, upto):
    """Dataset made of the first ``upto`` steps of a run."""
    if not run.steps or upto == 0:
        dim = run.steps[0].x_chosen.shape[0] if run.steps else 1
        return Dataset.empty(dim)
    xs = np.array([s.x_chosen for s in run.steps[:upto]])
    ys = np.array([s.y_observed for s in run.steps[:upto]])
    return Dataset(xs, ys)
