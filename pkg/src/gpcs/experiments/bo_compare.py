"""GP-LCB versus CS-LCB on sampled 1-D functions and on Branin."""
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from gpcs import linalg
from gpcs.bo import BlackBox, CsLcb, GpLcb, GridFunction, bo_run
from gpcs.errors import ConfigError, OutOfDomain
from gpcs.gp import prior_on_grid
from gpcs.kernel import NoiseModel

BRANIN_BOUNDS = np.array([[-5.0, 10.0], [0.0, 15.0]])
BRANIN_MIN = 0.397887
BRANIN_MINIMIZERS = ((-np.pi, 12.275), (np.pi, 2.275), (9.42478, 2.475))
DEFAULT_BETA_T = 4.0

# ``a (x2 - b x1^2 + c x1 - r)^2 + s (1 - t) cos(x1) + s``
BRANIN_CONSTANTS = {
    "a": 1.0,
    "b": 5.1 / (4.0 * np.pi**2),
    "c": 5.0 / np.pi,
    "r": 6.0,
    "s": 10.0,
    "t": 1.0 / (8.0 * np.pi),
}


def branin(x, constants=None):
    x = np.asarray(x, dtype=float).ravel()
    if x.shape != (2,):
        raise OutOfDomain(f"Branin takes a 2-D point, got shape {x.shape}")
    lo, hi = BRANIN_BOUNDS[:, 0], BRANIN_BOUNDS[:, 1]
    if np.any(x < lo) or np.any(x > hi):
        raise OutOfDomain(f"{x} outside [-5, 10] x [0, 15]")
    k = BRANIN_CONSTANTS if constants is None else constants
    x1, x2 = x
    return float(
        k["a"] * (x2 - k["b"] * x1**2 + k["c"] * x1 - k["r"]) ** 2
        + k["s"] * (1.0 - k["t"]) * np.cos(x1)
        + k["s"]
    )


def branin_lattice(side):
    g1 = np.linspace(*BRANIN_BOUNDS[0], side)
    g2 = np.linspace(*BRANIN_BOUNDS[1], side)
    a, b = np.meshgrid(g1, g2, indexing="ij")
    return np.column_stack([a.ravel(), b.ravel()])


def methods(config):
    return (GpLcb(DEFAULT_BETA_T), CsLcb(config.cs))


def _true_noise(config):
    return NoiseModel(config.working_prior.noise.noise_variance * config.true_noise_scale**2)


def sampled_objective(config, seed):
    """``f*`` drawn from the true prior on the 1-D candidate grid."""
    grid = np.linspace(-10.0, 10.0, config.plot_grid_size)
    g = prior_on_grid(config.true_prior, grid)
    values = linalg.sample_mvn(g.mean, g.factor(), np.random.default_rng([seed, 1]))
    return GridFunction(grid, values)


def _pair_bo_compare(args):
    config, seed = args
    f = sampled_objective(config, seed)
    box = BlackBox(f, _true_noise(config), [[-10.0, 10.0]])
    runs = [
        bo_run(box, config.working_prior, kind, config.budget, f.grid, seed)
        for kind in methods(config)
    ]
    return seed, runs, float(f.values.min())


def _pair_branin(args):
    config, seed = args
    grid = branin_lattice(config.plot_grid_size)
    box = BlackBox(branin, _true_noise(config), BRANIN_BOUNDS)
    runs = [
        bo_run(box, config.working_prior, kind, config.budget, grid, seed)
        for kind in methods(config)
    ]
    return seed, runs, BRANIN_MIN


def _map(fn, jobs, workers):
    if workers and workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, jobs))
    return [fn(j) for j in jobs]


def summarize_runs(runs, budget, times):
    """Per-step median and quartiles of ``best_so_far`` for each method.

    Runs that stopped early are padded with their last value so every
    curve has ``budget`` entries; runs with no steps are skipped.
    """
    by_method = {}
    for run in runs:
        curve = run.best_curve
        if curve.size == 0:
            continue
        padded = np.concatenate([curve, np.full(budget - curve.size, curve[-1])])
        by_method.setdefault(run.acquisition_kind.name, []).append(padded)
    out = {}
    for name, curves in sorted(by_method.items()):
        arr = np.vstack(curves)
        q25, med, q75 = np.percentile(arr, [25, 50, 75], axis=0)
        out[name] = {
            "median": med.tolist(),
            "q25": q25.tolist(),
            "q75": q75.tolist(),
            "at_times": {str(t): float(med[t - 1]) for t in times},
        }
    return out


def _bo_experiment(config, pair_fn, workers):
    jobs = [(config, s) for s in config.run_seeds()]
    results = _map(pair_fn, jobs, workers)
    runs = []
    minima = {}
    failures = []
    for seed, pair, fmin in results:
        minima[str(seed)] = fmin
        for run in pair:
            runs.append(run)
            if run.error is not None:
                failures.append(
                    {"seed": seed, "method": run.acquisition_kind.name, "error": run.error}
                )
    summary = {
        "config": config.to_dict(),
        "methods": summarize_runs(runs, config.budget, config.times),
        "grid_minimum": minima,
        "n_failed": len(failures),
        "failures": failures,
        "beta_t": DEFAULT_BETA_T,
    }
    return runs, summary


def run_bo_compare(config, workers=1):
    """GP-LCB and CS-LCB on the same ``f*`` and noise stream, one pair per seed."""
    if config.kind != "bo_compare":
        raise ConfigError(f"run_bo_compare needs kind 'bo_compare', got {config.kind!r}")
    return _bo_experiment(config, _pair_bo_compare, workers)


def run_branin(config, workers=1):
    """GP-LCB and CS-LCB on Branin over a ``plot_grid_size``-square lattice."""
    if config.kind != "branin":
        raise ConfigError(f"run_branin needs kind 'branin', got {config.kind!r}")
    runs, summary = _bo_experiment(config, _pair_branin, workers)
    summary["optimum"] = BRANIN_MIN
    return runs, summary
