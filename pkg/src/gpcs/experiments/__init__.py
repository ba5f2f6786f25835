import time

from gpcs import __version__
from gpcs.experiments.bo_compare import branin, run_bo_compare, run_branin
from gpcs.experiments.config import ExperimentConfig, default_config, load_config
from gpcs.experiments.coverage import CoverageRecord, run_coverage, run_noise_misspec
from gpcs.experiments.io import emit_results

RUNNERS = {
    "coverage": run_coverage,
    "noise_misspec": run_noise_misspec,
    "bo_compare": run_bo_compare,
    "branin": run_branin,
}


def run_experiment(config, workers=1):
    """Run ``config`` and stamp the summary with version and wall-clock time."""
    start = time.perf_counter()
    records, summary = RUNNERS[config.kind](config, workers=workers)
    summary["version"] = f"v{__version__}"
    summary["duration_s"] = time.perf_counter() - start
    return records, summary
