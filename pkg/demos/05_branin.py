"""Branin with a long-lengthscale, low-variance working prior.

Prints the median best value per method at the summary checkpoints; the
global minimum is 0.397887.

    python demos/05_branin.py [seeds]
"""
import sys

from gpcs.experiments import run_experiment
from gpcs.experiments.config import default_config

n = int(sys.argv[1]) if len(sys.argv) > 1 else 3
config = default_config("branin").replace(replications=n, seeds=tuple(range(n)))
s = run_experiment(config)[1]
print("step   " + "  ".join(f"{t:>8}" for t in config.times))
for name, stats in s["methods"].items():
    print(f"{name:7}" + "  ".join(f"{stats['at_times'][str(t)]:8.3f}" for t in config.times))
print(f"optimum {s['optimum']}")
