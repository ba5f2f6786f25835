"""Time-uniform coverage when the working prior is too smooth.

f* comes from prior A (lengthscale 1) while inference assumes prior B
(lengthscale 3). At each checkpoint we ask whether f* leaves the GP 95%
band or the confidence-sequence band anywhere on the plot grid.

    python demos/02_coverage.py [replications]
"""
import sys

from gpcs.experiments import emit_results, run_experiment
from gpcs.experiments.config import default_config

reps = int(sys.argv[1]) if len(sys.argv) > 1 else 100
config = default_config("coverage").replace(replications=reps, output_dir="results/demo-coverage")
records, summary = run_experiment(config)
csv_path, _ = emit_results(records, summary, config.output_dir)

print(f"{reps} replications, checkpoints {config.times}")
print(f"GP band ever misses f*: {summary['miscoverage_gp']:.3f}")
print(f"CS band ever misses f*: {summary['miscoverage_cs']:.3f}  (target alpha = {config.cs.alpha})")
print(f"per-point bands in {csv_path}")
