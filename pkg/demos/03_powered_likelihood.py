"""Noise four times larger than the model assumes, with and without powering.

Raising the likelihood ratio to beta < 1 lowers the threshold on the
ratio density to alpha ** (1 / beta), which widens every band.

    python demos/03_powered_likelihood.py [replications]
"""
import dataclasses
import sys

from gpcs.experiments import run_experiment
from gpcs.experiments.config import default_config

reps = int(sys.argv[1]) if len(sys.argv) > 1 else 100
for scale in (0.25, 4.0):
    for beta in (1.0, 0.75):
        base = default_config("noise_misspec").replace(replications=reps, true_noise_scale=scale)
        config = base.replace(cs=dataclasses.replace(base.cs, beta_power=beta))
        s = run_experiment(config)[1]
        print(f"noise std x{scale:<5g} beta={beta:<5g} CS miss {s['miscoverage_cs']:.3f}  GP miss {s['miscoverage_gp']:.3f}")
