"""Run a GP confidence-sequence experiment and write CSV + JSON results."""
import argparse
import dataclasses
import logging
import sys

from gpcs.errors import ConfigError, GpcsError
from gpcs.experiments import emit_results, run_experiment
from gpcs.experiments.config import default_config, load_config

log = logging.getLogger("gpcs")

COMMANDS = {
    "coverage": "coverage",
    "noise": "noise_misspec",
    "bo-compare": "bo_compare",
    "branin": "branin",
}


def _int_list(text):
    try:
        return tuple(int(v) for v in text.split(",") if v.strip())
    except ValueError as err:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers: {text}") from err


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(2, f"{self.prog}: error: {message}\n")


def build_parser():
    parser = _Parser(prog="gpcs", description=__doc__)
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("--config", help="JSON file with ExperimentConfig fields")
    parser.add_argument("--alpha", type=float, help="miscoverage level")
    parser.add_argument("--gamma", type=float, help="prior widening factor")
    parser.add_argument("--beta", type=float, help="likelihood power in (0, 1]")
    parser.add_argument("--times", type=_int_list, help="checkpoints, e.g. 3,5,10")
    parser.add_argument("--reps", type=int, help="replications (coverage) or seed count (BO)")
    parser.add_argument("--seed", type=int)
    parser.add_argument("--noise-scale", type=float, dest="noise_scale", help="true/assumed noise std")
    parser.add_argument("--grid", type=int, help="plot grid size (per side for branin)")
    parser.add_argument("--out", help="output directory")
    parser.add_argument("--workers", type=int, default=1, help="worker processes; output does not depend on it")
    return parser


def resolve_config(args):
    kind = COMMANDS[args.command]
    config = load_config(args.config, kind) if args.config else default_config(kind)
    cs_changes = {
        k: v
        for k, v in (("alpha", args.alpha), ("gamma", args.gamma), ("beta_power", args.beta))
        if v is not None
    }
    changes = {}
    if cs_changes:
        try:
            changes["cs"] = dataclasses.replace(config.cs, **cs_changes)
        except ValueError as err:
            raise ConfigError(str(err)) from err
    for field, value in (
        ("times", args.times),
        ("replications", args.reps),
        ("true_noise_scale", args.noise_scale),
        ("plot_grid_size", args.grid),
        ("output_dir", args.out),
    ):
        if value is not None:
            changes[field] = value
    if args.seed is not None:
        changes["seeds"] = (args.seed,)
    return config.replace(**changes)


def main(argv=None):
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(message)s")
    args = build_parser().parse_args(argv)
    try:
        config = resolve_config(args)
    except ConfigError as err:
        log.error("config error: %s", err)
        return 2
    try:
        records, summary = run_experiment(config, workers=args.workers)
        csv_path, json_path = emit_results(records, summary, config.output_dir)
    except GpcsError as err:
        log.error("%s", err)
        return 1
    log.info("wrote %s and %s", csv_path, json_path)
    if summary.get("n_failed", 0):
        log.error("%d replication(s) failed", summary["n_failed"])
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
