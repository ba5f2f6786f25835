"""Experiment configuration: defaults per kind, JSON loading, overrides."""
import dataclasses
import json
from dataclasses import dataclass
from pathlib import Path

from gpcs.errors import ConfigError
from gpcs.gp import GpPrior
from gpcs.kernel import NoiseModel, SeKernelParams
from gpcs.ratio_cs import CsConfig

KINDS = ("coverage", "noise_misspec", "bo_compare", "branin")

PRIOR_A = GpPrior(SeKernelParams(1.0, 1.5), NoiseModel(0.1))
PRIOR_B = GpPrior(SeKernelParams(3.0, 1.0), NoiseModel(0.1))
BRANIN_PRIOR = GpPrior(SeKernelParams(7.0, 0.1), NoiseModel(0.1))

FIG1_TIMES = (3, 5, 10, 20, 30, 60)
SECTION_TIMES = (3, 5, 15, 17, 25, 40)
BO_TIMES = (3, 7, 18, 25)
BRANIN_TIMES = (10, 20, 30, 40, 50)


@dataclass(frozen=True)
class ExperimentConfig:
    """One experiment.

    For the BO kinds, ``times[-1]`` is the step budget and ``times`` are
    the steps highlighted in the summary; ``plot_grid_size`` is the
    candidate-grid size per dimension. Coverage kinds use ``seeds[0]`` as
    the master seed; BO kinds run one GP-LCB/CS-LCB pair per seed from
    :meth:`run_seeds`.
    """

    kind: str
    true_prior: GpPrior = PRIOR_A
    working_prior: GpPrior = PRIOR_B
    cs: CsConfig = CsConfig()
    times: tuple = FIG1_TIMES
    plot_grid_size: int = 200
    replications: int = 500
    seeds: tuple = (0,)
    true_noise_scale: float = 1.0
    output_dir: str = "results"

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigError(f"unknown kind {self.kind!r}; expected one of {KINDS}")
        times = tuple(int(t) for t in self.times)
        if not times or any(b <= a for a, b in zip(times, times[1:])) or times[0] < 0:
            raise ConfigError(f"times must be nonnegative and strictly increasing, got {times}")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "seeds", tuple(int(s) for s in self.seeds))
        if self.replications < 1:
            raise ConfigError("replications must be at least 1")
        if self.plot_grid_size < 2:
            raise ConfigError("plot_grid_size must be at least 2")
        if not self.true_noise_scale > 0:
            raise ConfigError("true_noise_scale must be positive")
        if not self.seeds:
            raise ConfigError("at least one seed is required")
        if self.kind in ("bo_compare", "branin") and times[0] < 1:
            raise ConfigError("BO step checkpoints start at 1")

    @property
    def budget(self):
        return self.times[-1]

    def run_seeds(self):
        if len(self.seeds) >= self.replications:
            return self.seeds[: self.replications]
        return tuple(self.seeds[0] + i for i in range(self.replications))

    def replace(self, **changes):
        return dataclasses.replace(self, **changes)

    def to_dict(self):
        return {
            "kind": self.kind,
            "true_prior": prior_to_dict(self.true_prior),
            "working_prior": prior_to_dict(self.working_prior),
            "cs": dataclasses.asdict(self.cs),
            "times": list(self.times),
            "plot_grid_size": self.plot_grid_size,
            "replications": self.replications,
            "seeds": list(self.seeds),
            "true_noise_scale": self.true_noise_scale,
            "output_dir": str(self.output_dir),
        }


def prior_to_dict(p):
    return {
        "lengthscale": p.kernel.lengthscale,
        "signal_variance": p.kernel.signal_variance,
        "noise_variance": p.noise.noise_variance,
        "mean_value": p.mean_value,
    }


def _strict(d, allowed, where):
    if not isinstance(d, dict):
        raise ConfigError(f"{where} must be a JSON object")
    unknown = sorted(set(d) - set(allowed))
    if unknown:
        raise ConfigError(f"unknown keys in {where}: {unknown}")


def prior_from_dict(d, where="prior"):
    keys = ("lengthscale", "signal_variance", "noise_variance", "mean_value")
    _strict(d, keys, where)
    missing = [k for k in keys[:3] if k not in d]
    if missing:
        raise ConfigError(f"missing keys in {where}: {missing}")
    try:
        return GpPrior(
            SeKernelParams(float(d["lengthscale"]), float(d["signal_variance"])),
            NoiseModel(float(d["noise_variance"])),
            float(d.get("mean_value", 0.0)),
        )
    except (TypeError, ValueError) as err:
        raise ConfigError(f"bad {where}: {err}") from err


def default_config(kind):
    """Settings matching the published experiment for ``kind``."""
    if kind == "coverage":
        return ExperimentConfig(kind)
    if kind == "noise_misspec":
        return ExperimentConfig(kind, replications=300, true_noise_scale=4.0)
    if kind == "bo_compare":
        return ExperimentConfig(
            kind, times=BO_TIMES, replications=10, seeds=tuple(range(10))
        )
    if kind == "branin":
        return ExperimentConfig(
            kind,
            true_prior=BRANIN_PRIOR,
            working_prior=BRANIN_PRIOR,
            times=BRANIN_TIMES,
            plot_grid_size=50,
            replications=10,
            seeds=tuple(range(10)),
        )
    raise ConfigError(f"unknown kind {kind!r}")


def config_from_dict(d, kind=None):
    """Build a config from a JSON-style dict on top of the kind's defaults.

    Unknown keys are rejected.
    """
    fields = [f.name for f in dataclasses.fields(ExperimentConfig)]
    _strict(d, fields, "config")
    kind = d.get("kind", kind)
    if kind is None:
        raise ConfigError("config does not name a kind")
    if kind not in KINDS:
        raise ConfigError(f"unknown kind {kind!r}")
    base = default_config(kind)
    changes = {}
    for name in ("true_prior", "working_prior"):
        if name in d:
            changes[name] = prior_from_dict(d[name], name)
    if "cs" in d:
        _strict(d["cs"], ("alpha", "gamma", "beta_power"), "cs")
        try:
            changes["cs"] = dataclasses.replace(base.cs, **{k: float(v) for k, v in d["cs"].items()})
        except (TypeError, ValueError) as err:
            raise ConfigError(f"bad cs: {err}") from err
    for name in ("times", "seeds"):
        if name in d:
            if not isinstance(d[name], list):
                raise ConfigError(f"{name} must be a list of integers")
            changes[name] = tuple(d[name])
    for name, cast in (
        ("plot_grid_size", int),
        ("replications", int),
        ("true_noise_scale", float),
        ("output_dir", str),
    ):
        if name in d:
            try:
                changes[name] = cast(d[name])
            except (TypeError, ValueError) as err:
                raise ConfigError(f"bad {name}: {err}") from err
    return base.replace(**changes)


def load_config(path, kind=None):
    try:
        d = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as err:
        raise ConfigError(f"cannot read config {path}: {err}") from err
    cfg = config_from_dict(d, kind)
    if kind is not None and cfg.kind != kind:
        raise ConfigError(f"config file is for {cfg.kind!r}, command is {kind!r}")
    return cfg
