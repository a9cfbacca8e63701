"""Experiment configuration: defaults, validation and key=value file parsing."""

import dataclasses
from dataclasses import dataclass, field

TASKS = ("dr", "dr-cross", "sdr")


class ConfigError(ValueError):
    """Invalid configuration; the message names the offending field."""


@dataclass
class ExperimentConfig:
    task: str = "dr"
    n: int = 6
    k: int = 2
    N: int = 100
    T: int = 75
    K: int = 1000
    L: int = 1000
    M: int = 200
    lam: list = field(default_factory=lambda: [1.0])
    M_sweep: list = field(default_factory=list)
    C_sweep: list = field(default_factory=list)
    eta: float = 0.1
    theta: float | None = None
    eps: float = 0.01
    C: float = 100.0
    seed_data: int = 0
    seed_nodes: int = 0
    seed_model: int = 0
    seeds: int = 10
    steps: int = 50
    first_steps: int | None = 1500
    learning_rate: float = 1e-2
    resample_nodes: bool = False
    output_dir: str = "results"
    data_path: str = ""
    plots: bool = False

    def __post_init__(self):
        if isinstance(self.lam, (int, float)):
            self.lam = [float(self.lam)]
        self.lam = [float(v) for v in self.lam]
        self.M_sweep = [int(v) for v in self.M_sweep]
        self.C_sweep = [float(v) for v in self.C_sweep]
        if self.first_steps is None:
            self.first_steps = self.steps
        if self.theta is None and self.eta > 0:
            # kernel scale matched to the data-term weight by default
            self.theta = 1.0 / self.eta if self.task != "sdr" else 1.0
        self.validate()

    def validate(self):
        if self.task not in TASKS:
            raise ConfigError(f"task: expected one of {TASKS}, got {self.task!r}")
        for name in ("n", "k", "N", "T", "K", "L", "M", "steps", "first_steps", "seeds"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name}: must be a positive integer")
        if self.k > self.n:
            raise ConfigError(f"k: must not exceed n={self.n}")
        if self.n < 2:
            raise ConfigError("n: must be at least 2")
        if any(v < 1 for v in self.M_sweep):
            raise ConfigError("M_sweep: neuron counts must be positive")
        if not self.lam or any(v < 0 for v in self.lam):
            raise ConfigError("lambda: must be a non-empty list of nonnegative reals")
        for name in ("eta", "theta", "eps", "learning_rate"):
            if getattr(self, name) is None or not getattr(self, name) > 0:
                raise ConfigError(f"{name}: must be positive")

    @property
    def nu_sigma(self):
        """Standard deviation of the data-term nodes."""
        return 1.0 if self.task == "sdr" else 1.0 / self.eta

    def replace(self, **changes):
        return dataclasses.replace(self, **changes)


_ALIASES = {"lambda": "lam", "seed-data": "seed_data", "seed-nodes": "seed_nodes",
            "seed-model": "seed_model", "output-dir": "output_dir",
            "learning-rate": "learning_rate", "resample-nodes": "resample_nodes",
            "first-steps": "first_steps", "M-sweep": "M_sweep", "C-sweep": "C_sweep",
            "data-path": "data_path"}


def _coerce(name, raw):
    kind = {f.name: f.type for f in dataclasses.fields(ExperimentConfig)}[name]
    try:
        if name in ("lam", "M_sweep", "C_sweep"):
            conv = int if name == "M_sweep" else float
            return [conv(v) for v in str(raw).replace(",", " ").split()]
        if name in ("theta", "first_steps"):
            if str(raw).lower() == "none":
                return None
            return float(raw) if name == "theta" else int(raw)
        if kind is bool:
            return str(raw).strip().lower() in ("1", "true", "yes", "on")
        if kind in (int, float):
            return kind(raw)
        return str(raw)
    except ValueError as exc:
        raise ConfigError(f"{name}: cannot parse {raw!r}") from exc


def normalize_key(key):
    key = key.strip()
    key = _ALIASES.get(key, key.replace("-", "_"))
    if key not in {f.name for f in dataclasses.fields(ExperimentConfig)}:
        raise ConfigError(f"{key}: unknown configuration field")
    return key


def parse_pairs(pairs):
    """Turn ``{key: raw string}`` into typed keyword arguments."""
    return {normalize_key(k): _coerce(normalize_key(k), v) for k, v in pairs.items()}


def read_config_file(path):
    """Read a flat ``key = value`` file; ``#`` starts a comment."""
    pairs = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"line {lineno}: expected key=value")
            key, value = line.split("=", 1)
            pairs[key.strip()] = value.strip()
    return parse_pairs(pairs)
