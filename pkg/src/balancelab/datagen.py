"""Generative model for a simulated two-condition study with one confound.

The model, for each item i in group g in {0, 1}:

    covariate  x_i = d_conf * g + z_i,                    z_i ~ N(0, 1)
    outcome    y_i = d_manip * g + r * x_i + sqrt(1 - r^2) * e_i,
                                                          e_i ~ N(0, 1)

Within-group variances of x and y are both 1, so every effect-size
parameter is directly in Cohen's d units, the within-group correlation of
x and y is r, and the naive group contrast on y is contaminated by exactly
r * d_conf. The covariate enters through its raw value on purpose: a
group-centered covariate could not confound.
"""

import csv
import io
from dataclasses import dataclass, field, fields

import numpy as np

from .errors import ConfigError, DataError
from .streams import SeedSpec, make_stream, sample_standard_normal

__all__ = ["SimulationConfig", "Dataset", "generate_dataset", "CONFIG_RANGES"]

# Valid ranges per config field, the single source of truth for CLI, service
# and UI validation: (min, max, integer?).
CONFIG_RANGES = {
    "n_per_group": {"min": 2, "max": 1_000_000, "integer": True},
    "d_manip": {"min": -10.0, "max": 10.0, "integer": False},
    "d_conf": {"min": -10.0, "max": 10.0, "integer": False},
    "r": {"min": -1.0, "max": 1.0, "integer": False},
    "alpha_balance": {"min": 0.0, "max": 1.0, "integer": False, "exclusive": True},
    "alpha_outcome": {"min": 0.0, "max": 1.0, "integer": False, "exclusive": True},
    "n_replicates": {"min": 1, "max": 10_000_000, "integer": True},
    "seed": {"min": 0, "max": 2**64 - 1, "integer": True},
}


@dataclass(frozen=True)
class SimulationConfig:
    """Full parameterization of one simulated study design."""

    n_per_group: int = 20
    d_manip: float = 2.0
    d_conf: float = 1.0
    r: float = 0.75
    alpha_balance: float = 0.05
    alpha_outcome: float = 0.05
    n_replicates: int = 10_000
    seed: int = 0

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            spec = CONFIG_RANGES[f.name]
            if spec["integer"]:
                if not float(value).is_integer():
                    raise ConfigError(f.name, "must be an integer")
                object.__setattr__(self, f.name, int(value))
                value = int(value)
            else:
                try:
                    value = float(value)
                except (TypeError, ValueError):
                    raise ConfigError(f.name, "must be a number") from None
                if not np.isfinite(value):
                    raise ConfigError(f.name, "must be finite")
                object.__setattr__(self, f.name, value)
            if spec.get("exclusive"):
                ok = spec["min"] < value < spec["max"]
            else:
                ok = spec["min"] <= value <= spec["max"]
            if not ok:
                bounds = f"({spec['min']}, {spec['max']})" if spec.get("exclusive") \
                    else f"[{spec['min']}, {spec['max']}]"
                raise ConfigError(f.name, f"must lie in {bounds}, got {value}")


@dataclass
class Dataset:
    """One realized two-condition study: group labels, covariate, outcome."""

    group: np.ndarray
    covariate: np.ndarray
    outcome: np.ndarray
    item: list = field(default=None)  # optional item identifiers

    def __post_init__(self):
        self.group = np.asarray(self.group, dtype=int)
        self.covariate = np.asarray(self.covariate, dtype=float)
        self.outcome = np.asarray(self.outcome, dtype=float)
        n = len(self.group)
        if len(self.covariate) != n or len(self.outcome) != n:
            raise DataError("group, covariate and outcome must have equal length")
        levels = set(self.group.tolist())
        if levels != {0, 1}:
            raise DataError(f"expected exactly 2 group levels {{0, 1}}, got {sorted(levels)}")
        if not (np.all(np.isfinite(self.covariate)) and np.all(np.isfinite(self.outcome))):
            raise DataError("covariate and outcome must be finite")
        if self.item is None:
            self.item = [str(i) for i in range(n)]

    def by_group(self, column: str):
        """Return (group-0 values, group-1 values) of ``column``."""
        values = getattr(self, column)
        return values[self.group == 0], values[self.group == 1]

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["item", "group", "covariate", "outcome"])
        for ident, g, x, y in zip(self.item, self.group, self.covariate, self.outcome):
            writer.writerow([ident, int(g), repr(float(x)), repr(float(y))])
        return buf.getvalue()


def generate_dataset(config: SimulationConfig, stream: np.random.Generator) -> Dataset:
    """Realize one study from ``config`` using draws from ``stream``.

    Draw order is fixed (z then e for group 0, then group 1) so that golden
    values stay stable.
    """
    n = config.n_per_group
    scale = np.sqrt(1.0 - config.r**2)
    groups, xs, ys = [], [], []
    for g in (0, 1):
        z = sample_standard_normal(stream, n)
        eps = sample_standard_normal(stream, n)
        x = config.d_conf * g + z
        y = config.d_manip * g + config.r * x + scale * eps
        groups.append(np.full(n, g))
        xs.append(x)
        ys.append(y)
    return Dataset(
        group=np.concatenate(groups),
        covariate=np.concatenate(xs),
        outcome=np.concatenate(ys),
    )


def replicate_dataset(config: SimulationConfig, replicate_index: int) -> Dataset:
    """Dataset for one Monte Carlo replicate, seeded from (config.seed, index)."""
    stream = make_stream(SeedSpec(config.seed, replicate_index))
    return generate_dataset(config, stream)
