"""Declarative run-configuration parsing shared by the CLI and the service.

A run config is a flat JSON object holding SimulationConfig fields plus
optional ``grid_axis``/``grid_values`` and ``workers``. Unknown keys are
rejected so typos fail loudly instead of silently running defaults.
"""

import json
from dataclasses import dataclass, fields

from .datagen import SimulationConfig
from .errors import ConfigError
from .procedures import GRID_AXES

__all__ = ["RunConfig", "parse_run_config", "load_run_config_file"]

_CONFIG_KEYS = tuple(f.name for f in fields(SimulationConfig))
_EXTRA_KEYS = ("grid_axis", "grid_values", "workers")


@dataclass(frozen=True)
class RunConfig:
    """One parsed run: a simulation config plus optional sweep and workers."""

    config: SimulationConfig
    grid_axis: str | None = None
    grid_values: tuple | None = None
    workers: int = 1


def parse_run_config(data: dict) -> RunConfig:
    if not isinstance(data, dict):
        raise ConfigError("config", "must be a JSON object")
    unknown = set(data) - set(_CONFIG_KEYS) - set(_EXTRA_KEYS)
    if unknown:
        raise ConfigError(sorted(unknown)[0], "unknown configuration key")

    config = SimulationConfig(**{k: data[k] for k in _CONFIG_KEYS if k in data})

    grid_axis = data.get("grid_axis")
    grid_values = data.get("grid_values")
    if (grid_axis is None) != (grid_values is None):
        raise ConfigError("grid_axis", "grid_axis and grid_values must be given together")
    if grid_axis is not None:
        if grid_axis not in GRID_AXES:
            raise ConfigError("grid_axis", f"must be one of {GRID_AXES}")
        if not isinstance(grid_values, (list, tuple)):
            raise ConfigError("grid_values", "must be a list of values")
        grid_values = tuple(grid_values)

    workers = data.get("workers", 1)
    if not isinstance(workers, int) or isinstance(workers, bool) or workers < 1:
        raise ConfigError("workers", "must be a positive integer")
    return RunConfig(config=config, grid_axis=grid_axis, grid_values=grid_values,
                     workers=workers)


def load_run_config_file(path) -> RunConfig:
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError("config", f"invalid JSON: {exc}") from exc
    return parse_run_config(data)
