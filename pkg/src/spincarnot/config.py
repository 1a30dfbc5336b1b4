"""Run configuration: flat key = value files plus command-line overrides.

The file format is a plain list of ``key = value`` lines ('#' starts a
comment).  Recognized keys and their defaults reproduce the reference
engine configuration: hot bath 25.8 meV tuned at 2, cold tuning 1.8, gap
endpoints 5 and 3 meV, rate constant 0.005 meV, cold temperature swept
from 8.6 to 24.94 meV.
"""
from __future__ import annotations

from dataclasses import dataclass, fields

import numpy as np

from .baths import Bath
from .engine import EngineParams
from .errors import SpinCarnotError

__all__ = ["UsageError", "RunConfig", "DEFAULTS"]

DEFAULTS = {
    "t_hot": 25.8,
    "t_cold_min": 8.6,
    "t_cold_max": 24.94,
    "t_cold_steps": 13,
    "r_hot": 2.0,
    "r_cold": 1.8,
    "delta_a": 5.0,
    "delta_b": 3.0,
    "gamma": 0.005,
    "output": "",
}


class UsageError(SpinCarnotError):
    """Malformed configuration or command line; maps to exit code 2."""


@dataclass(frozen=True)
class RunConfig:
    """Fully resolved configuration of one CLI invocation."""

    t_hot: float = DEFAULTS["t_hot"]
    t_cold_min: float = DEFAULTS["t_cold_min"]
    t_cold_max: float = DEFAULTS["t_cold_max"]
    t_cold_steps: int = DEFAULTS["t_cold_steps"]
    r_hot: float = DEFAULTS["r_hot"]
    r_cold: float = DEFAULTS["r_cold"]
    delta_a: float = DEFAULTS["delta_a"]
    delta_b: float = DEFAULTS["delta_b"]
    gamma: float = DEFAULTS["gamma"]
    output: str = DEFAULTS["output"]

    @classmethod
    def resolve(cls, config_path: str | None = None, overrides: dict | None = None):
        """Defaults, then file values, then explicit overrides."""
        values = dict(DEFAULTS)
        if config_path:
            values.update(parse_config_file(config_path))
        for key, value in (overrides or {}).items():
            if value is None:
                continue
            if key not in values:
                raise UsageError(f"unknown configuration key {key!r}")
            values[key] = value
        values["t_cold_steps"] = int(values["t_cold_steps"])
        for key in values:
            if key not in ("output", "t_cold_steps"):
                values[key] = float(values[key])
        if values["t_cold_steps"] < 1:
            raise UsageError("t_cold_steps must be at least 1")
        return cls(**values)

    def to_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    def engine_params(self, t_cold: float) -> EngineParams:
        return EngineParams(
            hot=Bath(self.t_hot, self.r_hot),
            cold=Bath(t_cold, self.r_cold),
            delta_a=self.delta_a,
            delta_b=self.delta_b,
            gamma=self.gamma,
        )

    def t_cold_grid(self) -> np.ndarray:
        if self.t_cold_steps == 1:
            return np.array([self.t_cold_min])
        return np.linspace(self.t_cold_min, self.t_cold_max, self.t_cold_steps)


def parse_config_file(path: str) -> dict:
    """Read a flat ``key = value`` file; unknown keys are usage errors."""
    values = {}
    try:
        with open(path, "r", encoding="utf-8") as handle:
            lines = handle.readlines()
    except OSError as exc:
        raise UsageError(f"cannot read config file {path!r}: {exc}") from exc
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected 'key = value', got {raw.rstrip()!r}")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if key not in DEFAULTS:
            raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
        if key == "output":
            values[key] = value
        else:
            try:
                values[key] = float(value)
            except ValueError as exc:
                raise UsageError(f"{path}:{lineno}: bad number for {key}: {value!r}") from exc
    return values
