"""Run configuration: JSON file <-> :class:`RunConfig`.

Every key is optional; missing keys take the neutron defaults.  SI units
everywhere except ``tau_over_tau0`` and the time range, which are in τ₀.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

from .irrealism import Resolution
from .packet import ExperimentConfig

# JSON key -> (section, attribute)
_EXPERIMENT_KEYS = {
    "mass_kg": "mass",
    "sigma0_m": "sigma0",
    "beta_m": "beta",
    "d_m": "d",
    "lambda_m": "wavelength",
    "gamma": "gamma",
    "hbar_Js": "hbar",
}
_RESOLUTION_KEYS = {
    "dq_m": "dq",
    "dk_per_m": "dk",
    "dq_ref_m": "dq_ref",
    "dk_ref_per_m": "dk_ref",
}
_RUN_KEYS = ("tau_over_tau0", "t_lo", "t_hi", "t_steps", "out_dir")
KEYS = tuple(_EXPERIMENT_KEYS) + ("tau_over_tau0",) + tuple(_RESOLUTION_KEYS) + ("t_lo", "t_hi", "t_steps", "out_dir")


class ConfigError(ValueError):
    """Malformed or invalid configuration; the message names the culprit."""


@dataclass(frozen=True)
class RunConfig:
    experiment: ExperimentConfig = field(default_factory=ExperimentConfig)
    tau_over_tau0: float = 18.0
    resolution: Resolution = field(default_factory=Resolution)
    t_lo: float = 0.1
    t_hi: float = 3.0
    t_steps: int = 291
    out_dir: str = "out"

    def __post_init__(self):
        if not (math.isfinite(self.tau_over_tau0) and self.tau_over_tau0 > 0):
            raise ConfigError(f"tau_over_tau0 must be positive, got {self.tau_over_tau0!r}")
        if not (math.isfinite(self.t_lo) and math.isfinite(self.t_hi) and 0 <= self.t_lo < self.t_hi):
            raise ConfigError(f"need 0 <= t_lo < t_hi, got t_lo={self.t_lo!r}, t_hi={self.t_hi!r}")
        if isinstance(self.t_steps, bool) or not isinstance(self.t_steps, int) or self.t_steps < 2:
            raise ConfigError(f"t_steps must be an integer >= 2, got {self.t_steps!r}")

    def t_grid(self) -> list[float]:
        step = (self.t_hi - self.t_lo) / (self.t_steps - 1)
        return [self.t_lo + i * step for i in range(self.t_steps - 1)] + [self.t_hi]

    def to_dict(self, include_paths: bool = True) -> dict:
        out = {key: getattr(self.experiment, attr) for key, attr in _EXPERIMENT_KEYS.items()}
        out["tau_over_tau0"] = self.tau_over_tau0
        out.update({key: getattr(self.resolution, attr) for key, attr in _RESOLUTION_KEYS.items()})
        out.update(t_lo=self.t_lo, t_hi=self.t_hi, t_steps=self.t_steps)
        if include_paths:
            out["out_dir"] = self.out_dir
        return out

    def replace(self, **changes) -> RunConfig:
        """Copy with JSON-schema keys overridden (``None`` values ignored)."""
        data = self.to_dict()
        data.update({k: v for k, v in changes.items() if v is not None})
        return from_dict(data)


def _number(key: str, value) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"key {key!r}: expected a number, got {value!r}")
    return float(value)


def from_dict(data: dict) -> RunConfig:
    if not isinstance(data, dict):
        raise ConfigError("top level of the config must be a JSON object")
    unknown = sorted(set(data) - set(KEYS))
    if unknown:
        raise ConfigError(f"unknown key(s): {', '.join(map(repr, unknown))}")

    defaults = RunConfig()
    exp = {attr: _number(key, data[key]) for key, attr in _EXPERIMENT_KEYS.items() if key in data}
    res = {attr: _number(key, data[key]) for key, attr in _RESOLUTION_KEYS.items() if key in data}
    try:
        experiment = ExperimentConfig(**exp)
        resolution = Resolution(**res)
    except ValueError as exc:
        raise ConfigError(f"invalid configuration: {exc}") from None

    t_steps = data.get("t_steps", defaults.t_steps)
    if isinstance(t_steps, float) and t_steps.is_integer():
        t_steps = int(t_steps)
    out_dir = data.get("out_dir", defaults.out_dir)
    if not isinstance(out_dir, str):
        raise ConfigError(f"key 'out_dir': expected a string, got {out_dir!r}")
    return RunConfig(
        experiment=experiment,
        tau_over_tau0=_number("tau_over_tau0", data.get("tau_over_tau0", defaults.tau_over_tau0)),
        resolution=resolution,
        t_lo=_number("t_lo", data.get("t_lo", defaults.t_lo)),
        t_hi=_number("t_hi", data.get("t_hi", defaults.t_hi)),
        t_steps=t_steps,
        out_dir=out_dir,
    )


def loads(text: str) -> RunConfig:
    if not text.strip():
        return RunConfig()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"JSON parse error at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return from_dict(data)


def load_config(path: str | Path) -> RunConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    try:
        return loads(text)
    except ConfigError as exc:
        raise ConfigError(f"{path}: {exc}") from None


def dumps(cfg: RunConfig, include_paths: bool = True, indent: int | None = 2) -> str:
    return json.dumps(cfg.to_dict(include_paths), indent=indent)


def dump_config(cfg: RunConfig, path: str | Path) -> None:
    Path(path).write_text(dumps(cfg) + "\n", encoding="utf-8")
