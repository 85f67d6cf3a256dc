from __future__ import annotations

import dataclasses
import sys
from dataclasses import dataclass, fields
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .sectors import MATRIX_VARIANTS


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class Config:
    lambda_max: int = 400
    line_tol: float = 1e-6
    root_residual_tol: float = 1e-10
    pairing_tol: float = 1e-9
    # the printed radicals for theta2, theta3 are rounded; see README
    radical_tol: float = 1e-8
    delta: float = 0.5
    k_max: int = 50
    output_dir: str = "indicial_report"
    matrix_variant: str = "corrected"
    threads: int | None = None

    def __post_init__(self):
        for name in ("line_tol", "root_residual_tol", "pairing_tol", "radical_tol"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"{name} must be positive")
        if not 0 < self.delta < 1:
            raise ConfigError("delta must lie in (0, 1)")
        if self.k_max < 0:
            raise ConfigError("k_max must be nonnegative")
        if self.matrix_variant not in MATRIX_VARIANTS:
            raise ConfigError(f"matrix_variant must be one of {sorted(MATRIX_VARIANTS)}")
        if self.threads is not None and self.threads < 1:
            raise ConfigError("threads must be >= 1")

    def replace(self, **changes) -> "Config":
        changes = {k: v for k, v in changes.items() if v is not None}
        return dataclasses.replace(self, **changes)


_COERCE = {
    "lambda_max": int, "k_max": int, "threads": int,
    "line_tol": float, "root_residual_tol": float, "pairing_tol": float,
    "radical_tol": float, "delta": float, "output_dir": str, "matrix_variant": str,
}


def load_config(path: str | Path | None) -> Config:
    """Read a flat ``key = value`` TOML file; unknown keys are an error."""
    if path is None:
        return Config()
    try:
        with open(path, "rb") as fh:
            raw = tomllib.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"invalid config {path}: {exc}") from exc
    known = {f.name: f for f in fields(Config)}
    kwargs = {}
    for key, value in raw.items():
        if key not in known:
            raise ConfigError(f"unknown config key {key!r}")
        if isinstance(value, dict):
            raise ConfigError(f"config must be flat; {key!r} is a table")
        kwargs[key] = value
    try:
        return Config(**{k: _COERCE[k](v) for k, v in kwargs.items()})
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc
