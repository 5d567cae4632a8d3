# src/traveling_wave_lab/run_config.py

"""
Run configuration files: flat ``section.key = value`` lines, comments with ``#``.

    flux.kind = cubic
    shock.u_minus = 1.2
    shock.u_plus = -0.7286
    kdvb.eps = 1
    kdvb.delta = 1

Files are read with python-dotenv's ``dotenv_values`` (no variable
interpolation); every key must be in ``KEYS`` and is converted to its type
at load time.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Mapping

from dotenv import dotenv_values

from .errors import ConfigError


def _float(text: str) -> float:
    value = float(text)
    if not math.isfinite(value):
        raise ValueError("not finite")
    return value


def _int(text: str) -> int:
    return int(text)


def _bool(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in {"1", "true", "yes", "on"}:
        return True
    if lowered in {"0", "false", "no", "off"}:
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _floats(text: str) -> tuple[float, ...]:
    return tuple(_float(part) for part in text.split(",") if part.strip())


def _floats_2(text: str) -> tuple[float, float]:
    values = _floats(text)
    if len(values) != 2:
        raise ValueError("expected two comma-separated numbers")
    return values[0], values[1]


def _choice(*options: str) -> Callable[[str], str]:
    def parse(text: str) -> str:
        value = text.strip()
        if value not in options:
            raise ValueError(f"expected one of {', '.join(options)}")
        return value

    return parse


def _str(text: str) -> str:
    return text.strip()


KEYS: dict[str, Callable[[str], Any]] = {
    # conservation law / shock
    "flux.kind": _choice("burgers", "quadratic_burgers", "cubic", "polynomial"),
    "flux.coefficients": _floats,
    "shock.u_minus": _float,
    "shock.u_plus": _float,
    "shock.c": _float,
    "kdvb.eps": _float,
    "kdvb.delta": _float,
    # reaction term
    "reaction.kind": _choice("bistable_cubic", "logistic", "polynomial", "kdvb"),
    "reaction.a0": _float,
    "reaction.coefficients": _floats,
    "reaction.u_minus": _float,
    "reaction.u_plus": _float,
    # operators
    "operator.a": _float,
    "operator.theta": _float,
    "operator.alpha": _float,
    "operator.sigma": _float,
    "operator.kind": _choice("riesz_feller", "convolution"),
    "operator.kernel": _choice("hat", "box"),
    "operator.kernel_width": _float,
    # heat kernel
    "kernel.t": _float,
    "kernel.s": _float,
    "kernel.n": _int,
    "kernel.L": _float,
    # traveling waves
    "tw.mode": _choice("local-shoot", "rd-evolve", "fkdvb-march", "fowler"),
    "tw.speed": _float,
    "tw.tol": _float,
    "tw.xi_max": _float,
    # grids and time stepping
    "grid.L": _float,
    "grid.n": _int,
    "grid.h": _float,
    "time.dt": _float,
    "time.T": _float,
    # region scan
    "scan.u_minus_range": _floats_2,
    "scan.u_plus_range": _floats_2,
    "scan.resolution": _int,
    "scan.queries": _int,
    # run
    "output.dir": _str,
    "output.svg": _bool,
    "run.threads": _int,
    "run.seed": _int,
}


@dataclass(frozen=True)
class RunConfig:
    values: dict[str, Any] = field(default_factory=dict)
    source: str = "<defaults>"

    @classmethod
    def from_mapping(cls, raw: Mapping[str, str | None], source: str = "<mapping>") -> "RunConfig":
        values: dict[str, Any] = {}
        unknown = sorted(set(raw) - set(KEYS))
        if unknown:
            raise ConfigError(f"unknown configuration keys in {source}: {', '.join(unknown)}", keys=unknown)
        for key, text in raw.items():
            if text is None or not str(text).strip():
                raise ConfigError(f"{source}: key {key} has no value", key=key)
            try:
                values[key] = KEYS[key](str(text))
            except ValueError as e:
                raise ConfigError(f"{source}: invalid value {text!r} for {key} ({e})", key=key, value=text) from e
        return cls(values, source)

    @classmethod
    def load(cls, path: str | Path | None) -> "RunConfig":
        if path is None:
            return cls()
        path = Path(path)
        if not path.is_file():
            raise ConfigError(f"configuration file not found: {path}", path=str(path))
        return cls.from_mapping(dotenv_values(path, interpolate=False), source=str(path))

    def with_overrides(self, **overrides: Any) -> "RunConfig":
        """CLI flags win over file values; ``None`` leaves the key untouched."""
        merged = dict(self.values)
        for key, value in overrides.items():
            if value is None:
                continue
            dotted = key.replace("__", ".")
            if dotted not in KEYS:
                raise ConfigError(f"unknown override {dotted}", key=dotted)
            merged[dotted] = value
        return RunConfig(merged, self.source)

    def __contains__(self, key: str) -> bool:
        return key in self.values

    def get(self, key: str, default: Any = None) -> Any:
        if key not in KEYS:
            raise ConfigError(f"unknown configuration key {key}", key=key)
        return self.values.get(key, default)

    def require(self, key: str) -> Any:
        if key not in self.values:
            raise ConfigError(f"{self.source}: missing required key {key}", key=key)
        return self.values[key]

    def positive(self, key: str, default: float | None = None) -> float:
        value = self.require(key) if default is None and key not in self.values else self.get(key, default)
        if not value > 0:
            raise ConfigError(f"{key} must be positive, got {value}", key=key, value=value)
        return value

    def to_dict(self) -> dict[str, Any]:
        return {k: list(v) if isinstance(v, tuple) else v for k, v in sorted(self.values.items())}
