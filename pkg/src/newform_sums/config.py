"""Experiment configuration: key=value files plus command-line overrides."""

from __future__ import annotations

import os
from dataclasses import dataclass, field, fields, replace

from newform_sums.newforms import DEFAULT_PAIR


class ConfigError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


def _int_list(text: str) -> list[int]:
    return [int(v) for v in text.split(",") if v.strip()]


def _float_list(text: str) -> list[float]:
    return [float(v) for v in text.split(",") if v.strip()]


def _pair(text: str) -> tuple[str, str]:
    parts = [v.strip() for v in text.split(",")]
    if len(parts) != 2 or not all(parts):
        raise ValueError("pair needs two comma-separated labels")
    return parts[0], parts[1]


def _bool(text: str) -> bool:
    low = text.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _threads(text: str) -> int:
    if text.strip() == "auto":
        return os.cpu_count() or 1
    n = int(text)
    if n < 1:
        raise ValueError("threads must be >= 1 or auto")
    return n


@dataclass(frozen=True)
class ExperimentConfig:
    pair: tuple[str, str] = DEFAULT_PAIR
    sign: str = "plus"
    x: int = 10**4
    X: int = 10**4
    epsilon: float = 0.1
    M: float = 2.0
    eta: float = 1 / 15
    u_policy: str = "eta"
    u: float | None = None
    ell: list[int] = field(default_factory=lambda: [5, 7, 11])
    grid: int = 4
    cuts: list[float] | None = None
    cache_dir: str = "cache"
    out: str = "reports"
    threads: int = 1
    seed: int = 0
    override_exceptional: bool = False
    lmax: int = 50
    k: int = 2
    timing: bool = False

    def validate(self) -> "ExperimentConfig":
        if self.sign not in ("plus", "minus"):
            raise ConfigError(f"sign must be plus or minus, got {self.sign!r}")
        if self.x < 2 or self.X < 2:
            raise ConfigError("x and X must be >= 2")
        if self.epsilon <= 0:
            raise ConfigError("epsilon must be > 0")
        if self.M <= 0.25:
            raise ConfigError("M must exceed 1/4")
        if not 0 < float(self.eta) < 1 / 14:
            raise ConfigError(f"eta must satisfy 0 < eta < 1/14, got {self.eta}")
        if self.u_policy not in ("eta", "fixed"):
            raise ConfigError("u_policy must be eta or fixed")
        if self.u_policy == "fixed" and (self.u is None or self.u < 2):
            raise ConfigError("u_policy=fixed needs u >= 2")
        if any(h < 1 for h in self.ell):
            raise ConfigError("moduli in ell must be >= 1")
        if self.grid < 1:
            raise ConfigError("grid must be >= 1")
        if self.k < 2 or self.k % 2:
            raise ConfigError("k must be even and >= 2")
        if self.lmax < 2:
            raise ConfigError("lmax must be >= 2")
        if self.threads < 1:
            raise ConfigError("threads must be >= 1")
        return self

    def cut_points(self) -> list[float]:
        if self.cuts is not None:
            return list(self.cuts)
        return [-2 + 4 * i / self.grid for i in range(self.grid + 1)]


PARSERS = {
    "pair": _pair,
    "sign": str,
    "x": int,
    "X": int,
    "epsilon": float,
    "M": float,
    "eta": float,
    "u_policy": str,
    "u": float,
    "ell": _int_list,
    "grid": int,
    "cuts": _float_list,
    "cache_dir": str,
    "out": str,
    "threads": _threads,
    "seed": int,
    "override_exceptional": _bool,
    "lmax": int,
    "k": int,
    "timing": _bool,
}
assert set(PARSERS) == {f.name for f in fields(ExperimentConfig)}


def _scientific_int(text: str) -> int:
    """Integers may be written as 10**6 or 1e6."""
    text = text.strip()
    if "**" in text:
        base, exp = text.split("**")
        return int(base) ** int(exp)
    if "e" in text.lower():
        value = float(text)
        if value != int(value):
            raise ValueError(f"not an integer: {text!r}")
        return int(value)
    return int(text)


def parse_value(key: str, text: str):
    parser = PARSERS[key]
    if parser is int:
        return _scientific_int(text)
    return parser(text.strip())


def parse_config_text(text: str) -> dict:
    """key=value lines, '#' comments; returns the raw override mapping."""
    values: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"expected key=value, got {raw!r}", lineno)
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in PARSERS:
            raise ConfigError(f"unknown key {key!r}", lineno)
        if key in values:
            raise ConfigError(f"duplicate key {key!r}", lineno)
        try:
            values[key] = parse_value(key, value)
        except ValueError as exc:
            raise ConfigError(f"bad value for {key}: {exc}", lineno) from None
    return values


def parse_config(path: str | None = None, overrides: dict | None = None) -> ExperimentConfig:
    """Defaults, then the file (if any), then ``overrides``; validated."""
    values = {}
    if path is not None:
        with open(path, encoding="ascii") as fh:
            values.update(parse_config_text(fh.read()))
    if overrides:
        values.update({k: v for k, v in overrides.items() if v is not None})
    return replace(ExperimentConfig(), **values).validate()
