"""Experiment configuration shared by the protocol drivers and the CLI.

A config is a flat JSON object; unknown keys and out-of-range values raise
:class:`ConfigError` naming the field.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path

from ..exceptions import ConfigError

BACKENDS = ("fock", "gaussian")
BOB_PATHS = ("gate", "observable")
STRATEGY_NAMES = ("brickwork", "hair", "hidden", "graph")


@dataclass(frozen=True)
class ExperimentConfig:
    backend: str = "fock"
    omega: float = 0.5  # resource squeezing: Var(p) = omega^2 / 2
    cutoff: int = 40
    budget: float = 1e-4  # allowed truncation leakage per gate
    L: float = 1.0  # half-width of the outcome shift r
    L_theta: float | None = None  # half-width of the pre-rotation theta (default: L)
    theta_cubic: bool | None = None  # randomise the cubic pre-rotation (default: Fock only)
    n_samples: int = 2000
    seed: int = 0
    window: float = 0.05  # post-selection half-width
    strategy: str = "brickwork"
    omega_q: float = 0.1  # disconnector q-squeezing: Var(q) = omega_q^2 / 2
    bob_path: str = "gate"
    L_list: tuple = (1.0, 5.0, 25.0)
    alpha: float = 0.01
    out: str | None = None
    extra: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "L_list", tuple(float(x) for x in self.L_list))
        self.validate()

    # --- validation ---------------------------------------------------------

    def validate(self) -> None:
        if self.backend not in BACKENDS:
            raise ConfigError("backend", f"must be one of {BACKENDS}, got {self.backend!r}")
        if self.bob_path not in BOB_PATHS:
            raise ConfigError("bob_path", f"must be one of {BOB_PATHS}, got {self.bob_path!r}")
        if self.strategy not in STRATEGY_NAMES:
            raise ConfigError("strategy", f"must be one of {STRATEGY_NAMES}, got {self.strategy!r}")
        _positive("omega", self.omega, hi=10.0)
        _positive("omega_q", self.omega_q, hi=10.0)
        _positive("L", self.L, hi=1e4)
        if self.L_theta is not None:
            _positive("L_theta", self.L_theta, hi=1e4, zero_ok=True)
        _positive("window", self.window, hi=10.0)
        _positive("budget", self.budget, hi=0.5)
        _positive("alpha", self.alpha, hi=0.5)
        if not isinstance(self.cutoff, int) or isinstance(self.cutoff, bool) or not 2 <= self.cutoff <= 2000:
            raise ConfigError("cutoff", f"must be an integer in [2, 2000], got {self.cutoff!r}")
        if not isinstance(self.n_samples, int) or isinstance(self.n_samples, bool) or not 1 <= self.n_samples <= 10**7:
            raise ConfigError("n_samples", f"must be an integer in [1, 1e7], got {self.n_samples!r}")
        if not isinstance(self.seed, int) or isinstance(self.seed, bool) or not 0 <= self.seed < 2**64:
            raise ConfigError("seed", f"must be an unsigned 64-bit integer, got {self.seed!r}")
        if not self.L_list:
            raise ConfigError("L_list", "must not be empty")
        for x in self.L_list:
            _positive("L_list", x, hi=1e4)
        if self.theta_cubic and self.backend == "gaussian":
            raise ConfigError("theta_cubic", "cubic pre-rotations need the fock backend")

    # --- derived ------------------------------------------------------------

    @property
    def theta_width(self) -> float:
        return self.L if self.L_theta is None else self.L_theta

    @property
    def cubic_theta(self) -> bool:
        return self.backend == "fock" if self.theta_cubic is None else bool(self.theta_cubic)

    # --- interchange --------------------------------------------------------

    def to_dict(self) -> dict:
        d = asdict(self)
        d["L_list"] = list(self.L_list)
        d.pop("extra")
        return d

    def with_overrides(self, **kw) -> "ExperimentConfig":
        kw = {k: v for k, v in kw.items() if v is not None}
        unknown = set(kw) - _FIELD_NAMES
        if unknown:
            raise ConfigError(sorted(unknown)[0], "unknown configuration field")
        return replace(self, **kw)

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        if not isinstance(d, dict):
            raise ConfigError("<root>", "configuration must be a JSON object")
        unknown = set(d) - _FIELD_NAMES
        if unknown:
            raise ConfigError(sorted(unknown)[0], "unknown configuration field")
        for name, kind in _TYPES.items():
            if name in d and d[name] is not None and not _type_ok(d[name], kind):
                raise ConfigError(name, f"expected {kind}, got {type(d[name]).__name__}")
        return cls(**d)

    @classmethod
    def from_file(cls, path) -> "ExperimentConfig":
        text = Path(path).read_text()
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"line {exc.lineno}", f"invalid JSON: {exc.msg}") from None
        return cls.from_dict(data)


_FIELD_NAMES = {f.name for f in fields(ExperimentConfig)} - {"extra"}
_TYPES = {
    "backend": "string", "strategy": "string", "bob_path": "string", "out": "string",
    "omega": "number", "omega_q": "number", "L": "number", "L_theta": "number", "budget": "number",
    "window": "number", "alpha": "number", "cutoff": "integer", "n_samples": "integer", "seed": "integer",
    "theta_cubic": "boolean", "L_list": "array",
}  # fmt: skip


def _type_ok(value, kind: str) -> bool:
    if kind == "string":
        return isinstance(value, str)
    if kind == "number":
        return isinstance(value, (int, float)) and not isinstance(value, bool)
    if kind == "integer":
        return isinstance(value, int) and not isinstance(value, bool)
    if kind == "boolean":
        return isinstance(value, bool)
    if kind == "array":
        return isinstance(value, (list, tuple))
    return True


def _positive(name, value, hi, zero_ok=False) -> None:
    try:
        v = float(value)
    except (TypeError, ValueError):
        raise ConfigError(name, f"must be a number, got {value!r}") from None
    ok = math.isfinite(v) and (v >= 0 if zero_ok else v > 0) and v <= hi
    if not ok:
        raise ConfigError(name, f"must be in {'[0' if zero_ok else '(0'}, {hi}], got {value!r}")


__all__ = ["BACKENDS", "BOB_PATHS", "ExperimentConfig"]
