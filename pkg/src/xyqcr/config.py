"""Run configuration: JSON file values, overridden by command-line flags."""

from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass, field, fields

import numpy as np

from .detector import Quantity, TimeSearchConfig
from .errors import ConfigError


def parse_floats(text):
    """Parse ``"0.2,0.5"`` or ``"start:stop:num"`` (inclusive linspace) into a list of floats."""
    if isinstance(text, (int, float)):
        return [float(text)]
    if isinstance(text, (list, tuple)):
        return [float(x) for x in text]
    text = str(text).strip()
    if ":" in text:
        start, stop, num = text.split(":")
        return [float(x) for x in np.linspace(float(start), float(stop), int(num))]
    return [float(x) for x in text.split(",") if x.strip()]


@dataclass
class RunConfig:
    quantity: str = "all"
    h0: list = field(default_factory=lambda: [0.5])
    h1: float = 1.0
    gamma: float = 0.8
    multicritical: bool = False
    T: float = 0.0
    temperatures: list = field(default_factory=lambda: [float(x) for x in np.linspace(0.0, 0.1, 21)])
    eta: float = 1e-6
    t_hi: float | None = None
    t_max: float = 20.0
    dt: float = 0.005
    refine_tol: float = 1e-8
    t_end: float = 20.0
    t_step: float = 0.05
    pairs: list = field(default_factory=lambda: [[0.2, 0.3], [0.2, 2.0], [0.95, 0.3], [0.95, 2.0]])
    nodes: int = 2048
    output: str = "-"
    workers: int = 0
    seed: int = 0

    def quantities(self):
        if self.quantity == "all":
            return list(Quantity)
        return [Quantity.parse(q) for q in str(self.quantity).split(",")]

    def time_search(self):
        return TimeSearchConfig(self.t_max, self.dt, self.refine_tol)

    def worker_count(self):
        return self.workers if self.workers > 0 else (os.cpu_count() or 1)

    def gamma_for(self, h0):
        from .detector import multicritical_gamma

        return multicritical_gamma(h0) if self.multicritical else self.gamma

    def window(self):
        if self.t_hi is not None:
            return self.t_hi
        return 0.01 if self.multicritical else 0.1

    def validate(self):
        try:
            self.quantities()
        except ValueError as exc:
            raise ConfigError("quantity", str(exc)) from None
        if not 0.0 <= self.gamma <= 1.0:
            raise ConfigError("gamma", f"must lie in [0, 1], got {self.gamma}")
        for name in ("h1", "T", "eta", "t_max", "dt", "t_end", "t_step"):
            value = getattr(self, name)
            if not np.isfinite(value):
                raise ConfigError(name, f"must be finite, got {value}")
        if not self.h0 or not all(np.isfinite(h) for h in self.h0):
            raise ConfigError("h0", "needs at least one finite value")
        if self.T < 0:
            raise ConfigError("T", f"must be >= 0, got {self.T}")
        if not self.temperatures or min(self.temperatures) < 0:
            raise ConfigError("temperatures", "must be a non-empty list of values >= 0")
        if self.eta <= 0:
            raise ConfigError("eta", f"must be positive, got {self.eta}")
        if self.t_hi is not None and self.t_hi <= 0:
            raise ConfigError("t_hi", f"must be positive, got {self.t_hi}")
        if not 0 < self.dt < self.t_max:
            raise ConfigError("dt", f"need 0 < dt < t_max, got dt={self.dt}, t_max={self.t_max}")
        if not 0 < self.t_step <= self.t_end:
            raise ConfigError("t_step", f"need 0 < t_step <= t_end, got {self.t_step}")
        if self.refine_tol <= 0:
            raise ConfigError("refine_tol", "must be positive")
        if self.nodes < 2:
            raise ConfigError("nodes", f"need at least 2 quadrature nodes, got {self.nodes}")
        if self.workers < 0:
            raise ConfigError("workers", "must be >= 0 (0 means all cores)")
        for pair in self.pairs:
            if len(pair) != 2:
                raise ConfigError("pairs", f"each pair needs (h0, h1), got {pair}")
        if self.output != "-":
            parent = os.path.dirname(os.path.abspath(self.output)) or "."
            if not os.path.isdir(parent) or not os.access(parent, os.W_OK):
                raise ConfigError("output", f"directory {parent} is not writable")
        return self

    def echo(self):
        """Stable JSON rendering, written into output headers."""
        return json.dumps(asdict(self), sort_keys=True, separators=(",", ":"))


_LIST_FIELDS = {"h0", "temperatures"}


def load_config(path=None, overrides=None):
    """Merge defaults, a JSON file and non-None ``overrides`` (in that order)."""
    values = {}
    if path:
        try:
            with open(path) as fh:
                values.update(json.load(fh))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError("config", f"cannot read {path}: {exc}") from None
    values.update({k: v for k, v in (overrides or {}).items() if v is not None})
    known = {f.name for f in fields(RunConfig)}
    unknown = set(values) - known
    if unknown:
        raise ConfigError(sorted(unknown)[0], "unknown configuration key")
    for key in _LIST_FIELDS & set(values):
        try:
            values[key] = parse_floats(values[key])
        except ValueError as exc:
            raise ConfigError(key, str(exc)) from None
    if "pairs" in values and isinstance(values["pairs"], str):
        try:
            values["pairs"] = [[float(a), float(b)] for a, b in
                               (p.split("->") for p in values["pairs"].split(","))]
        except ValueError:
            raise ConfigError("pairs", "expected 'h0->h1,h0->h1'") from None
    try:
        cfg = RunConfig(**values)
    except TypeError as exc:
        raise ConfigError("config", str(exc)) from None
    return cfg.validate()
