"""Plain-text run configurations: ``key = value`` lines with ``#`` comments."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, fields
from typing import Optional, Tuple

COMMANDS = ("simulate", "barenblatt-table", "match-k0", "verify", "theorem1", "theorem2")
INITIAL_KINDS = ("barenblatt", "mean-of-barenblatts", "barenblatt-plus-bump")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class InitialData:
    """Initial-data descriptor.

    ``barenblatt(k)``, ``mean-of-barenblatts(ka, kb, weight)`` meaning
    ``weight B_ka + (1 - weight) B_kb``, or
    ``barenblatt-plus-bump(k0, amplitude, r_lo, r_hi)`` meaning
    ``B_k0 (1 + amplitude * bump)`` with a smooth bump supported on ``[r_lo, r_hi]``.
    """

    kind: str
    params: Tuple[float, ...]

    def __post_init__(self):
        arity = {"barenblatt": 1, "mean-of-barenblatts": 3, "barenblatt-plus-bump": 4}[self.kind]
        if len(self.params) != arity:
            raise ConfigError(f"initial: {self.kind} takes {arity} parameters, got {len(self.params)}")
        if self.kind == "barenblatt" and not self.params[0] > 0:
            raise ConfigError("initial: barenblatt parameter k must be positive")
        if self.kind == "mean-of-barenblatts":
            ka, kb, w = self.params
            if not (ka > 0 and kb > 0 and 0.0 <= w <= 1.0):
                raise ConfigError("initial: mean-of-barenblatts needs k > 0 and 0 <= weight <= 1")
        if self.kind == "barenblatt-plus-bump":
            k0, amp, lo, hi = self.params
            if not (k0 > 0 and amp > -1.0 and 0.0 <= lo < hi):
                raise ConfigError("initial: barenblatt-plus-bump needs k0 > 0, amplitude > -1 and 0 <= r_lo < r_hi")

    @classmethod
    def parse(cls, text: str) -> "InitialData":
        m = re.fullmatch(r"\s*([a-z-]+)\s*\(([^)]*)\)\s*", text)
        if not m or m.group(1) not in INITIAL_KINDS:
            raise ConfigError(f"initial: cannot parse descriptor {text!r}; expected one of {INITIAL_KINDS}")
        try:
            params = tuple(float(p) for p in m.group(2).split(",") if p.strip())
        except ValueError as exc:
            raise ConfigError(f"initial: non-numeric parameter in {text!r}") from exc
        return cls(m.group(1), params)

    def __str__(self):
        return f"{self.kind}({', '.join(repr(p) for p in self.params)})"


@dataclass(frozen=True)
class RunConfig:
    command: str
    N: int = 3
    T: float = 1.0
    k: Optional[float] = None
    k0: Optional[float] = None
    k1: Optional[float] = None
    k2: Optional[float] = None
    r_max: Optional[float] = None
    m_nodes: Optional[int] = None
    stretch: Optional[float] = None
    frame: str = "selfsimilar"
    dt: float = 0.01
    scheme: str = "backward_euler"
    newton_tol: float = 1e-10
    newton_max_iter: int = 50
    positivity_floor: float = 1e-30
    boundary: str = "pinned"
    boundary_k: Optional[float] = None
    horizon: Optional[float] = None
    initial: Optional[InitialData] = None
    snapshots: Tuple[float, ...] = ()
    checkpoint_spacing: float = 1.0
    envelope_r0: float = 1.0
    bracket: Optional[Tuple[float, float]] = None
    table_radii: Tuple[float, ...] = (0.0, 0.5, 1.0, 2.0, 5.0, 10.0)
    table_times: Tuple[float, ...] = (0.0, 0.25, 0.5, 0.75, 0.9)
    identity_samples: int = 100

    def __post_init__(self):
        validate(self)

    @property
    def physical(self) -> bool:
        return self.frame == "physical"

    def grid_params(self) -> Tuple[float, int, float]:
        """``(r_max, m_nodes, stretch)`` with per-command defaults.

        Mass matching needs a far boundary because the truncated far field
        biases k0 like ``r_max^-3``; solver commands default to ``20 sqrt(k)``.
        """
        if self.command == "match-k0":
            r_max, m, stretch = 1000.0, 4000, 1.002
        else:
            k = next((x for x in (self.k, self.k0, self.boundary_k) if x is not None), 1.0)
            r_max, m, stretch = 20.0 * math.sqrt(k), 400, 1.0
        return (self.r_max if self.r_max is not None else r_max,
                self.m_nodes if self.m_nodes is not None else m,
                self.stretch if self.stretch is not None else stretch)

    def start_clock(self) -> float:
        return 0.0 if self.physical else -math.log(self.T)

    def end_clock(self) -> float:
        if self.horizon is not None:
            return self.horizon
        if self.physical:
            return 0.9 * self.T
        return self.start_clock() + (1.0 if self.command == "verify" else 10.0)

    def as_dict(self) -> dict:
        out = {}
        for f in fields(self):
            value = getattr(self, f.name)
            out[f.name] = str(value) if isinstance(value, InitialData) else (
                list(value) if isinstance(value, tuple) else value)
        return out


def _positive(name, value):
    if value is not None and not (math.isfinite(value) and value > 0):
        raise ConfigError(f"{name} must be a positive finite number, got {value}")


def validate(cfg: RunConfig):
    if cfg.command not in COMMANDS:
        raise ConfigError(f"command must be one of {COMMANDS}, got {cfg.command!r}")
    if cfg.N < 3:
        raise ConfigError(f"N must be an integer >= 3, got {cfg.N}")
    for name in ("T", "k", "k0", "k1", "k2", "r_max", "dt", "newton_tol", "positivity_floor",
                 "boundary_k", "checkpoint_spacing"):
        _positive(name, getattr(cfg, name))
    if cfg.stretch is not None and cfg.stretch < 1.0:
        raise ConfigError(f"stretch must be >= 1, got {cfg.stretch}")
    if cfg.m_nodes is not None and cfg.m_nodes < 16:
        raise ConfigError(f"m_nodes must be >= 16, got {cfg.m_nodes}")
    if cfg.frame not in ("physical", "selfsimilar"):
        raise ConfigError(f"frame must be physical or selfsimilar, got {cfg.frame!r}")
    if cfg.boundary not in ("pinned", "fitted_tail"):
        raise ConfigError(f"boundary must be pinned or fitted_tail, got {cfg.boundary!r}")
    if cfg.scheme not in ("backward_euler", "trbdf2"):
        raise ConfigError(f"scheme must be backward_euler or trbdf2, got {cfg.scheme!r}")
    if (cfg.k1 is None) != (cfg.k2 is None):
        raise ConfigError("k1 and k2 must be given together")
    if cfg.k1 is not None and not cfg.k1 > cfg.k2:
        raise ConfigError(f"the sandwich needs k1 > k2 > 0 strictly, got k1={cfg.k1}, k2={cfg.k2}")
    if cfg.bracket is not None and not (0 < cfg.bracket[0] and 0 < cfg.bracket[1]):
        raise ConfigError("bracket entries must be positive")
    theorem = cfg.command in ("theorem1", "theorem2")
    if cfg.command == "theorem1" and cfg.N != 3:
        raise ConfigError(f"theorem1 requires N = 3, got N={cfg.N}")
    if cfg.command == "theorem2" and cfg.N < 5:
        raise ConfigError(
            f"theorem2 requires N >= 5, got N={cfg.N}; the convergence statements cover N=3 or N>=5 only"
        )
    if theorem and cfg.k1 is None:
        raise ConfigError(f"{cfg.command} needs the sandwich parameters k1 and k2")
    if theorem and cfg.physical:
        raise ConfigError(f"{cfg.command} runs in the selfsimilar frame")
    if cfg.command == "theorem2" and cfg.k0 is None and (
            cfg.initial is None or cfg.initial.kind != "barenblatt-plus-bump"):
        raise ConfigError("theorem2 needs k0 (or a barenblatt-plus-bump initial descriptor)")
    if cfg.command == "match-k0" and cfg.N != 3:
        raise ConfigError(f"match-k0 requires N = 3, got N={cfg.N}")
    if cfg.command in ("simulate", "match-k0") and cfg.initial is None:
        raise ConfigError(f"{cfg.command} needs an initial-data descriptor")
    if cfg.command in ("barenblatt-table", "verify") and cfg.k is None:
        raise ConfigError(f"{cfg.command} needs the Barenblatt parameter k")
    if cfg.horizon is not None and cfg.horizon < cfg.start_clock():
        raise ConfigError(f"horizon {cfg.horizon} lies before the initial clock {cfg.start_clock()}")


_TYPES = {f.name: f.type for f in fields(RunConfig)}


def _floats(text: str) -> Tuple[float, ...]:
    return tuple(float(x) for x in text.replace(",", " ").split())


def _convert(key: str, raw: str):
    kind = _TYPES[key]
    try:
        if key == "initial":
            return InitialData.parse(raw)
        if key in ("snapshots", "table_radii", "table_times"):
            return _floats(raw)
        if key == "bracket":
            pair = _floats(raw)
            if len(pair) != 2:
                raise ConfigError("bracket needs exactly two numbers")
            return pair
        if "int" in str(kind):
            value = float(raw)
            if value != int(value):
                raise ValueError
            return int(value)
        if "float" in str(kind):
            return float(raw)
        return raw
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(f"{key}: cannot parse {raw!r}") from exc


def parse_config(text: str, command: Optional[str] = None) -> RunConfig:
    """Build a validated :class:`RunConfig`; ``command`` overrides or fills the ``command`` key."""
    values = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {line!r}")
        key, raw = (part.strip() for part in line.split("=", 1))
        if key not in _TYPES:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        values[key] = raw if key == "command" else _convert(key, raw)
    if command is not None:
        if "command" in values and values["command"] != command:
            raise ConfigError(f"config says command = {values['command']} but {command} was requested")
        values["command"] = command
    if "command" not in values:
        raise ConfigError("no command given")
    return RunConfig(**values)
