"""Flat key-value experiment configuration with named presets.

Configuration files hold one ``key = value`` pair per line; ``#`` starts a
comment. Resolution order is: built-in defaults, the preset named by
``experiment``, the config file, then ``--set key=value`` overrides.

Couplings are given in units of the gain rate (``J/Gamma``) and times in
units of ``1/Gamma``. A coupling token ``ep`` (optionally ``ep+0.001``)
stands for the exceptional-point coupling of the chosen topology.
"""
from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np

from .model import ResonatorNetwork, Topology, linear_system
from .dynamics import MAX_STEP_NORM
from .optomech import Sideband
from .spectral import Phase, classify_phase
from .states import MAX_SQUEEZING

__all__ = ["ConfigError", "ExperimentConfig", "EXPERIMENTS", "COMMAND_DEFAULTS", "load_config", "parse_config_text"]


class ConfigError(ValueError):
    """Invalid or inconsistent experiment configuration."""


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str = "binary-noisy"
    topology: Topology = Topology.BINARY
    gain_rate: float = 1.0
    damping: float = 1e-3
    coupling: tuple[str, ...] = ("1.0",)
    n_th: float = 0.0
    noise: bool = True
    initial: str = "auto"  # tmsv for binary, ghz for ternary
    r: float = 1.0
    r1: float = 1.0
    r2: float = 1.0
    t_end: float = 2.0
    dt: float = 1e-3
    record_every: int = 10
    esd_tol: float = 1e-4
    j_min: float = 0.0
    j_max: float = 2.0
    j_points: int = 201
    n_th_min: float = 0.0
    n_th_max: float = 500.0
    n_th_points: int = 101
    snapshot_time: float = 0.5
    times: tuple[float, ...] = (0.5, 0.75)
    grid_min: float = -5.0
    grid_max: float = 5.0
    grid_points: int = 201
    omega_m: float = 1.0
    kappa: float = 0.1
    g0: float = 1e-5
    drive: float = 1000.0
    detuning_gain: str = "auto"
    detuning_loss: str = "auto"
    margin: float = 10.0
    workers: int = 1

    # --- derived quantities -------------------------------------------------

    @property
    def scale(self) -> float:
        """Frequency unit: ``Gamma``, or 1 in the Hermitian limit ``Gamma = 0``."""
        return self.gain_rate if self.gain_rate > 0 else 1.0

    def ep_ratio(self) -> float:
        return 0.5 if self.topology is Topology.BINARY else 1 / (2 * math.sqrt(2))

    def coupling_ratios(self) -> list[float]:
        """Resolved ``J/Gamma`` values."""
        return [_resolve_coupling(tok, self.ep_ratio()) for tok in self.coupling]

    def network(self, j_ratio: float, n_th: float | None = None) -> ResonatorNetwork:
        return ResonatorNetwork(self.topology, self.gain_rate, self.damping,
                                j_ratio * self.scale, self.n_th if n_th is None else n_th)

    def j_grid(self) -> np.ndarray:
        return np.linspace(self.j_min, self.j_max, self.j_points)

    def n_th_grid(self) -> np.ndarray:
        return np.linspace(self.n_th_min, self.n_th_max, self.n_th_points)

    def echo(self) -> list[str]:
        out = []
        for f in fields(self):
            value = getattr(self, f.name)
            if isinstance(value, Topology):
                value = value.value
            elif isinstance(value, tuple):
                value = ", ".join(str(v) for v in value)
            out.append(f"{f.name} = {value}")
        return out

    # --- validation ---------------------------------------------------------

    def validate(self, command: str | None = None) -> "ExperimentConfig":
        """Check every parameter against module preconditions; raise ConfigError."""
        def need(cond, msg):
            if not cond:
                raise ConfigError(msg)

        for name in ("gain_rate", "damping", "n_th", "dt", "t_end", "esd_tol", "snapshot_time",
                     "omega_m", "kappa", "g0", "drive", "margin", "n_th_min", "n_th_max"):
            need(math.isfinite(getattr(self, name)), f"{name} must be finite")
        need(self.gain_rate >= 0, "gain_rate must be >= 0")
        need(self.damping >= 0, "damping must be >= 0")
        need(self.n_th >= 0, "n_th must be >= 0")
        need(self.dt > 0, "dt must be > 0")
        need(self.t_end > 0, "t_end must be > 0")
        need(self.record_every >= 1, "record_every must be >= 1")
        need(self.workers >= 1, "workers must be >= 1")
        need(self.esd_tol > 0, "esd_tol must be > 0")
        for name in ("r", "r1", "r2"):
            need(abs(getattr(self, name)) <= MAX_SQUEEZING, f"|{name}| must be <= {MAX_SQUEEZING}")
        try:
            ratios = self.coupling_ratios()
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        need(len(ratios) > 0, "coupling list is empty")
        need(all(j >= 0 for j in ratios), "couplings must be >= 0")
        valid_initial = ("auto", "tmsv", "vacuum") if self.topology is Topology.BINARY else ("auto", "ghz", "vacuum")
        need(self.initial in valid_initial,
             f"initial state {self.initial!r} not available for {self.topology.value}; use one of {valid_initial}")

        if command in ("evolve", "esd-scan", "wigner"):
            for j in ratios:
                A = linear_system(self.network(j)).drift
                need(self.dt / self.scale * np.linalg.norm(A, 2) <= MAX_STEP_NORM,
                     f"dt={self.dt} violates the RK4 accuracy guard at J/Gamma={j}")
        if command in ("spectrum", "heatmap"):
            need(self.j_points >= 2 and self.j_max > self.j_min >= 0,
                 f"invalid J/Gamma sweep [{self.j_min}, {self.j_max}] with {self.j_points} points")
        if command == "heatmap":
            need(self.n_th_points >= 1 and self.n_th_max >= self.n_th_min >= 0, "invalid n_th grid")
            need(self.snapshot_time > 0, "snapshot_time must be > 0")
            A = linear_system(self.network(self.j_max)).drift
            need(self.dt / self.scale * np.linalg.norm(A, 2) <= MAX_STEP_NORM,
                 f"dt={self.dt} violates the RK4 accuracy guard at J/Gamma={self.j_max}")
        if command == "esd-scan":
            need(self.topology is Topology.BINARY, "esd-scan needs the binary topology")
            for j in ratios:
                need(classify_phase(self.network(j)) is Phase.UNBROKEN,
                     f"J/Gamma={j} is not in the unbroken PT phase")
        if command == "wigner":
            need(self.topology is Topology.BINARY, "wigner needs the binary topology")
            need(len(self.times) > 0 and all(t >= 0 for t in self.times), "times must be non-negative")
            need(self.grid_points >= 2 and self.grid_max > self.grid_min, "invalid Wigner grid")
        if command == "optomech-derive":
            need(self.omega_m > 0 and self.kappa > 0 and self.g0 > 0, "omega_m, kappa and g0 must be > 0")
            need(self.drive >= 0, "drive must be >= 0")
            for name in ("detuning_gain", "detuning_loss"):
                value = getattr(self, name)
                if value != "auto":
                    try:
                        float(value)
                    except ValueError:
                        raise ConfigError(f"{name} must be 'auto' or a number") from None
        return self

    def sideband_detuning(self, sideband: Sideband) -> str:
        return self.detuning_gain if sideband is Sideband.STOKES else self.detuning_loss


def _resolve_coupling(token: str, ep: float) -> float:
    tok = str(token).strip().lower().replace(" ", "")
    if tok.startswith("ep"):
        rest = tok[2:]
        return ep + (float(rest) if rest else 0.0)
    return float(tok)


EXPERIMENTS: dict[str, dict] = {
    "binary-spectrum": dict(topology="binary", j_min=0.0, j_max=2.0, j_points=201),
    "ternary-spectrum": dict(topology="ternary", j_min=0.0, j_max=2.0, j_points=201),
    "binary-noiseless": dict(topology="binary", noise=False, damping=0.0, coupling="1.0, 0.75, 0.53", t_end=20.0, record_every=20),
    "binary-noisy": dict(topology="binary", noise=True, coupling="1.0, 0.75, 0.53", t_end=3.0, record_every=10),
    "esd-scan": dict(topology="binary", noise=True, coupling="ep+0.001, 0.53, 0.6, 0.75, 1.0",
                     t_end=5.0, record_every=10),
    "binary-wigner": dict(topology="binary", noise=True, coupling="1.0, 0.53", times="0.5, 0.75"),
    "ternary-ghz": dict(topology="ternary", initial="ghz", noise=True, coupling="ep, 0.5, 0.75",
                 t_end=1.0, record_every=2),
    "binary-thermal": dict(topology="binary", initial="tmsv", j_min=0.5, j_max=1.5, j_points=101,
                  n_th_min=0.0, n_th_max=500.0, n_th_points=101, snapshot_time=0.5),
    "ternary-thermal": dict(topology="ternary", initial="ghz", j_min=0.35, j_max=1.5, j_points=101,
                  n_th_min=0.0, n_th_max=500.0, n_th_points=101, snapshot_time=0.1),
    # inside the RWA and adiabatic-elimination margins (G ~ kappa/10 ~ omega_m/100)
    "optomech": dict(omega_m=1.0, kappa=0.1, damping=1e-5, g0=1e-5, drive=1000.0),
}

COMMAND_DEFAULTS = {
    "spectrum": "binary-spectrum",
    "evolve": "binary-noisy",
    "esd-scan": "esd-scan",
    "wigner": "binary-wigner",
    "heatmap": "binary-thermal",
    "optomech-derive": "optomech",
}


def _convert(name: str, raw, default):
    if isinstance(raw, str):
        text = raw.strip()
    else:
        return raw
    try:
        if isinstance(default, bool):
            low = text.lower()
            if low in ("1", "true", "yes", "on"):
                return True
            if low in ("0", "false", "no", "off"):
                return False
            raise ValueError(text)
        if isinstance(default, Topology):
            return Topology.parse(text)
        if isinstance(default, int):
            return int(text)
        if isinstance(default, float):
            return float(text)
        if isinstance(default, tuple):
            items = [t.strip() for t in text.split(",") if t.strip()]
            if name == "coupling":
                return tuple(items)
            return tuple(float(t) for t in items)
        return text
    except ValueError:
        raise ConfigError(f"cannot parse {name} = {raw!r}") from None


def parse_config_text(text: str) -> dict[str, str]:
    """Parse ``key = value`` lines into a raw string mapping."""
    out = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {line!r}")
        key, value = line.split("=", 1)
        out[key.strip()] = value.strip()
    return out


def load_config(command: str, path: str | Path | None = None, overrides=()) -> ExperimentConfig:
    """Resolve the configuration for ``command`` and validate it.

    ``overrides`` is an iterable of ``"key=value"`` strings.
    """
    raw: dict[str, str] = {}
    if path is not None:
        try:
            raw.update(parse_config_text(Path(path).read_text()))
        except OSError as exc:
            raise ConfigError(f"cannot read config file: {exc}") from None
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"--set expects key=value, got {item!r}")
        key, value = item.split("=", 1)
        raw[key.strip()] = value.strip()

    name = raw.get("experiment", COMMAND_DEFAULTS.get(command, "binary-noisy"))
    if name not in EXPERIMENTS:
        raise ConfigError(f"unknown experiment {name!r}; registered: {', '.join(sorted(EXPERIMENTS))}")
    merged = {k: str(v) for k, v in EXPERIMENTS[name].items()}
    merged.update(raw)
    merged["experiment"] = name

    defaults = ExperimentConfig()
    known = {f.name for f in fields(ExperimentConfig)}
    unknown = sorted(set(merged) - known)
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
    values = {k: _convert(k, v, getattr(defaults, k)) for k, v in merged.items()}
    try:
        cfg = dataclasses.replace(defaults, **values)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    return cfg.validate(command)
