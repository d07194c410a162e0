"""Optomechanically induced mechanical gain and loss.

A driven cavity tuned to the Stokes sideband (``Delta = -omega_m``) amplifies
its mechanical mode; tuned to the anti-Stokes sideband (``Delta = +omega_m``)
it damps it. After linearizing around the classical steady state, applying
the rotating-wave approximation and adiabatically eliminating the cavity,
either process acts on the mechanics at the rate ``Gamma = 4 G^2 / kappa``
with ``G = g |alpha|``.
"""
from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass, replace
from typing import NamedTuple

from .model import ResonatorNetwork, Topology

__all__ = [
    "Sideband",
    "CavityParams",
    "SteadyState",
    "SteadyStateError",
    "InducedRate",
    "Diagnostic",
    "solve_steady_state",
    "tune_to_sideband",
    "induced_rate",
    "validity_report",
    "network_from_cavities",
]

log = logging.getLogger(__name__)


class Sideband(enum.Enum):
    STOKES = "stokes"  # Delta = -omega_m, gain
    ANTI_STOKES = "anti_stokes"  # Delta = +omega_m, loss

    @classmethod
    def parse(cls, value) -> "Sideband":
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower().replace("-", "_")
        try:
            return cls(key)
        except ValueError:
            raise ValueError(f"unknown sideband {value!r}; expected 'stokes' or 'anti_stokes'") from None

    @property
    def target_detuning_sign(self) -> int:
        return -1 if self is Sideband.STOKES else 1


@dataclass(frozen=True)
class CavityParams:
    """One driven optomechanical cavity (``hbar = 1``).

    ``detuning`` is the bare cavity-laser detuning ``omega_c - omega_l``;
    ``damping`` is the intrinsic mechanical damping rate.
    """

    omega_m: float
    kappa: float
    damping: float
    g0: float
    drive: float
    detuning: float
    sideband: Sideband
    n_th: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "sideband", Sideband.parse(self.sideband))
        for name in ("omega_m", "kappa", "g0"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)!r}")
        for name in ("damping", "drive", "n_th"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value >= 0):
                raise ValueError(f"{name} must be finite and non-negative, got {value!r}")
        if not math.isfinite(self.detuning):
            raise ValueError("detuning must be finite")


@dataclass(frozen=True)
class SteadyState:
    """Classical operating point: cavity ``alpha``, mechanics ``beta``, effective ``detuning``."""

    alpha: complex
    beta: complex
    detuning: float
    iterations: int = 0
    residual: float = 0.0
    residual_history: tuple[float, ...] = ()


class SteadyStateError(RuntimeError):
    """Fixed-point iteration failed to converge (typically optical bistability)."""


def _amplitudes(p: CavityParams, delta: float) -> tuple[complex, complex]:
    alpha = -1j * p.drive / (1j * delta + 0.5 * p.kappa)
    beta = 1j * p.g0 * abs(alpha) ** 2 / (1j * p.omega_m + 0.5 * p.damping)
    return alpha, beta


def _residuals(p: CavityParams, alpha, beta, delta) -> float:
    scale_a = max(p.drive, 1e-300)
    scale_b = max(p.g0 * abs(alpha) ** 2, 1e-300)
    ra = abs((1j * delta + 0.5 * p.kappa) * alpha + 1j * p.drive) / scale_a if p.drive else abs(alpha)
    rb = abs((1j * p.omega_m + 0.5 * p.damping) * beta - 1j * p.g0 * abs(alpha) ** 2) / scale_b if p.drive else abs(beta)
    rd = abs(delta - (p.detuning - 2 * p.g0 * beta.real)) / max(abs(p.detuning), abs(delta), 1.0)
    return max(ra, rb, rd)


def solve_steady_state(p: CavityParams, relaxation: float = 0.5, tol: float = 1e-10,
                       max_iter: int = 10_000) -> SteadyState:
    """Self-consistent classical steady state by damped fixed-point iteration.

    Starting from the bare detuning, iterates
    ``Delta <- Delta + relaxation * (Delta0 - 2 g Re beta(Delta) - Delta)``
    until the relative change falls below ``tol``.

    Raises
    ------
    SteadyStateError
        If the iteration does not converge within ``max_iter`` steps; a
        bistable operating point is reported rather than silently picking
        a branch.
    """
    delta = p.detuning
    history = []
    for it in range(1, max_iter + 1):
        _, beta = _amplitudes(p, delta)
        target = p.detuning - 2 * p.g0 * beta.real
        change = abs(target - delta) / max(abs(delta), 1.0)
        history.append(change)
        if not math.isfinite(target):
            break
        if change < tol:
            delta = target
            alpha, beta = _amplitudes(p, delta)
            res = _residuals(p, alpha, beta, delta)
            log.debug("steady state converged in %d iterations (residual %.2e)", it, res)
            return SteadyState(alpha, beta, delta, it, res, tuple(history))
        delta += relaxation * (target - delta)
    raise SteadyStateError(
        f"steady state did not converge in {max_iter} iterations "
        f"(last relative change {history[-1]:.3g}); the drive may be in the bistable regime")


def tune_to_sideband(p: CavityParams) -> CavityParams:
    """Return ``p`` with the bare detuning chosen so that ``Delta = -+omega_m``.

    The effective detuning fixes ``|alpha|`` and ``beta``, so the matching bare
    detuning follows in closed form: ``Delta0 = Delta + 2 g Re beta``.
    """
    delta = p.sideband.target_detuning_sign * p.omega_m
    _, beta = _amplitudes(p, delta)
    return replace(p, detuning=delta + 2 * p.g0 * beta.real)


class InducedRate(NamedTuple):
    G: float
    rate: float
    role: str  # "gain" or "loss"


def induced_rate(ss: SteadyState, p: CavityParams) -> InducedRate:
    """Effective coupling ``G = g|alpha|`` and induced rate ``Gamma = 4 G^2 / kappa``."""
    G = p.g0 * abs(ss.alpha)
    role = "gain" if p.sideband is Sideband.STOKES else "loss"
    return InducedRate(G, 4 * G * G / p.kappa, role)


@dataclass(frozen=True)
class Diagnostic:
    name: str
    ratio: float
    margin: float

    @property
    def ok(self) -> bool:
        return self.ratio >= self.margin

    def __str__(self):
        state = "ok" if self.ok else "WARNING"
        return f"{self.name}: ratio {self.ratio:.4g} vs margin {self.margin:g} [{state}]"


def _ratio(a, b):
    return math.inf if b == 0 else a / b


def validity_report(ss: SteadyState, p: CavityParams, margin: float = 10.0) -> list[Diagnostic]:
    """Check the rotating-wave and adiabatic-elimination hierarchies.

    RWA needs ``omega_m >> {G, kappa, gamma}``; eliminating the cavity needs
    ``kappa >> {G, gamma}``. Also checks that the effective detuning sits on
    the requested sideband. Failing checks are logged as warnings.
    """
    G = p.g0 * abs(ss.alpha)
    target = p.sideband.target_detuning_sign * p.omega_m
    report = [
        Diagnostic("rwa_omega_m/G", _ratio(p.omega_m, G), margin),
        Diagnostic("rwa_omega_m/kappa", _ratio(p.omega_m, p.kappa), margin),
        Diagnostic("rwa_omega_m/gamma", _ratio(p.omega_m, p.damping), margin),
        Diagnostic("adiabatic_kappa/G", _ratio(p.kappa, G), margin),
        Diagnostic("adiabatic_kappa/gamma", _ratio(p.kappa, p.damping), margin),
        # detuning error compared against the cavity linewidth
        Diagnostic("sideband_kappa/|Delta-target|", _ratio(p.kappa, abs(ss.detuning - target)), margin),
    ]
    for d in report:
        if not d.ok:
            log.warning("%s", d)
    return report


def network_from_cavities(gain: CavityParams, loss: CavityParams, coupling: float,
                          topology: Topology | str = Topology.BINARY, rtol: float = 1e-9) -> ResonatorNetwork:
    """Build a resonator chain from a Stokes-driven and an anti-Stokes-driven cavity.

    Both pipelines must induce the same rate and share the mechanical damping
    and bath occupation.
    """
    if gain.sideband is not Sideband.STOKES or loss.sideband is not Sideband.ANTI_STOKES:
        raise ValueError("need one Stokes (gain) and one anti-Stokes (loss) cavity")
    r_gain = induced_rate(solve_steady_state(gain), gain).rate
    r_loss = induced_rate(solve_steady_state(loss), loss).rate
    if not math.isclose(r_gain, r_loss, rel_tol=rtol):
        raise ValueError(f"gain and loss rates differ: {r_gain!r} vs {r_loss!r}")
    if gain.damping != loss.damping or gain.n_th != loss.n_th:
        raise ValueError("both resonators must share damping and n_th")
    return ResonatorNetwork(topology, r_gain, gain.damping, coupling, gain.n_th)
