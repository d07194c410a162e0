"""Time evolution of the covariance matrix, ``dV/dt = A V + V A^T + D``."""
from __future__ import annotations

import dataclasses
import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import expm

from .model import LinearSystem
from .states import CovarianceState

__all__ = [
    "AccuracyGuardError",
    "Trajectory",
    "step_rk4",
    "evolve",
    "propagate",
    "lyapunov_oracle",
    "steady_state",
    "kronecker_generator",
    "DIVERGENCE_THRESHOLD",
]

log = logging.getLogger(__name__)

DIVERGENCE_THRESHOLD = 1e12
MAX_STEP_NORM = 0.1


class AccuracyGuardError(ValueError):
    """Raised when ``dt * ||A||_2`` exceeds the RK4 accuracy guard."""


@dataclass(frozen=True)
class Trajectory:
    """Recorded covariance snapshots of one run.

    ``system`` and ``dt`` are kept so that observables can be refined between
    snapshots (see :func:`ptesd.measures.esd_time`).
    """

    times: np.ndarray
    states: tuple[CovarianceState, ...]
    scalars: dict = field(default_factory=dict)
    diverged: bool = False
    system: LinearSystem | None = None
    dt: float | None = None

    def __post_init__(self):
        times = np.array(self.times, dtype=float)
        times.setflags(write=False)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "states", tuple(self.states))
        if len(times) != len(self.states):
            raise ValueError("times and states must have equal length")
        if np.any(np.diff(times) <= 0):
            raise ValueError("times must be strictly increasing")
        for k, series in self.scalars.items():
            if len(series) != len(times):
                raise ValueError(f"scalar series {k!r} is not aligned with times")

    def __len__(self):
        return len(self.times)

    @property
    def matrices(self) -> np.ndarray:
        return np.stack([s.V for s in self.states])

    @property
    def final(self) -> CovarianceState:
        return self.states[-1]

    def with_scalars(self, **series) -> "Trajectory":
        merged = dict(self.scalars)
        merged.update({k: np.asarray(v) for k, v in series.items()})
        return dataclasses.replace(self, scalars=merged)


def _rhs(V, A, D):
    AV = A @ V
    return AV + AV.T + D


def _check_step(A, dt):
    if not dt > 0:
        raise ValueError(f"dt must be positive, got {dt!r}")
    norm = np.linalg.norm(A, 2)
    if dt * norm > MAX_STEP_NORM:
        raise AccuracyGuardError(
            f"dt * ||A|| = {dt * norm:.3g} exceeds {MAX_STEP_NORM}; reduce dt below {MAX_STEP_NORM / norm:.3g}")


def _rk4(V, A, D, dt):
    k1 = _rhs(V, A, D)
    k2 = _rhs(V + 0.5 * dt * k1, A, D)
    k3 = _rhs(V + 0.5 * dt * k2, A, D)
    k4 = _rhs(V + dt * k3, A, D)
    out = V + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return 0.5 * (out + out.T)


def step_rk4(V, A, D, dt: float) -> np.ndarray:
    """One classical RK4 step of the Lyapunov ODE, symmetrized."""
    A = np.asarray(A, dtype=float)
    _check_step(A, dt)
    return _rk4(np.asarray(V, dtype=float), A, np.asarray(D, dtype=float), dt)


def _as_matrix(V0) -> np.ndarray:
    if isinstance(V0, CovarianceState):
        return V0.V
    return np.asarray(V0, dtype=float)


def propagate(system: LinearSystem, V0, t: float, dt: float) -> np.ndarray:
    """Integrate from ``V0`` over duration ``t`` with steps of at most ``dt``."""
    V = _as_matrix(V0)
    if t <= 0:
        return V.copy()
    n = max(1, math.ceil(t / dt - 1e-9))
    h = t / n
    _check_step(system.drift, h)
    A, D = system.drift, system.diffusion
    for _ in range(n):
        V = _rk4(V, A, D, h)
    return V


def evolve(system: LinearSystem, V0, t_end: float, dt: float = 1e-3,
           record_every: int = 1) -> Trajectory:
    """Integrate from ``t = 0`` to ``t_end`` with fixed-step RK4.

    The step is shrunk slightly if needed so that an integer number of steps
    lands exactly on ``t_end``. A snapshot is stored every ``record_every``
    steps and at the final time. If any entry of ``V`` exceeds
    ``DIVERGENCE_THRESHOLD`` the run stops and the trajectory is flagged as
    diverged (the expected outcome in the broken PT phase).
    """
    if not t_end > 0:
        raise ValueError(f"t_end must be positive, got {t_end!r}")
    if record_every < 1:
        raise ValueError("record_every must be >= 1")
    n_steps = max(1, math.ceil(t_end / dt - 1e-9))
    h = t_end / n_steps
    _check_step(system.drift, h)
    A, D = system.drift, system.diffusion

    V = _as_matrix(V0).copy()
    times, states = [0.0], [CovarianceState(V, 0.0)]
    diverged = False
    for k in range(1, n_steps + 1):
        V = _rk4(V, A, D, h)
        t = k * h
        # written so that NaN also counts as divergence
        if not np.all(np.abs(V) <= DIVERGENCE_THRESHOLD):
            diverged = True
            log.warning("covariance diverged at t=%.6g (max |V| > %.0e)", t, DIVERGENCE_THRESHOLD)
            if np.all(np.isfinite(V)):
                times.append(t)
                states.append(CovarianceState(V, t))
            break
        if k % record_every == 0 or k == n_steps:
            times.append(t)
            states.append(CovarianceState(V, t))
    return Trajectory(np.array(times), states, diverged=diverged, system=system, dt=h)


def kronecker_generator(A) -> np.ndarray:
    """Generator ``K`` with ``vec(A V + V A^T) = K vec(V)`` (row-major vec)."""
    A = np.asarray(A, dtype=float)
    eye = np.eye(A.shape[0])
    return np.kron(A, eye) + np.kron(eye, A)


def lyapunov_oracle(system: LinearSystem, V0, t: float) -> CovarianceState:
    """Exact ``V(t)`` from the matrix exponential of the vectorized equation.

    Uses the augmented generator ``[[K, vec D], [0, 0]]`` so the inhomogeneous
    term needs no inverse of ``K``. Meant for cross-checks on systems with at
    most three modes.
    """
    n = system.dim
    if n > 6:
        raise ValueError("the Kronecker oracle is limited to 2N <= 6")
    V0 = _as_matrix(V0)
    if t == 0:
        return CovarianceState(V0, 0.0)
    m = n * n
    G = np.zeros((m + 1, m + 1))
    G[:m, :m] = kronecker_generator(system.drift)
    G[:m, m] = system.diffusion.ravel()
    v = expm(G * t) @ np.append(V0.ravel(), 1.0)
    V = v[:m].reshape(n, n)
    return CovarianceState(0.5 * (V + V.T), t)


def steady_state(system: LinearSystem) -> np.ndarray:
    """Solution of ``A V + V A^T + D = 0`` via the Kronecker linear system."""
    n = system.dim
    v = np.linalg.solve(kronecker_generator(system.drift), -system.diffusion.ravel())
    V = v.reshape(n, n)
    return 0.5 * (V + V.T)
