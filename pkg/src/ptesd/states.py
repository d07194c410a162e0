"""Initial Gaussian covariance matrices."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "CovarianceState",
    "symplectic_form",
    "is_physical",
    "vacuum",
    "thermal",
    "two_mode_squeezed",
    "squeezed_vacuum",
    "beamsplitter",
    "cv_ghz",
]

MAX_SQUEEZING = 10.0


def symplectic_form(n_modes: int) -> np.ndarray:
    """Block-diagonal ``Omega`` with ``[[0, 1], [-1, 0]]`` per mode."""
    return np.kron(np.eye(n_modes), np.array([[0.0, 1.0], [-1.0, 0.0]]))


@dataclass(frozen=True)
class CovarianceState:
    """Symmetric covariance matrix ``V`` at time ``t`` (vacuum is ``I/2``)."""

    V: np.ndarray
    t: float = 0.0

    def __post_init__(self):
        V = np.array(self.V, dtype=float)
        if V.ndim != 2 or V.shape[0] != V.shape[1] or V.shape[0] % 2:
            raise ValueError(f"covariance matrix must be square with even size, got shape {V.shape}")
        if not np.allclose(V, V.T, rtol=1e-12, atol=1e-12):
            raise ValueError("covariance matrix must be symmetric")
        V.setflags(write=False)
        object.__setattr__(self, "V", V)
        object.__setattr__(self, "t", float(self.t))

    @property
    def n_modes(self) -> int:
        return self.V.shape[0] // 2


def is_physical(V, tol: float = 1e-12) -> bool:
    """Uncertainty principle ``V + i Omega / 2 >= 0`` up to ``tol``."""
    V = np.asarray(V, dtype=float)
    M = V + 0.5j * symplectic_form(V.shape[0] // 2)
    return bool(np.linalg.eigvalsh(M).min() >= -tol)


def _check_r(r: float) -> float:
    r = float(r)
    if not math.isfinite(r) or abs(r) > MAX_SQUEEZING:
        raise ValueError(f"squeezing parameter must satisfy |r| <= {MAX_SQUEEZING}, got {r!r}")
    return r


def vacuum(n_modes: int) -> CovarianceState:
    if n_modes not in (2, 3):
        raise ValueError(f"only 2- and 3-mode chains are supported, got {n_modes}")
    return CovarianceState(0.5 * np.eye(2 * n_modes))


def thermal(n_modes: int, n_th: float) -> CovarianceState:
    """Product of thermal states with mean occupation ``n_th``."""
    if n_th < 0:
        raise ValueError("n_th must be non-negative")
    return CovarianceState((n_th + 0.5) * np.eye(2 * n_modes))


def two_mode_squeezed(r: float) -> CovarianceState:
    """Two-mode squeezed vacuum ``exp(r (b1^dag b2^dag - b1 b2)) |0, 0>``."""
    r = _check_r(r)
    c, s = 0.5 * math.cosh(2 * r), 0.5 * math.sinh(2 * r)
    V = c * np.eye(4)
    V[0, 2] = V[2, 0] = s
    V[1, 3] = V[3, 1] = -s
    return CovarianceState(V)


def squeezed_vacuum(rs) -> np.ndarray:
    """Product of single-mode squeezed vacua, ``diag(e^{-2r}, e^{2r})/2`` per mode.

    Positive ``r`` squeezes position, negative ``r`` squeezes momentum.
    """
    diag = []
    for r in rs:
        r = _check_r(r)
        diag += [0.5 * math.exp(-2 * r), 0.5 * math.exp(2 * r)]
    return np.diag(diag)


def beamsplitter(theta: float, i: int, j: int, n_modes: int) -> np.ndarray:
    """Symplectic beamsplitter mixing modes ``i`` and ``j`` by angle ``theta``.

    ``q_i -> cos(theta) q_i + sin(theta) q_j`` and
    ``q_j -> -sin(theta) q_i + cos(theta) q_j``, identically for momenta.
    """
    S = np.eye(2 * n_modes)
    c, s = math.cos(theta), math.sin(theta)
    for off in (0, 1):
        a, b = 2 * i + off, 2 * j + off
        S[a, a], S[a, b], S[b, a], S[b, b] = c, s, -s, c
    return S


def cv_ghz(r1: float, r2: float) -> CovarianceState:
    """Three-mode continuous-variable GHZ state.

    Mode 1 enters momentum-squeezed by ``r1``, modes 2 and 3 position-squeezed
    by ``r2``. A beamsplitter with transmissivity 1/3 mixes modes 1 and 2,
    then a balanced beamsplitter mixes modes 2 and 3. The output has
    squeezed total momentum ``p1 + p2 + p3`` and squeezed relative positions
    ``q_i - q_j``; it is pure and symmetric under exchange of modes 2 and 3.
    """
    V = squeezed_vacuum([-r1, r2, r2])
    S = beamsplitter(-math.pi / 4, 1, 2, 3) @ beamsplitter(-math.acos(1 / math.sqrt(3)), 0, 1, 3)
    V = S @ V @ S.T
    return CovarianceState(0.5 * (V + V.T))
