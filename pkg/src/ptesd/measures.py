"""Entanglement quantifiers and phase-space slices for Gaussian states."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .dynamics import Trajectory, propagate
from .states import CovarianceState, symplectic_form

__all__ = [
    "NonPhysicalStateError",
    "EntanglementRecord",
    "TripartiteClass",
    "TripartiteRecord",
    "HGWeights",
    "GHZ_WEIGHTS",
    "symplectic_eigenvalues",
    "partial_transpose",
    "nu_minus",
    "log_negativity",
    "entanglement_series",
    "esd_time",
    "tripartite_S",
    "tripartite_series",
    "class_transitions",
    "wigner_function",
    "wigner_slice",
    "slice_anisotropy",
]


class NonPhysicalStateError(ValueError):
    """The covariance matrix violates the uncertainty principle or is singular."""


def _matrix(V) -> np.ndarray:
    if isinstance(V, CovarianceState):
        return V.V
    return np.asarray(V, dtype=float)


def symplectic_eigenvalues(V) -> np.ndarray:
    """The N symplectic eigenvalues of ``V``, ascending.

    Computed as the moduli of the eigenvalues of ``i Omega V``, which come in
    ``+-nu`` pairs.
    """
    V = _matrix(V)
    if V.ndim != 2 or V.shape[0] != V.shape[1] or V.shape[0] % 2:
        raise ValueError("V must be a square matrix of even dimension")
    if not np.allclose(V, V.T, rtol=1e-10, atol=1e-12):
        raise ValueError("V must be symmetric")
    n = V.shape[0] // 2
    nu = np.sort(np.abs(np.linalg.eigvals(1j * symplectic_form(n) @ V)))
    return nu.reshape(n, 2).mean(axis=1)


def partial_transpose(V, mode: int = 1) -> np.ndarray:
    """Flip the sign of the momentum of ``mode`` (0-based)."""
    V = _matrix(V)
    flip = np.ones(V.shape[0])
    flip[2 * mode + 1] = -1.0
    return V * np.outer(flip, flip)


@dataclass(frozen=True)
class EntanglementRecord:
    E_N: float
    nu_minus: float
    t: float = 0.0


def nu_minus(V) -> float:
    """Smallest partially transposed symplectic eigenvalue of a two-mode CM.

    Uses ``Sigma = det A + det B - 2 det C`` for the block form
    ``V = [[A, C], [C^T, B]]``.

    Raises
    ------
    NonPhysicalStateError
        When the closed form turns complex.
    """
    V = _matrix(V)
    if V.shape != (4, 4):
        raise ValueError("nu_minus needs a two-mode (4 x 4) covariance matrix")
    # the invariants below cannot tell V from -V
    if V[0, 0] <= 0 or V[2, 2] <= 0:
        raise NonPhysicalStateError("two-mode CM has a non-positive variance")
    sigma = np.linalg.det(V[:2, :2]) + np.linalg.det(V[2:, 2:]) - 2 * np.linalg.det(V[:2, 2:])
    det = np.linalg.det(V)
    disc = sigma * sigma - 4 * det
    # disc vanishes for symmetric pure-like cases; forgive rounding
    if -1e-12 * sigma * sigma < disc < 0:
        disc = 0.0
    inner = sigma - math.sqrt(disc) if disc >= 0 else -1.0
    if disc < 0 or inner <= 0 or det <= 0:
        raise NonPhysicalStateError(
            f"two-mode CM is not physical (Sigma={sigma:.6g}, det V={det:.6g}); the integration may have blown up")
    return math.sqrt(inner / 2)


def log_negativity(V, t: float | None = None) -> EntanglementRecord:
    """Logarithmic negativity ``E_N = max(0, -ln 2 nu_-)`` of a two-mode CM."""
    if t is None:
        t = V.t if isinstance(V, CovarianceState) else 0.0
    nu = nu_minus(V)
    return EntanglementRecord(max(0.0, -math.log(2 * nu)), nu, float(t))


def entanglement_series(traj: Trajectory) -> Trajectory:
    """Attach ``E_N`` and ``nu_minus`` series to a two-mode trajectory."""
    nus = np.array([nu_minus(s) for s in traj.states])
    return traj.with_scalars(E_N=np.maximum(0.0, -np.log(2 * nus)), nu_minus=nus)


def esd_time(traj: Trajectory, tol: float = 1e-4) -> float | None:
    """First time the two modes become separable (entanglement sudden death).

    Looks for the first pair of snapshots with ``nu_- < 1/2`` followed by
    ``nu_- >= 1/2`` and bisects on ``nu_- - 1/2`` down to ``tol``. When the
    trajectory carries its generating system, intermediate states are
    re-integrated from the left snapshot; otherwise ``nu_-`` is linearly
    interpolated. Returns ``None`` when no death occurs in the window,
    including for states that are never entangled.
    """
    if "nu_minus" in traj.scalars:
        nus = np.asarray(traj.scalars["nu_minus"], dtype=float)
    else:
        nus = np.array([nu_minus(s) for s in traj.states])
    below = nus < 0.5
    hits = np.flatnonzero(below[:-1] & ~below[1:])
    if hits.size == 0:
        return None
    k = int(hits[0])
    t0, t1 = float(traj.times[k]), float(traj.times[k + 1])
    if traj.system is None:
        f0, f1 = nus[k] - 0.5, nus[k + 1] - 0.5
        return t0 + (t1 - t0) * f0 / (f0 - f1)

    V0 = traj.states[k].V
    step = traj.dt if traj.dt is not None else (t1 - t0)
    lo, hi = t0, t1
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if nu_minus(propagate(traj.system, V0, mid - t0, step)) < 0.5:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


class TripartiteClass(enum.Enum):
    GENUINE = "genuine"
    FULLY_INSEPARABLE = "fully_inseparable"
    UNDETERMINED = "undetermined"


@dataclass(frozen=True)
class HGWeights:
    """Coefficients of ``x = sum h_k q_k`` and ``y = sum g_k p_k``."""

    h: tuple[float, float, float]
    g: tuple[float, float, float]

    def __post_init__(self):
        h = tuple(float(v) for v in self.h)
        g = tuple(float(v) for v in self.g)
        if len(h) != 3 or len(g) != 3:
            raise ValueError("weights need three entries each")
        if not any(h) and not any(g):
            raise ValueError("weights must not all vanish")
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "g", g)

    def pair_bound(self, k: int) -> float:
        """``|h_k g_k| + |h_l g_l + h_m g_m|`` for the bipartition ``k | lm``."""
        hg = [a * b for a, b in zip(self.h, self.g)]
        l, m = (i for i in range(3) if i != k)
        return abs(hg[k]) + abs(hg[l] + hg[m])


_S2 = 1 / math.sqrt(2)
# h = (1, -1/sqrt2, -1/sqrt2), g = (1, 1/sqrt2, 1/sqrt2): [x, y] = 0
GHZ_WEIGHTS = HGWeights(h=(1.0, -_S2, -_S2), g=(1.0, _S2, _S2))


@dataclass(frozen=True)
class TripartiteRecord:
    S: float
    genuine_bound: float
    insep_bounds: tuple[float, float, float]
    klass: TripartiteClass
    t: float = 0.0


def tripartite_S(V, w: HGWeights = GHZ_WEIGHTS, t: float | None = None) -> TripartiteRecord:
    """Nonseparability functional ``S = Var(x) + Var(y)`` and its classification.

    ``S`` below the smallest bipartition bound certifies genuine tripartite
    entanglement. ``S`` below any one bipartition bound (but not all of them)
    is reported as full tripartite inseparability.
    """
    if t is None:
        t = V.t if isinstance(V, CovarianceState) else 0.0
    V = _matrix(V)
    if V.shape != (6, 6):
        raise ValueError("tripartite_S needs a three-mode (6 x 6) covariance matrix")
    u_x = np.zeros(6)
    u_y = np.zeros(6)
    u_x[0::2] = w.h
    u_y[1::2] = w.g
    S = float(u_x @ V @ u_x + u_y @ V @ u_y)
    bounds = tuple(w.pair_bound(k) for k in range(3))
    genuine = min(bounds)
    if S < genuine:
        klass = TripartiteClass.GENUINE
    elif S < max(bounds):
        klass = TripartiteClass.FULLY_INSEPARABLE
    else:
        klass = TripartiteClass.UNDETERMINED
    return TripartiteRecord(S, genuine, bounds, klass, float(t))


def tripartite_series(traj: Trajectory, w: HGWeights = GHZ_WEIGHTS) -> list[TripartiteRecord]:
    return [tripartite_S(s, w) for s in traj.states]


def class_transitions(records) -> list[tuple[float, TripartiteClass]]:
    """Times at which the classification changes, with the class entered."""
    out = []
    for prev, cur in zip(records, records[1:]):
        if cur.klass is not prev.klass:
            out.append((cur.t, cur.klass))
    return out


def _gaussian_inverse(V):
    V = _matrix(V)
    det = np.linalg.det(V)
    if not det > 0:
        raise NonPhysicalStateError(f"covariance matrix is singular or indefinite (det V = {det:.3g})")
    return np.linalg.inv(V), det


def wigner_function(V, u) -> np.ndarray:
    """Zero-mean Gaussian Wigner function evaluated at phase-space points ``u``.

    ``u`` has shape ``(..., 2N)`` in the ``(q1, p1, ..., qN, pN)`` ordering.
    """
    Vinv, det = _gaussian_inverse(V)
    u = np.asarray(u, dtype=float)
    n = Vinv.shape[0] // 2
    quad = np.einsum("...i,ij,...j->...", u, Vinv, u)
    return np.exp(-0.5 * quad) / ((2 * np.pi) ** n * math.sqrt(det))


def wigner_slice(V, q1=None, q2=None):
    """Two-mode Wigner function on a ``(q1, q2)`` grid at ``p1 = p2 = 0``.

    Grids default to 201 points on ``[-5, 5]``. Returns ``(q1, q2, W)`` with
    ``W[i, j] = W(q1[i], p1=0, q2[j], p2=0)``.
    """
    q1 = np.linspace(-5, 5, 201) if q1 is None else np.asarray(q1, dtype=float)
    q2 = np.linspace(-5, 5, 201) if q2 is None else np.asarray(q2, dtype=float)
    Vinv, det = _gaussian_inverse(V)
    if Vinv.shape != (4, 4):
        raise ValueError("wigner_slice needs a two-mode covariance matrix")
    M = Vinv[np.ix_([0, 2], [0, 2])]
    Q1, Q2 = np.meshgrid(q1, q2, indexing="ij")
    quad = M[0, 0] * Q1 ** 2 + 2 * M[0, 1] * Q1 * Q2 + M[1, 1] * Q2 ** 2
    return q1, q2, np.exp(-0.5 * quad) / ((2 * np.pi) ** 2 * math.sqrt(det))


def slice_anisotropy(V) -> float:
    """Width of the ``(q1, q2)`` slice along the diagonal over the anti-diagonal.

    Equals 1 for an isotropic slice; values above 1 signal the ``q1 ~ q2``
    correlations of a two-mode squeezed state.
    """
    Vinv, _ = _gaussian_inverse(V)
    M = Vinv[np.ix_([0, 2], [0, 2])]
    d = np.array([1.0, 1.0]) / math.sqrt(2)
    a = np.array([1.0, -1.0]) / math.sqrt(2)
    return float((a @ M @ a) / (d @ M @ d))
