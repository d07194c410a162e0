"""Gain/loss resonator chains and their linear quadrature dynamics.

All matrices use the interleaved quadrature ordering ``(q1, p1, q2, p2, ...)``
with ``q = (b + b^dag)/sqrt(2)`` and ``p = (b - b^dag)/(i sqrt(2))``, so the
vacuum covariance matrix is ``I/2``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "Topology",
    "ResonatorNetwork",
    "LinearSystem",
    "build_drift",
    "build_diffusion",
    "build_hamiltonian",
    "mode_hamiltonian",
    "linear_system",
    "parity_matrix",
    "pt_transform",
]


class Topology(enum.Enum):
    """Arrangement of the mechanical modes along the chain."""

    BINARY = "binary"  # gain - loss
    TERNARY = "ternary"  # gain - neutral - loss

    @property
    def n_modes(self) -> int:
        return 2 if self is Topology.BINARY else 3

    @classmethod
    def parse(cls, value: "Topology | str") -> "Topology":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).strip().lower())
        except ValueError:
            raise ValueError(f"unknown topology {value!r}; expected 'binary' or 'ternary'") from None


@dataclass(frozen=True)
class ResonatorNetwork:
    """Physical parameters of a PT-symmetric mechanical chain.

    Parameters
    ----------
    topology
        ``Topology.BINARY`` (gain, loss) or ``Topology.TERNARY``
        (gain, neutral, loss).
    gain_rate
        Optomechanically induced gain/loss rate (Gamma).
    damping
        Intrinsic mechanical damping (gamma).
    coupling
        Nearest-neighbour mechanical hopping strength (J).
    n_th
        Mean thermal phonon number of the mechanical baths.
    """

    topology: Topology
    gain_rate: float
    damping: float = 0.0
    coupling: float = 0.0
    n_th: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "topology", Topology.parse(self.topology))
        for name in ("gain_rate", "damping", "coupling", "n_th"):
            value = float(getattr(self, name))
            if not math.isfinite(value) or value < 0:
                raise ValueError(f"{name} must be finite and non-negative, got {value!r}")
            object.__setattr__(self, name, value)

    @property
    def n_modes(self) -> int:
        return self.topology.n_modes

    @property
    def mode_rates(self) -> tuple[float, ...]:
        """Net optomechanical amplitude rate of each mode, gain first."""
        half = 0.5 * self.gain_rate
        if self.topology is Topology.BINARY:
            return (half, -half)
        return (half, 0.0, -half)

    @property
    def pumped(self) -> tuple[bool, ...]:
        """Which modes are attached to a driven optomechanical cavity."""
        if self.topology is Topology.BINARY:
            return (True, True)
        return (True, False, True)

    def with_coupling(self, coupling: float) -> "ResonatorNetwork":
        return ResonatorNetwork(self.topology, self.gain_rate, self.damping, coupling, self.n_th)


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class LinearSystem:
    """Drift, diffusion and non-Hermitian Hamiltonian of a network.

    ``drift`` and ``diffusion`` generate the covariance equation
    ``dV/dt = A V + V A^T + D``; ``hamiltonian`` is the damping-free
    generator with ``A = -i H - (gamma/2) I``.
    """

    drift: np.ndarray
    diffusion: np.ndarray
    hamiltonian: np.ndarray
    network: ResonatorNetwork | None = None

    def __post_init__(self):
        A = np.asarray(self.drift, dtype=float)
        D = np.asarray(self.diffusion, dtype=float)
        H = np.asarray(self.hamiltonian, dtype=complex)
        n = A.shape[0]
        if A.shape != (n, n) or D.shape != (n, n) or H.shape != (n, n) or n % 2:
            raise ValueError("drift, diffusion and hamiltonian must be equal even-sized square matrices")
        if not np.allclose(D, D.T, rtol=0, atol=1e-14):
            raise ValueError("diffusion matrix must be symmetric")
        object.__setattr__(self, "drift", _frozen(A))
        object.__setattr__(self, "diffusion", _frozen(D))
        object.__setattr__(self, "hamiltonian", _frozen(H))

    @property
    def dim(self) -> int:
        return self.drift.shape[0]

    @property
    def n_modes(self) -> int:
        return self.dim // 2


def _coupling_generator(net: ResonatorNetwork) -> np.ndarray:
    # Real generator of the damping-free quadrature dynamics (A at gamma = 0).
    n = net.n_modes
    M = np.zeros((2 * n, 2 * n))
    for k, rate in enumerate(net.mode_rates):
        M[2 * k, 2 * k] = M[2 * k + 1, 2 * k + 1] = rate
    J = net.coupling
    # i J b_l in db_k/dt  ->  dq_k/dt = -J p_l,  dp_k/dt = +J q_l
    for k in range(n - 1):
        for a, b in ((k, k + 1), (k + 1, k)):
            M[2 * a, 2 * b + 1] = -J
            M[2 * a + 1, 2 * b] = J
    return M


def build_drift(net: ResonatorNetwork) -> np.ndarray:
    """Real drift matrix ``A`` of the quadrature Langevin equations."""
    M = _coupling_generator(net)
    return M - 0.5 * net.damping * np.eye(M.shape[0])


def build_diffusion(net: ResonatorNetwork) -> np.ndarray:
    """Diagonal noise-correlation matrix ``D``.

    Every mode receives ``gamma (n_th + 1/2)`` from its mechanical bath; each
    mode attached to a driven cavity additionally receives ``Gamma/2`` of
    cavity vacuum noise, whether that cavity amplifies or damps it.
    """
    thermal = net.damping * (net.n_th + 0.5)
    per_mode = [thermal + (0.5 * net.gain_rate if pumped else 0.0) for pumped in net.pumped]
    return np.diag(np.repeat(per_mode, 2))


def build_hamiltonian(net: ResonatorNetwork) -> np.ndarray:
    """Non-Hermitian quadrature Hamiltonian ``H`` with ``A|_{gamma=0} = -i H``."""
    return 1j * _coupling_generator(net)


def mode_hamiltonian(net: ResonatorNetwork) -> np.ndarray:
    """N x N Hamiltonian acting on the annihilation operators, ``db/dt = -i h b``."""
    h = 1j * np.diag(net.mode_rates).astype(complex)
    for k in range(net.n_modes - 1):
        h[k, k + 1] = h[k + 1, k] = -net.coupling
    return h


def linear_system(net: ResonatorNetwork, noise: bool = True) -> LinearSystem:
    """Assemble ``(A, D, H)``; ``noise=False`` drops the diffusion term."""
    A = build_drift(net)
    D = build_diffusion(net) if noise else np.zeros_like(A)
    return LinearSystem(A, D, build_hamiltonian(net), network=net)


def parity_matrix(n_modes: int) -> np.ndarray:
    """Quadrature permutation that reverses the chain (gain <-> loss)."""
    P = np.zeros((2 * n_modes, 2 * n_modes))
    for k in range(n_modes):
        j = n_modes - 1 - k
        P[2 * k, 2 * j] = P[2 * k + 1, 2 * j + 1] = 1.0
    return P


def pt_transform(H: np.ndarray) -> np.ndarray:
    """Apply parity and time reversal to a quadrature Hamiltonian.

    Time reversal acts as complex conjugation together with ``p -> -p``; a
    PT-symmetric ``H`` is a fixed point of this map.
    """
    H = np.asarray(H)
    n = H.shape[0] // 2
    PT = np.diag(np.tile([1.0, -1.0], n)) @ parity_matrix(n)
    return PT @ H.conj() @ PT.T
