"""Eigenfrequencies, PT phase and exceptional points of a resonator chain."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .model import LinearSystem, ResonatorNetwork, Topology, build_hamiltonian, linear_system

__all__ = [
    "Phase",
    "SpectralReport",
    "eigenfrequencies",
    "closed_form_frequencies",
    "critical_coupling",
    "locate_ep",
    "classify_phase",
    "is_stable",
    "spectral_report",
]

# Relative eigenvalue scatter of a dense solver at an order-k EP is ~eps**(1/k),
# i.e. ~6e-6 at EP3; clusters are counted with comfortable headroom above that.
CLUSTER_TOL = 1e-4


class Phase(enum.Enum):
    UNBROKEN = "unbroken"
    BROKEN = "broken"
    EXCEPTIONAL_POINT = "exceptional_point"


@dataclass(frozen=True)
class SpectralReport:
    eigenvalues_H: tuple[complex, ...]
    eigenvalues_A: tuple[complex, ...]
    phase: Phase
    ep_coupling: float
    ep_order: int
    stable: bool


def _sort_complex(values) -> np.ndarray:
    values = np.asarray(values, dtype=complex)
    # round away solver noise so ties order by imaginary part deterministically
    key_re = np.round(values.real, 10)
    key_im = np.round(values.imag, 10)
    return values[np.lexsort((key_im, key_re))]


def _pair_degenerate(values: np.ndarray) -> np.ndarray:
    # Each frequency appears twice in the 2N quadrature spectrum (b and b^dag sectors).
    remaining = list(np.asarray(values, dtype=complex))
    merged = []
    while remaining:
        v = remaining.pop(0)
        j = int(np.argmin([abs(v - w) for w in remaining]))
        merged.append(0.5 * (v + remaining.pop(j)))
    return np.array(merged)


def eigenfrequencies(net: ResonatorNetwork) -> np.ndarray:
    """The N eigenfrequencies of the quadrature Hamiltonian.

    Obtained by dense diagonalization of the 2N x 2N matrix ``H`` and merging
    its doubly degenerate eigenvalues. Sorted by real, then imaginary part.
    """
    w = np.linalg.eigvals(build_hamiltonian(net))
    return _sort_complex(_pair_degenerate(w))


def closed_form_frequencies(net: ResonatorNetwork) -> np.ndarray:
    """Analytic eigenfrequencies.

    Binary: ``+-sqrt(J^2 - Gamma^2/4)``. Ternary: roots of
    ``w (w^2 + Gamma^2/4 - 2 J^2) = 0``.
    """
    G, J = net.gain_rate, net.coupling
    if net.topology is Topology.BINARY:
        s = np.sqrt(complex(J * J - G * G / 4))
        return _sort_complex([-s, s])
    s = np.sqrt(complex(2 * J * J - G * G / 4))
    return _sort_complex([-s, 0.0, s])


def critical_coupling(net: ResonatorNetwork) -> float:
    """Closed-form EP coupling: ``Gamma/2`` (binary) or ``Gamma/(2 sqrt 2)`` (ternary)."""
    if net.topology is Topology.BINARY:
        return 0.5 * net.gain_rate
    return net.gain_rate / (2.0 * math.sqrt(2.0))


def _discriminant(net: ResonatorNetwork, coupling: float) -> float:
    # Re(w^2) of the outermost numerical eigenfrequency: >0 unbroken, <0 broken.
    w = eigenfrequencies(net.with_coupling(coupling))
    outer = w[np.argmax(np.abs(w))]
    return float((outer * outer).real)


def locate_ep(net: ResonatorNetwork, j_range: tuple[float, float] | None = None,
              n_scan: int = 2001, xtol: float = 1e-13) -> tuple[float, int]:
    """Find the exceptional point numerically.

    Scans ``J`` over ``j_range`` (default ``[0, 2 Gamma]``) for the sign change
    of the eigenfrequency discriminant, refines it by bisection, and counts
    how many eigenfrequencies coalesce there.

    Returns
    -------
    (ep_coupling, ep_order)

    Raises
    ------
    ValueError
        If ``Gamma <= 0``.
    RuntimeError
        If no coalescence is found in the scan range, or the numerical EP
        disagrees with the closed form.
    """
    G = net.gain_rate
    if G <= 0:
        raise ValueError("an exceptional point requires gain_rate > 0")
    lo_j, hi_j = j_range if j_range is not None else (0.0, 2.0 * G)
    grid = np.linspace(lo_j, hi_j, n_scan)
    signs = np.array([_discriminant(net, j) for j in grid])
    crossings = np.flatnonzero((signs[:-1] < 0) & (signs[1:] >= 0))
    if crossings.size == 0:
        raise RuntimeError(f"no eigenvalue coalescence found for J in [{lo_j}, {hi_j}]")
    a, b = grid[crossings[0]], grid[crossings[0] + 1]
    while b - a > xtol * G:
        mid = 0.5 * (a + b)
        if _discriminant(net, mid) < 0:
            a = mid
        else:
            b = mid
    j_ep = 0.5 * (a + b)

    w = eigenfrequencies(net.with_coupling(j_ep))
    centre = w[np.argmin(np.abs(w))]
    order = int(np.sum(np.abs(w - centre) < CLUSTER_TOL * G))
    if order < 2:
        raise RuntimeError(f"discriminant changes sign at J={j_ep} but eigenvalues do not coalesce")
    expected = critical_coupling(net)
    if abs(j_ep - expected) > 1e-6 * G:
        raise RuntimeError(f"numerical EP at J={j_ep} disagrees with closed form {expected}")
    return j_ep, order


def classify_phase(net: ResonatorNetwork, tol: float = 1e-9) -> Phase:
    """PT phase of the network.

    ``EXCEPTIONAL_POINT`` when ``|J - J_c| <= tol * Gamma``, otherwise
    ``UNBROKEN`` if every eigenfrequency is real to within ``tol`` and
    ``BROKEN`` if not.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if net.gain_rate > 0 and abs(net.coupling - critical_coupling(net)) <= tol * net.gain_rate:
        return Phase.EXCEPTIONAL_POINT
    w = eigenfrequencies(net)
    if np.all(np.abs(w.imag) <= tol * max(net.gain_rate, 1.0)):
        return Phase.UNBROKEN
    return Phase.BROKEN


def is_stable(system: LinearSystem) -> bool:
    """True iff every eigenvalue of the drift matrix has negative real part."""
    return bool(np.max(np.linalg.eigvals(system.drift).real) < 0)


def spectral_report(net: ResonatorNetwork, tol: float = 1e-9) -> SpectralReport:
    system = linear_system(net)
    if net.gain_rate > 0:
        ep_coupling, ep_order = locate_ep(net)
    else:
        ep_coupling, ep_order = 0.0, net.n_modes
    return SpectralReport(
        eigenvalues_H=tuple(eigenfrequencies(net)),
        eigenvalues_A=tuple(_sort_complex(np.linalg.eigvals(system.drift))),
        phase=classify_phase(net, tol),
        ep_coupling=ep_coupling,
        ep_order=ep_order,
        stable=is_stable(system),
    )
