"""Entanglement dynamics of PT-symmetric gain/loss resonator chains.

Gaussian covariance-matrix simulation of binary (gain-loss) and ternary
(gain-neutral-loss) mechanical chains whose gain and loss come from driven
optomechanical cavities. The subpackages are:

- ``model``: chain parameters, drift/diffusion matrices, non-Hermitian Hamiltonian
- ``spectral``: eigenfrequencies, PT phase, exceptional points, stability
- ``states``: vacuum, two-mode squeezed and CV GHZ covariance matrices
- ``dynamics``: RK4 integration of the Lyapunov equation and an exact oracle
- ``measures``: symplectic spectra, logarithmic negativity, sudden-death
  times, tripartite nonseparability, Wigner slices
- ``optomech``: steady states and induced gain/loss rates of driven cavities
"""
from .model import (
    LinearSystem,
    ResonatorNetwork,
    Topology,
    build_diffusion,
    build_drift,
    build_hamiltonian,
    linear_system,
)
from .spectral import Phase, classify_phase, eigenfrequencies, is_stable, locate_ep, spectral_report
from .states import CovarianceState, cv_ghz, two_mode_squeezed, vacuum
from .dynamics import Trajectory, evolve, lyapunov_oracle, step_rk4
from .measures import (
    GHZ_WEIGHTS,
    HGWeights,
    TripartiteClass,
    esd_time,
    log_negativity,
    symplectic_eigenvalues,
    tripartite_S,
    wigner_slice,
)
from .optomech import CavityParams, Sideband, induced_rate, solve_steady_state, validity_report

__version__ = "0.1.0"

__all__ = [
    "LinearSystem", "ResonatorNetwork", "Topology", "build_diffusion", "build_drift", "build_hamiltonian",
    "linear_system",
    "Phase", "classify_phase", "eigenfrequencies", "is_stable", "locate_ep", "spectral_report",
    "CovarianceState", "cv_ghz", "two_mode_squeezed", "vacuum",
    "Trajectory", "evolve", "lyapunov_oracle", "step_rk4",
    "GHZ_WEIGHTS", "HGWeights", "TripartiteClass", "esd_time", "log_negativity", "symplectic_eigenvalues",
    "tripartite_S", "wigner_slice",
    "CavityParams", "Sideband", "induced_rate", "solve_steady_state", "validity_report",
]
