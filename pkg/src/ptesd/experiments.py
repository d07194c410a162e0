"""Experiment runners behind the command-line subcommands.

Each runner takes a validated :class:`~ptesd.config.ExperimentConfig` and
returns a :class:`Table`; the CLI only formats and writes it. Sweeps over
couplings are farmed out to a process pool when ``workers > 1`` and
reassembled in input order, so results do not depend on scheduling.
"""
from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .config import ExperimentConfig
from .dynamics import evolve, propagate
from .measures import (
    NonPhysicalStateError,
    esd_time,
    log_negativity,
    nu_minus,
    slice_anisotropy,
    tripartite_S,
    wigner_slice,
)
from .model import LinearSystem, Topology, linear_system
from .optomech import CavityParams, Sideband, induced_rate, solve_steady_state, tune_to_sideband, validity_report
from .spectral import Phase, classify_phase, eigenfrequencies, locate_ep
from .states import cv_ghz, two_mode_squeezed, vacuum

__all__ = [
    "Table",
    "run_spectrum",
    "run_evolve",
    "run_esd_scan",
    "run_wigner",
    "run_heatmap",
    "run_optomech",
]


@dataclass
class Table:
    columns: list[str]
    rows: list[list] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    diverged: bool = False

    def to_csv(self, cfg: ExperimentConfig | None = None, title: str = "") -> str:
        buf = io.StringIO()
        if title:
            buf.write(f"# ptesd {title}\n")
        if cfg is not None:
            for line in cfg.echo():
                buf.write(f"# {line}\n")
        for note in self.notes:
            buf.write(f"# {note}\n")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.columns)
        for row in self.rows:
            writer.writerow([_fmt(v) for v in row])
        return buf.getvalue()


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".12g")
    return str(value)


def _pool_map(fn, items, workers: int):
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _initial_state(cfg: ExperimentConfig):
    if cfg.initial == "vacuum":
        return vacuum(cfg.topology.n_modes)
    if cfg.initial == "ghz" or (cfg.initial == "auto" and cfg.topology is Topology.TERNARY):
        return cv_ghz(cfg.r1, cfg.r2)
    return two_mode_squeezed(cfg.r)


# --- spectrum ----------------------------------------------------------------

def run_spectrum(cfg: ExperimentConfig) -> Table:
    n = cfg.topology.n_modes
    columns = ["J/Gamma", "kind"]
    for k in range(1, n + 1):
        columns += [f"re_w{k}", f"im_w{k}"]
    table = Table(columns)

    def row(j_ratio, kind, w=None):
        if w is None:
            w = eigenfrequencies(cfg.network(j_ratio)) / cfg.scale
        vals = [j_ratio, kind]
        for z in w:
            vals += [_clean(z.real), _clean(z.imag)]
        return vals

    for j in cfg.j_grid():
        table.rows.append(row(float(j), "sweep"))
    if cfg.gain_rate > 0:
        j_ep, order = locate_ep(cfg.network(0.0))
        # all branches coalesce at zero; a dense solver would only resolve them to ~eps**(1/order)
        table.rows.append(row(j_ep / cfg.scale, f"ep{order}", np.zeros(n, dtype=complex)))
        table.notes.append(f"exceptional point of order {order} at J/Gamma = {j_ep / cfg.scale:.12g}")
    else:
        table.notes.append("gain_rate = 0: Hermitian chain, no exceptional point; J column in absolute units")
    return table


def _clean(x: float, floor: float = 1e-12) -> float:
    # dense-solver noise on a vanishing component is reported as exact zero
    return 0.0 if abs(x) < floor else float(x)


# --- evolve ------------------------------------------------------------------

def _evolve_one(args):
    cfg, j_ratio = args
    net = cfg.network(j_ratio)
    system = linear_system(net, noise=cfg.noise)
    traj = evolve(system, _initial_state(cfg), cfg.t_end / cfg.scale, cfg.dt / cfg.scale, cfg.record_every)
    rows = []
    nonphysical = False
    for state in traj.states:
        gt = state.t * cfg.scale
        if cfg.topology is Topology.BINARY:
            try:
                rec = log_negativity(state)
            except NonPhysicalStateError:
                nonphysical = True
                break
            rows.append([j_ratio, gt, rec.E_N, rec.nu_minus])
        else:
            rec = tripartite_S(state)
            rows.append([j_ratio, gt, rec.S, rec.klass.value])
    return rows, traj.diverged or nonphysical, traj.times[-1] * cfg.scale


def run_evolve(cfg: ExperimentConfig) -> Table:
    if cfg.topology is Topology.BINARY:
        table = Table(["J/Gamma", "Gamma*t", "E_N", "nu_minus"])
    else:
        table = Table(["J/Gamma", "Gamma*t", "S", "klass"])
    ratios = cfg.coupling_ratios()
    for j, (rows, diverged, t_stop) in zip(ratios, _pool_map(_evolve_one, [(cfg, j) for j in ratios], cfg.workers)):
        table.rows.extend(rows)
        phase = classify_phase(cfg.network(j))
        table.notes.append(f"J/Gamma = {j:.12g}: phase {phase.value}" + (
            f", DIVERGED at Gamma*t = {t_stop:.6g}" if diverged else ""))
        table.diverged |= diverged
    return table


# --- ESD scan ----------------------------------------------------------------

def _esd_one(args):
    cfg, j_ratio = args
    system = linear_system(cfg.network(j_ratio), noise=cfg.noise)
    traj = evolve(system, _initial_state(cfg), cfg.t_end / cfg.scale, cfg.dt / cfg.scale, cfg.record_every)
    t = esd_time(traj, tol=cfg.esd_tol / cfg.scale)
    return None if t is None else t * cfg.scale


def run_esd_scan(cfg: ExperimentConfig) -> Table:
    table = Table(["J/Gamma", "Gamma*t_ESD"])
    ratios = cfg.coupling_ratios()
    for j, t in zip(ratios, _pool_map(_esd_one, [(cfg, j) for j in ratios], cfg.workers)):
        table.rows.append([j, t])
    table.notes.append(f"empty t_ESD: no sudden death within Gamma*t <= {cfg.t_end:g}")
    return table


# --- Wigner slices -----------------------------------------------------------

@dataclass
class WignerGrid:
    j_ratio: float
    gamma_t: float
    V: np.ndarray
    table: Table

    @property
    def filename(self) -> str:
        return f"wigner_J{self.j_ratio:.6g}_t{self.gamma_t:.6g}.csv"


def _wigner_one(args):
    cfg, j_ratio, gamma_t = args
    system = linear_system(cfg.network(j_ratio), noise=cfg.noise)
    V = propagate(system, _initial_state(cfg), gamma_t / cfg.scale, cfg.dt / cfg.scale)
    grid = np.linspace(cfg.grid_min, cfg.grid_max, cfg.grid_points)
    q1, q2, W = wigner_slice(V, grid, grid)
    table = Table(["q1", "q2", "W"])
    table.notes.append(f"J/Gamma = {j_ratio:.12g}, Gamma*t = {gamma_t:.12g}, slice p1 = p2 = 0")
    for row in V:
        table.notes.append("V " + " ".join(format(float(v), ".12g") for v in row))
    table.notes.append(f"anisotropy (diagonal/anti-diagonal width) = {slice_anisotropy(V):.12g}")
    for i, a in enumerate(q1):
        for k, b in enumerate(q2):
            table.rows.append([float(a), float(b), float(W[i, k])])
    return WignerGrid(j_ratio, gamma_t, V, table)


def run_wigner(cfg: ExperimentConfig) -> list[WignerGrid]:
    jobs = [(cfg, j, t) for j in cfg.coupling_ratios() for t in cfg.times]
    return _pool_map(_wigner_one, jobs, cfg.workers)


# --- thermal heatmaps ----------------------------------------------------------

def _thermal_response(system: LinearSystem, damping: float) -> LinearSystem:
    # d V / d n_th: same drift, diffusion gamma * I, zero initial condition
    return LinearSystem(system.drift, damping * np.eye(system.dim), system.hamiltonian)


def _heatmap_column(args):
    """Snapshot for every n_th at one coupling.

    The covariance equation is linear in ``D`` and ``D`` is affine in
    ``n_th``, so ``V(t; n) = V(t; 0) + n W(t)`` with ``W`` driven by
    ``gamma I`` from ``W(0) = 0``. Two integrations cover the whole column.
    """
    cfg, j_ratio = args
    net = cfg.network(j_ratio, n_th=0.0)
    if classify_phase(net) is Phase.BROKEN:
        return None
    system = linear_system(net, noise=cfg.noise)
    t = cfg.snapshot_time / cfg.scale
    h = cfg.dt / cfg.scale
    V0 = propagate(system, _initial_state(cfg), t, h)
    W = propagate(_thermal_response(system, cfg.damping if cfg.noise else 0.0),
                  np.zeros_like(V0), t, h)
    return V0, W


def heatmap_boundary(V0: np.ndarray, W: np.ndarray) -> float | None:
    """``n_th`` at which ``S = 1`` along one coupling column.

    ``S`` is linear in ``V``, hence affine in ``n_th``: a single crossing at
    most. ``None`` when the column never has ``S < 1`` or never leaves it.
    """
    s0 = tripartite_S(V0).S
    s1 = tripartite_S(W).S
    if s0 >= 1.0 or s1 <= 0.0:
        return None
    return (1.0 - s0) / s1


def run_heatmap(cfg: ExperimentConfig) -> Table:
    binary = cfg.topology is Topology.BINARY
    if binary:
        table = Table(["J/Gamma", "n_th", "E_N", "nu_minus", "status"])
    else:
        table = Table(["J/Gamma", "n_th", "S", "klass", "status", "n_th_at_S1"])
    j_grid = [float(j) for j in cfg.j_grid()]
    n_grid = [float(n) for n in cfg.n_th_grid()]
    columns = _pool_map(_heatmap_column, [(cfg, j) for j in j_grid], cfg.workers)
    for j, col in zip(j_grid, columns):
        if col is None:
            for n in n_grid:
                table.rows.append([j, n, None, None, "broken"] + ([] if binary else [None]))
            continue
        V0, W = col
        boundary = None if binary else heatmap_boundary(V0, W)
        for n in n_grid:
            V = V0 + n * W
            if binary:
                try:
                    nu = nu_minus(V)
                    table.rows.append([j, n, max(0.0, -math.log(2 * nu)), nu, "ok"])
                except NonPhysicalStateError:
                    table.rows.append([j, n, None, None, "nonphysical"])
            else:
                rec = tripartite_S(V)
                table.rows.append([j, n, rec.S, rec.klass.value, "ok", boundary])
    table.notes.append(f"snapshot at Gamma*t = {cfg.snapshot_time:g}; broken-phase cells are flagged, not computed")
    if not binary:
        table.notes.append("n_th_at_S1: thermal occupation where S crosses 1 in this J column (empty if none)")
    return table


# --- optomechanics -------------------------------------------------------------

def run_optomech(cfg: ExperimentConfig) -> Table:
    """Derive gain and loss rates from cavity parameters for both sidebands.

    Raises :class:`~ptesd.optomech.SteadyStateError` on non-convergence.
    """
    table = Table(["role", "sideband", "detuning_bare", "detuning_eff", "abs_alpha", "re_beta",
                   "G", "Gamma", "iterations", "residual", "warnings"])
    rates = []
    for sideband in (Sideband.STOKES, Sideband.ANTI_STOKES):
        p = CavityParams(cfg.omega_m, cfg.kappa, cfg.damping, cfg.g0, cfg.drive, 0.0, sideband, cfg.n_th)
        setting = cfg.sideband_detuning(sideband)
        p = tune_to_sideband(p) if setting == "auto" else CavityParams(
            p.omega_m, p.kappa, p.damping, p.g0, p.drive, float(setting), sideband, p.n_th)
        ss = solve_steady_state(p)
        rate = induced_rate(ss, p)
        rates.append(rate.rate)
        diags = validity_report(ss, p, cfg.margin)
        warnings = ";".join(d.name for d in diags if not d.ok)
        table.rows.append([rate.role, sideband.value, p.detuning, ss.detuning, abs(ss.alpha), ss.beta.real,
                           rate.G, rate.rate, ss.iterations, ss.residual, warnings])
        for d in diags:
            table.notes.append(f"{sideband.value}: {d}")
    if math.isclose(rates[0], rates[1], rel_tol=1e-9):
        table.notes.append(f"matched pair: Gamma = {rates[0]:.12g} on both sides")
    else:
        table.notes.append("gain and loss rates differ; the pair does not form a balanced PT chain")
    return table
