import math

import numpy as np
import pytest
from scipy.linalg import solve_continuous_lyapunov

from ptesd.dynamics import (
    AccuracyGuardError,
    Trajectory,
    evolve,
    kronecker_generator,
    lyapunov_oracle,
    propagate,
    steady_state,
    step_rk4,
)
from ptesd.model import LinearSystem, ResonatorNetwork, linear_system
from ptesd.states import CovarianceState, two_mode_squeezed, vacuum


def noisy_pair(J, noise=True):
    return linear_system(ResonatorNetwork("binary", 1.0, 1e-3, J), noise=noise)


def noiseless_binary(J):
    return linear_system(ResonatorNetwork("binary", 1.0, 0.0, J), noise=False)


def test_frozen_dynamics():
    V = two_mode_squeezed(0.4).V
    np.testing.assert_array_equal(step_rk4(V, np.zeros((4, 4)), np.zeros((4, 4)), 0.05), V)


def test_pure_diffusion_is_linear():
    V = two_mode_squeezed(0.4).V
    out = step_rk4(V, np.zeros((4, 4)), 0.3 * np.eye(4), 0.01)
    np.testing.assert_allclose(out, V + 0.003 * np.eye(4), rtol=0, atol=1e-15)


def test_single_loss_mode_relaxes_to_vacuum():
    G = 1.0
    A, D = -(G / 2) * np.eye(2), (G / 2) * np.eye(2)
    V = 5.0 * np.eye(2)
    dt = 1e-3
    for _ in range(20_000):
        V = step_rk4(V, A, D, dt)
    closed = math.exp(-G * 20.0) * (5.0 - 0.5) * np.eye(2) + 0.5 * np.eye(2)
    np.testing.assert_allclose(V, closed, atol=1e-12)
    np.testing.assert_allclose(V, 0.5 * np.eye(2), atol=1e-6)


def test_accuracy_guard():
    A = np.diag([-10.0, -10.0])
    with pytest.raises(AccuracyGuardError):
        step_rk4(np.eye(2), A, np.zeros((2, 2)), 0.02)
    with pytest.raises(ValueError):
        step_rk4(np.eye(2), A, np.zeros((2, 2)), 0.0)


def test_step_output_is_exactly_symmetric():
    rng = np.random.default_rng(1)
    A = 0.3 * rng.normal(size=(4, 4))
    V = two_mode_squeezed(0.8).V
    out = step_rk4(V, A, 0.2 * np.eye(4), 0.01)
    assert np.array_equal(out, out.T)


def test_noiseless_period_returns_to_start():
    J = 1.0
    T = 2 * math.pi / math.sqrt(J * J - 0.25)
    V0 = two_mode_squeezed(1.0)
    traj = evolve(noiseless_binary(J), V0, T, dt=1e-3, record_every=1000)
    assert traj.times[-1] == pytest.approx(T, rel=1e-15)
    np.testing.assert_allclose(traj.final.V, V0.V, atol=1e-6)
    # the exact propagator is the identity after one period
    np.testing.assert_allclose(lyapunov_oracle(noiseless_binary(J), V0, T).V, V0.V, atol=1e-9)


def test_periods_grow_towards_ep():
    periods = [2 * math.pi / math.sqrt(J * J - 0.25) for J in (1.0, 0.75, 0.53)]
    assert periods[0] < periods[1] < periods[2]


def test_broken_phase_diverges():
    traj = evolve(noisy_pair(0.25), two_mode_squeezed(1.0), 100.0, dt=1e-2, record_every=100)
    assert traj.diverged
    assert traj.times[-1] < 100.0
    # amplitudes grow at sqrt(1/4 - J^2) - gamma/2, second moments at twice that
    rate = 2 * (math.sqrt(0.25 - 0.0625) - 5e-4)
    assert traj.times[-1] == pytest.approx(math.log(1e12) / rate, rel=0.1)


def test_stable_run_does_not_flag():
    traj = evolve(noisy_pair(1.0), two_mode_squeezed(1.0), 5.0, dt=1e-3, record_every=50)
    assert not traj.diverged
    assert len(traj) == 101


def test_long_time_reaches_lyapunov_solution():
    system = linear_system(ResonatorNetwork("binary", 0.0, 0.1, 0.3, n_th=1.0))
    V_inf = steady_state(system)
    traj = evolve(system, two_mode_squeezed(1.0), 1000.0, dt=1e-2, record_every=10_000)
    np.testing.assert_allclose(traj.final.V, V_inf, atol=1e-8)
    # independent algebraic solver
    np.testing.assert_allclose(V_inf, solve_continuous_lyapunov(system.drift, -system.diffusion), atol=1e-12)


def test_oracle_at_zero_returns_initial_state():
    V0 = two_mode_squeezed(0.5)
    np.testing.assert_array_equal(lyapunov_oracle(noisy_pair(1.0), V0, 0.0).V, V0.V)


def test_oracle_long_time_matches_algebraic_solution():
    system = linear_system(ResonatorNetwork("binary", 0.0, 0.1, 0.3, n_th=2.0))
    V = lyapunov_oracle(system, two_mode_squeezed(1.0), 1e3).V
    np.testing.assert_allclose(V, steady_state(system), atol=1e-8)


def test_oracle_size_limit():
    big = LinearSystem(np.zeros((8, 8)), np.zeros((8, 8)), np.zeros((8, 8)))
    with pytest.raises(ValueError):
        lyapunov_oracle(big, np.eye(8), 1.0)


def test_kronecker_generator_matches_matrix_product():
    rng = np.random.default_rng(3)
    A = rng.normal(size=(4, 4))
    V = rng.normal(size=(4, 4))
    V = V + V.T
    np.testing.assert_allclose(kronecker_generator(A) @ V.ravel(), (A @ V + V @ A.T).ravel(), atol=1e-12)


@pytest.mark.parametrize("J", [1.0, 0.75, 0.53])
def test_rk4_matches_oracle(J):
    system = noisy_pair(J)
    V0 = two_mode_squeezed(1.0)
    traj = evolve(system, V0, 10.0, dt=1e-3, record_every=500)
    err = max(np.abs(s.V - lyapunov_oracle(system, V0, s.t).V).max() for s in traj.states)
    assert err < 1e-8


def test_fourth_order_convergence():
    system = noisy_pair(1.0)
    V0 = two_mode_squeezed(1.0)
    ref = lyapunov_oracle(system, V0, 10.0).V
    errs = [np.abs(evolve(system, V0, 10.0, dt, 10 ** 6).final.V - ref).max() for dt in (0.02, 0.01)]
    assert 14.5 < errs[0] / errs[1] < 17.5


def test_trajectory_records_and_symmetry():
    traj = evolve(noisy_pair(0.75), two_mode_squeezed(1.0), 1.0, dt=1e-3, record_every=7)
    assert np.all(np.diff(traj.times) > 0)
    assert traj.times[0] == 0.0 and traj.times[-1] == pytest.approx(1.0)
    for t, s in zip(traj.times, traj.states):
        assert s.t == t
        assert np.array_equal(s.V, s.V.T)
    # every 7th step plus the final one
    assert len(traj) == 1 + 1000 // 7 + 1


def test_step_is_shrunk_to_land_on_t_end():
    traj = evolve(noisy_pair(1.0), vacuum(2), 0.1005, dt=1e-3, record_every=1)
    assert traj.dt == pytest.approx(0.1005 / 101)
    assert traj.times[-1] == pytest.approx(0.1005, rel=1e-15)


def test_evolve_argument_checks():
    with pytest.raises(ValueError):
        evolve(noisy_pair(1.0), vacuum(2), 0.0)
    with pytest.raises(ValueError):
        evolve(noisy_pair(1.0), vacuum(2), 1.0, record_every=0)
    with pytest.raises(AccuracyGuardError):
        evolve(noisy_pair(1.0), vacuum(2), 1.0, dt=0.5)


def test_propagate_matches_oracle():
    system = noisy_pair(0.6)
    V = propagate(system, two_mode_squeezed(1.0), 0.37, 1e-3)
    np.testing.assert_allclose(V, lyapunov_oracle(system, two_mode_squeezed(1.0), 0.37).V, atol=1e-12)


def test_trajectory_validation():
    s = vacuum(2)
    with pytest.raises(ValueError):
        Trajectory([0.0, 0.0], [s, s])
    with pytest.raises(ValueError):
        Trajectory([0.0, 1.0], [s])
    traj = Trajectory([0.0, 1.0], [s, CovarianceState(s.V, 1.0)])
    with pytest.raises(ValueError):
        traj.with_scalars(E_N=[0.0])
    assert traj.with_scalars(E_N=[0.0, 0.0]).scalars["E_N"].shape == (2,)
