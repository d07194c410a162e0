import logging
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ptesd.model import linear_system
from ptesd.optomech import (
    CavityParams,
    Sideband,
    SteadyState,
    SteadyStateError,
    induced_rate,
    network_from_cavities,
    solve_steady_state,
    tune_to_sideband,
    validity_report,
)


def cavity(sideband="stokes", **kw):
    base = dict(omega_m=1.0, kappa=0.2, damping=1e-5, g0=1e-4, drive=2000.0, detuning=0.0)
    base.update(kw)
    return CavityParams(sideband=sideband, **base)


def failing(report):
    return {d.name for d in report if not d.ok}


def test_undriven_cavity():
    p = cavity(drive=0.0, detuning=0.7)
    ss = solve_steady_state(p)
    assert ss.alpha == 0 and ss.beta == 0 and ss.detuning == 0.7
    assert induced_rate(ss, p).rate == 0.0


@settings(max_examples=50, deadline=None)
@given(drive=st.floats(0.0, 1e4), detuning=st.floats(-5.0, 5.0), kappa=st.floats(0.01, 2.0))
def test_weak_coupling_limit(drive, detuning, kappa):
    p = cavity(drive=drive, detuning=detuning, kappa=kappa, g0=1e-12)
    ss = solve_steady_state(p)
    assert abs(ss.alpha) == pytest.approx(drive / math.hypot(detuning, kappa / 2), rel=1e-9, abs=1e-12)


def test_sideband_example_rate():
    p = tune_to_sideband(cavity())
    ss = solve_steady_state(p)
    assert ss.detuning == pytest.approx(-1.0, abs=1e-10)
    assert ss.residual < 1e-10
    a = 2000 / math.sqrt(1 + 0.01)
    assert abs(ss.alpha) == pytest.approx(a, rel=1e-9)
    G, rate, role = induced_rate(ss, p)
    assert G == pytest.approx(1e-4 * a, rel=1e-9)
    assert rate == pytest.approx(4e-8 * a * a / 0.2, rel=1e-9)
    assert role == "gain"


def test_self_consistency_of_returned_state():
    p = tune_to_sideband(cavity("anti_stokes"))
    ss = solve_steady_state(p)
    alpha = -1j * p.drive / (1j * ss.detuning + p.kappa / 2)
    beta = 1j * p.g0 * abs(alpha) ** 2 / (1j * p.omega_m + p.damping / 2)
    assert abs(ss.alpha - alpha) <= 1e-10 * abs(alpha)
    assert abs(ss.beta - beta) <= 1e-10 * abs(beta)
    assert ss.detuning == pytest.approx(p.detuning - 2 * p.g0 * beta.real, rel=1e-10)
    assert induced_rate(ss, p).role == "loss"


def test_rate_arithmetic():
    p = cavity(kappa=0.1, g0=1e-3)
    ss = SteadyState(alpha=100.0 + 0j, beta=0j, detuning=-1.0)
    G, rate, _ = induced_rate(ss, p)
    assert G == pytest.approx(0.1)
    assert rate == pytest.approx(0.4)


def test_rate_quadratic_in_drive():
    p = cavity(g0=1e-8, drive=100.0, detuning=-1.0)
    ss1 = solve_steady_state(p)
    ss2 = solve_steady_state(cavity(g0=1e-8, drive=200.0, detuning=-1.0))
    assert p.g0 * abs(ss2.alpha) ** 2 / p.omega_m < 1e-3
    ratio = induced_rate(ss2, p).rate / induced_rate(ss1, p).rate
    assert ratio == pytest.approx(4.0, rel=0.01)


def test_residual_history_decreases():
    ss = solve_steady_state(cavity(detuning=-0.9))
    assert ss.iterations > 3
    assert np.all(np.diff(ss.residual_history) < 0)


def test_bistable_drive_is_reported():
    with pytest.raises(SteadyStateError, match="did not converge"):
        solve_steady_state(cavity(g0=1e-3, drive=2000.0, detuning=1.0))


def test_network_reproduces_gain_loss_drift():
    gain = tune_to_sideband(cavity("stokes"))
    loss = tune_to_sideband(cavity("anti_stokes"))
    net = network_from_cavities(gain, loss, coupling=0.3)
    rate = induced_rate(solve_steady_state(gain), gain).rate
    assert net.gain_rate == rate
    A = linear_system(net).drift
    half = 0.5 * (rate - 1e-5)
    assert A[0, 0] == A[1, 1] == half
    assert A[2, 2] == A[3, 3] == -0.5 * (rate + 1e-5)
    assert A[0, 0] > 0 > A[2, 2]


def test_network_rejects_mismatched_pair():
    gain = tune_to_sideband(cavity("stokes"))
    with pytest.raises(ValueError):
        network_from_cavities(gain, tune_to_sideband(cavity("anti_stokes", drive=1000.0)), 0.3)
    with pytest.raises(ValueError):
        network_from_cavities(gain, gain, 0.3)


def valid_params(sideband="stokes"):
    # G = g0 |alpha| = 0.01 exactly at Delta = -+omega_m
    drive = 1000.0 * math.sqrt(1 + 0.05 ** 2)
    return tune_to_sideband(cavity(sideband, kappa=0.1, g0=1e-5, drive=drive))


def test_validity_all_pass():
    p = valid_params()
    ss = solve_steady_state(p)
    assert induced_rate(ss, p).G == pytest.approx(0.01, rel=1e-9)
    report = validity_report(ss, p)
    assert len(report) == 6
    assert failing(report) == set()


def test_rwa_warning(caplog):
    p = tune_to_sideband(cavity(kappa=0.5, g0=1e-5, drive=1000.0))
    with caplog.at_level(logging.WARNING, logger="ptesd.optomech"):
        report = validity_report(solve_steady_state(p), p)
    assert "rwa_omega_m/kappa" in failing(report)
    assert "rwa_omega_m/kappa" in caplog.text


def test_adiabatic_warning():
    # G = kappa = 0.1
    p = tune_to_sideband(cavity(kappa=0.1, g0=1e-4, drive=1000.0 * math.sqrt(1.0025)))
    ss = solve_steady_state(p)
    assert induced_rate(ss, p).G == pytest.approx(0.1, rel=1e-9)
    assert "adiabatic_kappa/G" in failing(validity_report(ss, p))


def test_every_warning_can_fire():
    p = cavity(omega_m=1.0, kappa=0.5, damping=0.2, g0=1e-3, drive=400.0, detuning=0.3)
    ss = solve_steady_state(p)
    assert failing(validity_report(ss, p)) == {d.name for d in validity_report(ss, p)}


def test_margin_is_configurable():
    p = valid_params()
    ss = solve_steady_state(p)
    assert "rwa_omega_m/kappa" in failing(validity_report(ss, p, margin=20))


@pytest.mark.parametrize("kw", [dict(kappa=0.0), dict(g0=-1.0), dict(damping=-1e-3),
                                dict(drive=math.inf), dict(detuning=math.nan)])
def test_parameter_validation(kw):
    with pytest.raises(ValueError):
        cavity(**kw)


def test_sideband_parsing():
    assert Sideband.parse("Anti-Stokes") is Sideband.ANTI_STOKES
    assert Sideband.STOKES.target_detuning_sign == -1
    with pytest.raises(ValueError):
        Sideband.parse("rayleigh")
