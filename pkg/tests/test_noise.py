import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from transmon3d import kernels
from transmon3d.errors import InvalidParameterError
from transmon3d.noise import (
    ECHO, RAMSEY, CoherenceRecord, OrnsteinUhlenbeck, PhaseNoiseSampler, StaticGaussian, Telegraph,
    White, coherence_function, coherence_time, frequency_psd_from_ic, ic_noise_translation,
    ic_psd_from_frequency, mc_coherence, noise_to_dict, parse_noise, telegraph_trace,
)

OU_TUNED = OrnsteinUhlenbeck.tuned(10e-6, 15e-6)
MODELS = [White(9.44e4), OU_TUNED, OrnsteinUhlenbeck(2e5, 2e-6), StaticGaussian(1e5)]
GRID = np.linspace(0.0, 60e-6, 121)


@pytest.mark.parametrize("noise", MODELS, ids=lambda m: m.kind)
@pytest.mark.parametrize("protocol", [RAMSEY, ECHO])
def test_coherence_normalized_bounded_non_increasing(noise, protocol):
    c = coherence_function(noise, protocol, GRID)
    assert c[0] == 1.0
    assert np.all((c >= 0) & (c <= 1))
    assert np.all(np.diff(c) <= 1e-15)


@pytest.mark.parametrize("noise", MODELS[1:], ids=lambda m: m.kind)
def test_echo_never_worse_than_ramsey_for_correlated_noise(noise):
    assert np.all(coherence_function(noise, ECHO, GRID) >= coherence_function(noise, RAMSEY, GRID) - 1e-15)


def test_white_noise_identical_for_both_protocols():
    w = White(1e5)
    assert np.array_equal(coherence_function(w, RAMSEY, GRID), coherence_function(w, ECHO, GRID))
    assert coherence_function(w, RAMSEY, 2e-5) == pytest.approx(math.exp(-1.0))


def test_static_noise_fully_refocused():
    assert np.all(coherence_function(StaticGaussian(3e6), ECHO, GRID) == 1.0)
    assert coherence_function(StaticGaussian(1e5), RAMSEY, 1e-5) == pytest.approx(math.exp(-0.5))


def test_negative_time_rejected():
    with pytest.raises(InvalidParameterError):
        coherence_function(White(1.0), RAMSEY, -1e-6)
    with pytest.raises(InvalidParameterError):
        coherence_function(White(1.0), "spin-lock", 1e-6)


def test_telegraph_has_no_coherence_function():
    with pytest.raises(InvalidParameterError):
        coherence_function(Telegraph(5e3, 1e-3), RAMSEY, 1e-6)


@pytest.mark.parametrize("sigma_tau", [0.01, 0.05])
def test_ou_approaches_white_in_motional_narrowing_regime(sigma_tau):
    tau = 1e-6
    ou = OrnsteinUhlenbeck(sigma_tau / tau, tau)
    white = White(2 * ou.sigma ** 2 * tau)
    t = 20 * tau
    assert coherence_function(ou, RAMSEY, t) == pytest.approx(coherence_function(white, RAMSEY, t), rel=0.01)


@given(sigma=st.floats(1e4, 1e6), tau=st.floats(1e-7, 1e-5))
@settings(max_examples=40, deadline=None)
def test_ou_long_time_log_offset_from_white(sigma, tau):
    # at t >> tau_c the OU exponent is the white one minus (sigma tau_c)^2
    ou = OrnsteinUhlenbeck(sigma, tau)
    t = 40 * tau
    exponent_ou = (sigma * tau) ** 2 * (t / tau - 1 + math.exp(-t / tau))
    exponent_white = sigma ** 2 * tau * t
    assert exponent_white - exponent_ou == pytest.approx((sigma * tau) ** 2, rel=1e-9)
    assert -math.log(max(coherence_function(ou, RAMSEY, t), 1e-300)) == pytest.approx(
        min(exponent_ou, 690.0), rel=1e-9) or exponent_ou > 690


def test_tuned_ou_and_echo_gain():
    assert coherence_time(OU_TUNED, RAMSEY) == pytest.approx(15e-6, rel=1e-9)
    ratio = coherence_time(OU_TUNED, ECHO) / coherence_time(OU_TUNED, RAMSEY)
    assert 1.3 <= ratio <= 2.2


def test_coherence_time_with_relaxation():
    t2 = coherence_time(White.from_gamma_phi(4.72e4), RAMSEY, gamma1=1 / 60e-6)
    assert t2 == pytest.approx(1 / (0.5 / 60e-6 + 4.72e4), rel=1e-9)


@pytest.mark.parametrize("noise", MODELS, ids=lambda m: m.kind)
@pytest.mark.parametrize("protocol", [RAMSEY, ECHO])
def test_monte_carlo_matches_analytic(noise, protocol):
    t = np.linspace(0.0, 40e-6, 6)
    mc = mc_coherence(noise, protocol, t, n_traj=4000, seed=11)
    exact = coherence_function(noise, protocol, t)
    assert np.all(np.abs(mc.mean - exact) <= 3 * mc.stderr + 1e-12)


def test_monte_carlo_zero_noise_exactly_one():
    for noise in (White(0.0), OrnsteinUhlenbeck(0.0, 1e-6), StaticGaussian(0.0)):
        for protocol in (RAMSEY, ECHO):
            mc = mc_coherence(noise, protocol, [0.0, 1e-6, 5e-6], n_traj=100)
            assert np.all(mc.mean == 1.0)


def test_monte_carlo_deterministic_and_order_independent():
    a = mc_coherence(OU_TUNED, ECHO, [5e-6, 10e-6], n_traj=500, seed=4)
    b = mc_coherence(OU_TUNED, ECHO, [5e-6, 10e-6], n_traj=500, seed=4)
    assert np.array_equal(a.mean, b.mean)


def test_monte_carlo_preconditions():
    with pytest.raises(InvalidParameterError):
        mc_coherence(OU_TUNED, RAMSEY, [1e-6], n_traj=500, dt=1e-6)
    with pytest.raises(InvalidParameterError):
        mc_coherence(White(1.0), RAMSEY, [1e-6], n_traj=50)


def test_ou_integrated_process_statistics():
    # sample variance of the integrated OU increment against the closed form
    sigma, tau, h = 1e5, 1e-5, 3e-6
    rng = np.random.default_rng(0)
    x0 = sigma * rng.standard_normal(200_000)
    steps, x1 = kernels.ou_integrals(x0, rng.standard_normal((200_000, 1, 2)), h, sigma, tau)
    u = h / tau
    var_int = sigma ** 2 * tau ** 2 * 2 * (u - 1 + math.exp(-u))
    assert np.var(steps[:, 0]) == pytest.approx(var_int, rel=0.02)
    assert np.var(x1) == pytest.approx(sigma ** 2, rel=0.02)
    assert np.corrcoef(x0, x1)[0, 1] == pytest.approx(math.exp(-u), abs=0.01)


def test_phase_sampler_static_is_constant_per_shot():
    s = PhaseNoiseSampler(StaticGaussian(1e5), 8, np.random.default_rng(0))
    a = s.advance(1e-7, 5)
    b = s.advance(1e-7, 3)
    assert np.allclose(a, a[:, :1]) and np.allclose(b[:, 0], a[:, 0])
    with pytest.raises(InvalidParameterError):
        PhaseNoiseSampler(White(1.0), 4, np.random.default_rng(0))


def test_ic_noise_translation():
    s_ic = (20e-9) ** 2
    assert math.sqrt(ic_noise_translation(s_ic)) == pytest.approx(10e-9, rel=1e-12)
    assert ic_noise_translation(0.0) == 0.0
    assert ic_psd_from_frequency(frequency_psd_from_ic(3.7e-17)) == pytest.approx(3.7e-17, rel=1e-15)
    with pytest.raises(InvalidParameterError):
        frequency_psd_from_ic(-1.0)


@pytest.mark.parametrize("text,expected", [
    ("white:gamma_phi=4.72e4", White(9.44e4)),
    ("white:s_omega=10", White(10.0)),
    ("ou:sigma=1e5,tau_c=1e-5", OrnsteinUhlenbeck(1e5, 1e-5)),
    ("static:sigma=2e5", StaticGaussian(2e5)),
    ("telegraph:delta_f=5e3,rate=0.001", Telegraph(5e3, 1e-3)),
    ("none", White(0.0)),
])
def test_parse_noise(text, expected):
    assert parse_noise(text) == expected


def test_parse_noise_tuned_ou_and_errors():
    assert parse_noise("ou:tau_c=1e-5,ramsey_time=1.5e-5") == OU_TUNED
    for bad in ("pink:a=1", "white:gamma_phi", "ou:sigma=1", "white:gamma_phi=x", "static:sigma=-1"):
        with pytest.raises(InvalidParameterError):
            parse_noise(bad)
    assert noise_to_dict(OU_TUNED)["kind"] == "ou"


def test_telegraph_trace_two_levels():
    tr = telegraph_trace(Telegraph(5e3, 1e-3), np.linspace(0, 86400, 2000), np.random.default_rng(2))
    assert set(np.unique(tr)) <= {-2500.0, 2500.0}


def test_coherence_record_quality_factors():
    rec = CoherenceRecord(60.0, 18.0, 25.0, 6.808)
    assert rec.q1 == pytest.approx(2.566e6, rel=1e-3)
    assert rec.q2 == pytest.approx(7.7e5, rel=0.15)
    assert rec.error_rate() == pytest.approx(5.56e-4, rel=1e-2)
    assert rec.gamma_phi == pytest.approx(1 / 18e-6 - 1 / 120e-6)
    with pytest.warns(UserWarning):
        assert CoherenceRecord(10.0, 25.0, 25.0, 6.8).gamma_phi == 0.0
    with pytest.raises(InvalidParameterError):
        CoherenceRecord(0.0, 1.0, 1.0, 6.8)
