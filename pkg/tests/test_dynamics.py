import math

import numpy as np
import pytest

from transmon3d.dynamics import (
    ANALYTIC, Delay, DensityMatrix, ExperimentResult, Measure, Pulse, PulseSequence, evolve,
    pulse_leakage, rotation, run_sequence, simulate_echo, simulate_ramsey, simulate_t1,
    single_shot_readout,
)
from transmon3d.errors import InvalidParameterError, NumericFailureError
from transmon3d.fitting import fit_decay, fit_ramsey
from transmon3d.noise import ECHO, RAMSEY, OrnsteinUhlenbeck, StaticGaussian, White, coherence_function

G1 = 1 / 60e-6
PLUS = DensityMatrix(0.5 * np.ones((2, 2), dtype=complex))


def test_relaxation_matches_exponential():
    gamma1 = 1 / 60e-6
    rho = evolve(DensityMatrix.basis(1), np.zeros((2, 2)), {"down": gamma1}, 30e-6, 1e-8)
    assert rho.population(1) == pytest.approx(math.exp(-0.5), abs=1e-6)
    assert rho.time == pytest.approx(30e-6)


def test_unitary_evolution_conserves_purity():
    h = np.array([[0.0, 0.003], [0.003, 0.001]])  # GHz
    rho = evolve(PLUS, h, {}, 2e-6, 1e-10)
    assert rho.purity == pytest.approx(1.0, abs=1e-9)
    assert rho.trace == pytest.approx(1.0, abs=1e-9)


@pytest.mark.parametrize("gamma1,gamma_phi", [(1 / 60e-6, 4.72e4), (1e5, 0.0), (0.0, 3e4)])
def test_coherence_decays_at_half_gamma1_plus_gamma_phi(gamma1, gamma_phi):
    t = 20e-6
    rho = evolve(PLUS, np.zeros((2, 2)), {"down": gamma1, "dephase": gamma_phi}, t, 1e-8)
    rate = -math.log(abs(rho.data[0, 1]) / 0.5) / t
    assert rate == pytest.approx(0.5 * gamma1 + gamma_phi, rel=1e-3)


def test_halving_step_changes_populations_negligibly():
    h = np.array([[0.0, 0.0005], [0.0005, 0.0002]])
    rates = {"down": 2e4, "dephase": 1e4}
    a = evolve(PLUS, h, rates, 5e-6, 4e-9)
    b = evolve(PLUS, h, rates, 5e-6, 2e-9)
    assert np.max(np.abs(np.diag(a.data - b.data))) < 1e-6


def test_step_size_guard():
    with pytest.raises(InvalidParameterError):
        evolve(PLUS, np.diag([0.0, 1.0]), {}, 1e-6, 1e-9)
    with pytest.raises(InvalidParameterError):
        evolve(PLUS, np.zeros((2, 2)), {"down": -1.0}, 1e-6, 1e-9)


def test_density_matrix_validation():
    with pytest.raises(NumericFailureError):
        DensityMatrix(np.diag([1.2, -0.2]).astype(complex)).validate()
    with pytest.raises(NumericFailureError):
        DensityMatrix(np.array([[0.5, 0.5], [0.0, 0.5]], dtype=complex)).validate()
    DensityMatrix.basis(0, 3).validate()


def test_rotation_is_unitary_and_pi_flips():
    u = rotation(math.pi, 0.3, 3)
    assert np.allclose(u @ u.conj().T, np.eye(3))
    flipped = u @ DensityMatrix.basis(0, 3).data @ u.conj().T
    assert flipped[1, 1].real == pytest.approx(1.0)


def test_pulse_sequence_invariants():
    with pytest.raises(InvalidParameterError):
        PulseSequence([Pulse(0, math.pi)])
    with pytest.raises(InvalidParameterError):
        PulseSequence([Measure(), Delay(1e-6), Measure()])
    with pytest.raises(InvalidParameterError):
        PulseSequence([Delay(-1e-6), Measure()])
    seq = PulseSequence([Pulse(0, math.pi, 20.0), Delay(1e-6), Measure()])
    assert seq.duration == pytest.approx(1.02e-6)


def test_experiment_result_invariants():
    with pytest.raises(InvalidParameterError):
        ExperimentResult([2e-6, 1e-6], [0.5, 0.5], "t1")
    with pytest.raises(NumericFailureError):
        ExperimentResult([1e-6, 2e-6], [0.5, 1.1], "t1")


def test_t1_experiment():
    delays = np.linspace(0, 300e-6, 61)
    res = simulate_t1(G1, delays)
    fit = fit_decay(res.delays, res.population)
    assert fit.params["tau"] == pytest.approx(60e-6, rel=0.01)
    at_t1 = simulate_t1(G1, [60e-6]).population[0]
    assert at_t1 == pytest.approx(math.exp(-1), rel=0.01)
    assert np.all(simulate_t1(0.0, delays).population == pytest.approx(1.0, abs=1e-12))


def test_t1_with_finite_pulse_and_three_levels():
    delays = np.linspace(0, 200e-6, 41)
    res = simulate_t1(G1, delays, pulse_ns=20.0, levels=3)
    assert res.population[0] > 0.99
    assert fit_decay(res.delays, res.population).params["tau"] == pytest.approx(60e-6, rel=0.01)


@pytest.mark.parametrize("gamma1,gamma_phi", [(1 / 60e-6, 4.72e4), (1 / 25e-6, 4.67e4), (1 / 20e-6, 1.42e5), (1e4, 0.0)])
def test_ramsey_t2_composition(gamma1, gamma_phi):
    delays = np.linspace(0, 40e-6, 161)
    res = simulate_ramsey(gamma1, White.from_gamma_phi(gamma_phi), 0.0, 2 * math.pi * 250e3, delays)
    t2 = fit_ramsey(res.delays, res.population).params["t2"]
    assert 1 / t2 == pytest.approx(0.5 * gamma1 + gamma_phi, rel=0.02)


@pytest.mark.parametrize("detuning,rate", [(0.0, 2 * math.pi * 250e3), (100e3, 2 * math.pi * 150e3), (-50e3, 2 * math.pi * 400e3)])
def test_ramsey_frequency_encoding(detuning, rate):
    delays = np.linspace(0, 40e-6, 201)
    res = simulate_ramsey(G1, White(0.0), detuning, rate, delays)
    f = fit_ramsey(res.delays, res.population).params["frequency"]
    assert f == pytest.approx(abs(detuning + rate / (2 * math.pi)), rel=1e-3)


def test_ramsey_without_decay_has_unit_envelope():
    delays = np.linspace(0, 20e-6, 81)
    res = simulate_ramsey(0.0, None, 0.0, 2 * math.pi * 200e3, delays)
    expected = 0.5 + 0.5 * np.cos(2 * math.pi * 200e3 * delays)
    assert np.max(np.abs(res.population - expected)) < 1e-9


def test_ramsey_envelope_matches_analytic_within_standard_errors():
    noise = OrnsteinUhlenbeck.tuned(10e-6, 15e-6)
    delays = np.linspace(0, 30e-6, 7)
    res = simulate_ramsey(G1, noise, 0.0, 0.0, delays, n_shots=2000, seed=5)
    # on resonance with no phase advance, P1 = 1/2 + 1/2 envelope
    expected = 0.5 + 0.5 * np.exp(-0.5 * G1 * delays) * coherence_function(noise, RAMSEY, delays)
    assert np.all(np.abs(res.population - expected) <= 3 * res.stderr + 1e-9)


def test_analytic_sentinel_matches_formula():
    noise = StaticGaussian(1e5)
    delays = np.linspace(0, 30e-6, 31)
    res = simulate_ramsey(G1, noise, 0.0, 0.0, delays, n_shots=ANALYTIC)
    expected = 0.5 + 0.5 * np.exp(-0.5 * G1 * delays) * coherence_function(noise, RAMSEY, delays)
    assert np.max(np.abs(res.population - expected)) < 1e-8


def test_echo_refocuses_static_noise():
    delays = np.linspace(0, 300e-6, 41)
    res = simulate_echo(G1, StaticGaussian(3e5), delays, n_shots=64, seed=1)
    fit = fit_decay(res.delays, res.population)
    # population 1/2 + 1/2 exp(-gamma1 t/2): decay constant 2 T1
    assert fit.params["tau"] == pytest.approx(2 * 60e-6, rel=0.05)


def test_echo_equals_ramsey_envelope_for_white_noise():
    noise = White.from_gamma_phi(4.72e4)
    delays = np.linspace(0, 40e-6, 21)
    echo = simulate_echo(G1, noise, delays)
    ramsey = simulate_ramsey(G1, noise, 0.0, 0.0, delays)
    assert np.max(np.abs(echo.population - ramsey.population)) < 1e-8


def test_echo_gain_for_tuned_correlated_noise():
    noise = OrnsteinUhlenbeck.tuned(10e-6, 15e-6)
    delays = np.linspace(0, 60e-6, 31)
    echo = simulate_echo(0.0, noise, delays, n_shots=ANALYTIC)
    ramsey = simulate_ramsey(0.0, noise, 0.0, 0.0, delays, n_shots=ANALYTIC)
    t_echo = fit_decay(delays, echo.population - 0.5, "gaussian").params["tau"]
    assert np.all(echo.population >= ramsey.population - 1e-12)
    assert t_echo > 15e-6


def test_sequence_runner_deterministic():
    seq = PulseSequence([Pulse(0, math.pi / 2), Delay(5e-6), Pulse(0, math.pi / 2), Measure()])
    noise = OrnsteinUhlenbeck(1e5, 1e-5)
    a = run_sequence(seq, G1, noise, n_shots=50, seed=9)
    b = run_sequence(seq, G1, noise, n_shots=50, seed=9)
    assert np.array_equal(a, b)
    ra = simulate_echo(G1, noise, [1e-6, 5e-6], n_shots=20, seed=3)
    rb = simulate_echo(G1, noise, [1e-6, 5e-6], n_shots=20, seed=3)
    assert np.array_equal(ra.population, rb.population)


def test_three_level_pulse_leakage_small():
    assert pulse_leakage(-0.3, 20.0) < 0.01
    assert pulse_leakage(-0.3, 20.0) > 0.0
    assert pulse_leakage(-0.05, 5.0) > pulse_leakage(-0.3, 20.0)


def test_readout_limits():
    shots = 20000
    tol = 2 / math.sqrt(shots)
    perfect = single_shot_readout(1e3, 0.02, 50.0, 1.0, 1e9, shots, seed=0)
    assert perfect.fidelity == pytest.approx(1.0, abs=tol)
    blind = single_shot_readout(0.0, 0.02, 5.0, 1.0, 60.0, shots, seed=0)
    assert blind.fidelity == pytest.approx(0.0, abs=tol)
    j1 = single_shot_readout(15.9, 8.0035 / 3.4e5 * 1e3, 5.0, 1.0, 60.0, shots, seed=0)
    assert j1.fidelity > 0.7
    assert j1.iq_ground.shape == (shots,)
    with pytest.raises(InvalidParameterError):
        single_shot_readout(15.9, 0.02, 5.0, 1.0, 60.0, 999)


def test_readout_fidelity_improves_with_photons():
    f = [single_shot_readout(15.9, 0.0235, n, 1.0, 60.0, 20000, seed=1).fidelity for n in (0.5, 2.0, 8.0)]
    assert f[0] < f[1] < f[2]
