import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from transmon3d.cavity import (
    DEFAULT_GEOMETRY, CavityGeometry, CavityMode, DispersiveSystem, dispersive_shift, dressed_spectrum,
    field_profile, mode_normalization, power_scan, purcell_rate, te_mode_frequency,
)
from transmon3d.errors import InvalidParameterError, ResonantRegimeError
from transmon3d.spectrum import TransmonParams

G = DEFAULT_GEOMETRY


def test_default_geometry_reproduces_anchor_modes():
    assert te_mode_frequency(G, 1, 0, 1) == pytest.approx(8.003, rel=1e-9)
    assert te_mode_frequency(G, 1, 0, 2) == pytest.approx(10.0, rel=1e-9)
    assert G.b == pytest.approx(G.a / 2)


def test_mode_frequency_textbook_value():
    geom = CavityGeometry(20.0, 10.0, 40.0)
    c = 299792458.0
    expected = c / 2 * math.sqrt((1 / 0.020) ** 2 + (1 / 0.040) ** 2) / 1e9
    assert te_mode_frequency(geom, 1, 0, 1) == pytest.approx(expected, rel=1e-12)


@given(m=st.integers(1, 4), n=st.integers(0, 4), p=st.integers(1, 4), which=st.integers(0, 2))
@settings(max_examples=60, deadline=None)
def test_mode_frequency_increases_with_any_index(m, n, p, which):
    idx = [m, n, p]
    bumped = list(idx)
    bumped[which] += 1
    assert te_mode_frequency(G, *bumped) > te_mode_frequency(G, *idx)


@pytest.mark.parametrize("idx", [(0, 0, 0), (1, 0, 0), (0, 0, 1), (-1, 0, 1)])
def test_invalid_mode_indices(idx):
    with pytest.raises(InvalidParameterError):
        te_mode_frequency(G, *idx)


def test_field_profile_center_and_wall():
    centre = (G.a / 2, G.b / 2, G.d / 2)
    assert field_profile(G, (1, 0, 1), centre) == pytest.approx(1.0)
    assert field_profile(G, (1, 0, 2), centre) == pytest.approx(0.0, abs=1e-15)
    assert field_profile(G, (1, 0, 1), (0.0, G.b / 2, G.d / 2)) == 0.0
    assert field_profile(G, (1, 0, 1), (G.a / 2, G.b / 2, G.d)) == pytest.approx(0.0, abs=1e-15)


def test_field_profile_outside_volume():
    with pytest.raises(InvalidParameterError):
        field_profile(G, (1, 0, 1), (G.a + 1.0, 0.0, 0.0))


@pytest.mark.parametrize("mode", [(1, 0, 1), (1, 0, 2), (2, 1, 1), (1, 1, 3)])
def test_field_profile_normalization_midpoint_rule(mode):
    n = 32
    xs = (np.arange(n) + 0.5) / n * G.a
    ys = (np.arange(n) + 0.5) / n * G.b
    zs = (np.arange(n) + 0.5) / n * G.d
    total = sum(field_profile(G, mode, (x, y, z)) ** 2 for x, y, z in itertools.product(xs, ys, zs))
    integral = total * G.volume / n ** 3
    assert integral == pytest.approx(mode_normalization(G, mode), rel=0.01)


def test_dispersive_shift_rows():
    j1 = dispersive_shift(138, 6.808, 8.0035)
    assert j1.chi_mhz == pytest.approx(15.9, rel=0.02)
    assert j1.chi_mhz > 0
    assert j1.dressed_cavity_ghz > 8.0035
    assert dispersive_shift(152, 7.772, 8.0020).chi_mhz == pytest.approx(99.8, rel=0.02)
    assert dispersive_shift(0.0, 6.808, 8.0035).chi_mhz == 0.0


def test_dispersive_shift_sign_follows_detuning():
    above = dispersive_shift(100, 9.0, 8.0)
    assert above.chi_mhz < 0
    assert above.dressed_cavity_ghz < 8.0


def test_dispersive_shift_near_resonance_rejected():
    with pytest.raises(ResonantRegimeError):
        dispersive_shift(138, 8.0, 8.0)


def test_dispersive_system_flags():
    sys_ = DispersiveSystem(6.808, CavityMode(8.0035, 3.4e5), 138)
    assert sys_.detuning_ghz == pytest.approx(6.808 - 8.0035)
    assert sys_.chi_mhz == pytest.approx(138 ** 2 / 1195.5)
    assert not sys_.dispersive  # |delta| = 1.2 GHz < 10 g
    assert DispersiveSystem(6.0, CavityMode(8.0, 1e5), 100).dispersive
    assert CavityMode(8.0, 4e5).kappa_mhz == pytest.approx(0.02)


def test_purcell_j2_single_mode():
    kappa = 8.002 / 3.6e5 * 1e3
    est = purcell_rate([(152, 8.002, kappa)], 7.772)
    expected = 1e6 / (2 * math.pi * kappa * 1e6 * (152 / 230) ** 2)
    assert est.t1_us == pytest.approx(expected, rel=1e-12)
    assert est.t1_us == pytest.approx(16.0, rel=0.05)


def test_purcell_trivial_cases():
    assert purcell_rate([(0.0, 8.0, 0.02)], 6.8).rate == 0.0
    one = purcell_rate([(138, 8.0, 0.02)], 6.8).rate
    two = purcell_rate([(138, 8.0, 0.04)], 6.8).rate
    assert two == pytest.approx(2 * one, rel=1e-14)
    with pytest.raises(ResonantRegimeError):
        purcell_rate([(138, 6.85, 0.02)], 6.8)


@given(st.permutations([(138.0, 8.0, 0.02), (40.0, 10.0, 0.05), (10.0, 12.3, 0.3), (5.0, 14.1, 1.0)]))
@settings(max_examples=24, deadline=None)
def test_purcell_permutation_invariant(modes):
    ref = purcell_rate(sorted(modes), 6.8).rate
    assert purcell_rate(modes, 6.8).rate == ref


def test_dressed_spectrum_pulls_qubit_down_and_cavity_up():
    d = dressed_spectrum(TransmonParams(21.1, 0.301), 138, 8.0035)
    assert d.f01 < d.bare_f01
    assert d.cavity_ghz > 8.0035
    assert d.f01 == pytest.approx(6.808, rel=0.005)
    rwa = dressed_spectrum(TransmonParams(21.1, 0.301), 138, 8.0035, rwa=True)
    assert abs(rwa.f01 - d.f01) < 0.05


def _j1_system(g=138.0):
    return DispersiveSystem(6.808, CavityMode(8.0035, 3.4e5), g)


def test_power_scan_asymptotes():
    system = _j1_system()
    chi = dispersive_shift(138, 6.808, 8.0035).chi_mhz
    kappa = system.mode.kappa_mhz
    freqs = 8.0035 + np.linspace(-2.0, 20.0, 44001) * 1e-3
    scan = power_scan(system, -0.337, freqs, [1e-3, 1e10])
    low, high = (scan.peak_freqs_ghz - 8.0035) * 1e3
    assert low == pytest.approx(chi, rel=0.02)
    assert abs(high) < kappa
    assert not scan.flagged.any()


def test_power_scan_zero_coupling_stays_at_bare_frequency():
    freqs = 8.0035 + np.linspace(-0.2, 0.2, 4001) * 1e-3
    scan = power_scan(_j1_system(g=0.0), -0.337, freqs, np.logspace(-2, 6, 9))
    step_mhz = 0.4 / 4000
    assert np.max(np.abs(scan.peak_freqs_ghz - 8.0035)) * 1e3 <= step_mhz


def test_power_scan_peak_moves_monotonically_without_overshoot():
    system = _j1_system()
    freqs = 8.0035 + np.linspace(-1.0, 17.0, 18001) * 1e-3
    scan = power_scan(system, -0.337, freqs, np.logspace(-2, 10, 49))
    offsets = (scan.peak_freqs_ghz - 8.0035) * 1e3
    assert np.all(np.diff(offsets) <= 1e-9)
    chi = dispersive_shift(138, 6.808, 8.0035).chi_mhz
    assert np.all(offsets <= chi + 1e-3)
    assert np.all(offsets >= -system.mode.kappa_mhz)


def test_power_scan_rejects_negative_power():
    with pytest.raises(InvalidParameterError):
        power_scan(_j1_system(), -0.337, [8.0], [-1.0])
