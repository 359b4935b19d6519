"""Thermal quasiparticles: relaxation, frequency shift and temperature sweeps.

Gap in micro-electronvolts, temperatures in kelvin, rates in 1/s.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np
from scipy import optimize

from .constants import CONSTANTS
from .errors import InvalidParameterError, NumericFailureError

# single-spin density of states of aluminium at the Fermi level, per um^3 per ueV
AL_DOS_PER_UM3_UEV = 1.72e4


def _hbar_omega_uev(f01_ghz: float) -> float:
    return CONSTANTS.h * f01_ghz * 1e9 / CONSTANTS.e * 1e6


def thermal_xqp(gap_uev: float, temperature_k):
    """Equilibrium quasiparticle fraction sqrt(2 pi kT/Delta) exp(-Delta/kT)."""
    t = np.asarray(temperature_k, dtype=float)
    if np.any(t < 0):
        raise InvalidParameterError("temperature must be non-negative")
    if gap_uev <= 0:
        raise InvalidParameterError("gap must be positive")
    kt = np.where(t > 0, t, 1.0) * CONSTANTS.kb_uev_per_k
    x = np.sqrt(2.0 * math.pi * kt / gap_uev) * np.exp(-gap_uev / kt)
    x = np.where(t > 0, x, 0.0)
    return float(x) if x.ndim == 0 else x


class QPRates(NamedTuple):
    rate: float
    frac_shift: float


def rate_per_xqp(gap_uev: float, f01_ghz: float) -> float:
    """Relaxation rate per unit x_qp: (omega/pi) sqrt(2 Delta / hbar omega)."""
    omega = 2.0 * math.pi * 1e9 * f01_ghz
    return omega / math.pi * math.sqrt(2.0 * gap_uev / _hbar_omega_uev(f01_ghz))


def shift_per_xqp(gap_uev: float, f01_ghz: float) -> float:
    """Fractional frequency shift per unit x_qp: -(1/2) sqrt(2 Delta / (pi hbar omega))."""
    return -0.5 * math.sqrt(2.0 * gap_uev / (math.pi * _hbar_omega_uev(f01_ghz)))


def qp_rates(x_qp, gap_uev: float, f01_ghz: float) -> QPRates:
    if np.any(np.asarray(x_qp) < 0):
        raise InvalidParameterError("x_qp must be non-negative")
    return QPRates(
        rate=x_qp * rate_per_xqp(gap_uev, f01_ghz),
        frac_shift=x_qp * shift_per_xqp(gap_uev, f01_ghz),
    )


@dataclass(frozen=True)
class QuasiparticleModel:
    gap_delta: float = 194.0
    base_rate: float = 0.0
    n_ref: Optional[float] = None

    def __post_init__(self):
        if not self.gap_delta > 0:
            raise InvalidParameterError("gap must be positive")
        if not self.base_rate >= 0:
            raise InvalidParameterError("base rate must be non-negative")

    @property
    def pair_density(self) -> float:
        """Cooper-pair density per um^3 used to turn x_qp into n_qp."""
        if self.n_ref is not None:
            return self.n_ref
        return 2.0 * AL_DOS_PER_UM3_UEV * self.gap_delta

    def qp_rate(self, f01_ghz: float, temperature_k):
        return qp_rates(thermal_xqp(self.gap_delta, temperature_k), self.gap_delta, f01_ghz).rate

    def t1(self, f01_ghz: float, temperature_k):
        return 1.0 / (self.base_rate + self.qp_rate(f01_ghz, temperature_k))

    def crossover_temperature(self, f01_ghz: float) -> float:
        """Temperature (K) where the quasiparticle rate equals the base rate."""
        if self.base_rate == 0:
            return 0.0
        hi = self.gap_delta / CONSTANTS.kb_uev_per_k  # kT = Delta

        def excess(t):
            return math.log(self.qp_rate(f01_ghz, t)) - math.log(self.base_rate)

        lo = hi / 200.0
        if excess(lo) > 0 or excess(hi) < 0:
            raise NumericFailureError("crossover temperature not bracketed")
        return optimize.brentq(excess, lo, hi, xtol=1e-12, rtol=1e-12)


@dataclass
class TemperatureSweep:
    temperatures_k: np.ndarray
    t1_s: np.ndarray
    qp_rate: np.ndarray
    df01_hz: np.ndarray
    crossover_k: float


def t1_vs_temperature(model: QuasiparticleModel, f01_ghz: float, temperatures_k) -> TemperatureSweep:
    temps = np.asarray(temperatures_k, dtype=float)
    if np.any(np.diff(temps) <= 0):
        raise InvalidParameterError("temperature grid must be strictly ascending")
    x = thermal_xqp(model.gap_delta, temps)
    rates = qp_rates(x, model.gap_delta, f01_ghz)
    return TemperatureSweep(
        temperatures_k=temps,
        t1_s=1.0 / (model.base_rate + rates.rate),
        qp_rate=np.asarray(rates.rate, dtype=float),
        df01_hz=np.asarray(rates.frac_shift, dtype=float) * f01_ghz * 1e9,
        crossover_k=model.crossover_temperature(f01_ghz),
    )


class XqpBound(NamedTuple):
    x_qp: float
    n_qp_per_um3: float


def xqp_bound(t1_s: float, gap_uev: float, f01_ghz: float, n_ref: Optional[float] = None) -> XqpBound:
    """Largest x_qp compatible with a measured T1 if quasiparticles set all of it."""
    if not t1_s > 0:
        raise InvalidParameterError("t1 must be positive")
    x = 1.0 / (t1_s * rate_per_xqp(gap_uev, f01_ghz))
    pairs = n_ref if n_ref is not None else 2.0 * AL_DOS_PER_UM3_UEV * gap_uev
    return XqpBound(x_qp=x, n_qp_per_um3=x * pairs)


def one_over_f_t2_prediction(
    amplitude_1hz: float,
    temperature_k: float,
    f01_ghz: float,
    ir_cutoff_hz: float = 1.0,
    t_ref_k: float = 4.2,
    max_iter: int = 200,
) -> float:
    """Gaussian dephasing time (s) from 1/f critical-current noise.

    ``amplitude_1hz`` is the fractional I_c noise amplitude at 1 Hz quoted at
    ``t_ref_k``; it is scaled quadratically in temperature. The log factor is
    evaluated at the dephasing time itself by fixed-point iteration.
    Returns ``math.inf`` when there is no noise.
    """
    if amplitude_1hz < 0 or temperature_k < 0 or f01_ghz <= 0 or ir_cutoff_hz <= 0:
        raise InvalidParameterError("inputs must be positive")
    a = amplitude_1hz * (temperature_k / t_ref_k) ** 2
    if a == 0:
        return math.inf
    rate0 = 0.5 * 2.0 * math.pi * 1e9 * f01_ghz * a
    t = 1.0 / rate0
    for _ in range(max_iter):
        arg = 2.0 * math.pi * ir_cutoff_hz * t
        if arg >= 1.0:
            raise NumericFailureError(
                f"dephasing time {t:g} s is longer than the infrared cutoff period"
            )
        new = 1.0 / (rate0 * math.sqrt(2.0 * math.log(1.0 / arg)))
        if abs(new - t) <= 1e-13 * t:
            return new
        t = new
    raise NumericFailureError(f"1/f self-consistency did not converge after {max_iter} iterations")
