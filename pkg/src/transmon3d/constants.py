"""Physical constants and unit conversions shared by every module.

Energies are carried as frequencies (E/h) in GHz, temperatures in kelvin and
superconducting gaps in micro-electronvolts.
"""
from dataclasses import dataclass
import math

from scipy import constants as _sc


@dataclass(frozen=True)
class PhysicalConstants:
    h: float = _sc.h
    hbar: float = _sc.hbar
    e: float = _sc.e
    k_B: float = _sc.k

    @property
    def kb_over_h_ghz_per_k(self) -> float:
        return self.k_B / self.h * 1e-9

    @property
    def uev_over_h_ghz(self) -> float:
        return 1e-6 * self.e / self.h * 1e-9

    @property
    def kb_uev_per_k(self) -> float:
        return self.k_B / self.e * 1e6


CONSTANTS = PhysicalConstants()


def ghz_to_rad_s(f_ghz):
    return 2.0 * math.pi * 1e9 * f_ghz


def uev_to_ghz(energy_uev):
    return energy_uev * CONSTANTS.uev_over_h_ghz


def kelvin_to_uev(temperature_k):
    return temperature_k * CONSTANTS.kb_uev_per_k
