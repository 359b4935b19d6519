"""Rectangular 3D cavity modes and qubit-cavity dispersive physics.

Conventions: cavity frequencies in GHz, couplings ``g/2pi`` and shifts in MHz,
linewidths ``kappa/2pi`` in MHz unless a name says otherwise. The signed
detuning is ``f01 - f_c``; the cavity is pushed away from the qubit.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import numpy as np
from scipy import constants as sc

from .errors import InvalidParameterError, ResonantRegimeError
from .spectrum import TransmonParams, charge_matrix_elements, eigenstates

C_MM_GHZ = sc.c * 1e3 / 1e9  # speed of light in mm*GHz

DEFAULT_TE101_GHZ = 8.003
DEFAULT_TE102_GHZ = 10.0
DISPERSIVE_RATIO = 10.0


@dataclass(frozen=True)
class CavityGeometry:
    """Interior dimensions in mm: width a (x), height b (y), length d (z)."""

    a: float
    b: float
    d: float

    def __post_init__(self):
        if min(self.a, self.b, self.d) <= 0:
            raise InvalidParameterError("cavity dimensions must be positive")

    @property
    def volume(self) -> float:
        return self.a * self.b * self.d

    @classmethod
    def from_mode_frequencies(
        cls, f101: float = DEFAULT_TE101_GHZ, f102: float = DEFAULT_TE102_GHZ, aspect: float = 0.5
    ) -> "CavityGeometry":
        """Solve a and d from the TE101 and TE102 frequencies with b = aspect * a."""
        if not 0 < f101 < f102 < 2 * f101:
            raise InvalidParameterError("need f101 < f102 < 2 f101 for a rectangular solution")
        k1 = (2.0 * f101 / C_MM_GHZ) ** 2
        k2 = (2.0 * f102 / C_MM_GHZ) ** 2
        inv_d2 = (k2 - k1) / 3.0
        inv_a2 = k1 - inv_d2
        if inv_a2 <= 0:
            raise InvalidParameterError("mode frequencies admit no real geometry")
        a = 1.0 / math.sqrt(inv_a2)
        return cls(a=a, b=aspect * a, d=1.0 / math.sqrt(inv_d2))


DEFAULT_GEOMETRY = CavityGeometry.from_mode_frequencies()


def _check_indices(m: int, n: int, p: int):
    if min(m, n, p) < 0:
        raise InvalidParameterError(f"mode indices must be non-negative, got {(m, n, p)}")
    if m == n == p == 0:
        raise InvalidParameterError("TE000 is not a cavity mode")
    if p == 0 or (m == 0 and n == 0):
        raise InvalidParameterError(f"TE{m}{n}{p} has no non-trivial field")


def te_mode_frequency(geom: CavityGeometry, m: int, n: int, p: int) -> float:
    _check_indices(m, n, p)
    return 0.5 * C_MM_GHZ * math.sqrt((m / geom.a) ** 2 + (n / geom.b) ** 2 + (p / geom.d) ** 2)


def field_profile(geom: CavityGeometry, mode: tuple[int, int, int], position) -> float:
    """Normalized E_y amplitude of TE_mnp at ``(x, y, z)`` in mm.

    E_y is the component along the qubit's dipole antenna.
    """
    m, n, p = mode
    _check_indices(m, n, p)
    x, y, z = position
    tol = 1e-12
    if not (-tol <= x <= geom.a + tol and -tol <= y <= geom.b + tol and -tol <= z <= geom.d + tol):
        raise InvalidParameterError(f"position {position} lies outside the cavity")
    return (
        math.sin(m * math.pi * x / geom.a)
        * math.cos(n * math.pi * y / geom.b)
        * math.sin(p * math.pi * z / geom.d)
    )


def mode_normalization(geom: CavityGeometry, mode: tuple[int, int, int]) -> float:
    """Volume integral of field_profile squared (mm^3)."""
    m, n, p = mode
    _check_indices(m, n, p)
    factor = (0.5 if m else 0.0) * (0.5 if n else 1.0) * 0.5
    return geom.volume * factor


@dataclass(frozen=True)
class CavityMode:
    f_c: float
    q_c: float
    indices: tuple[int, int, int] = (1, 0, 1)

    def __post_init__(self):
        if self.f_c <= 0 or self.q_c <= 0:
            raise InvalidParameterError("cavity frequency and Q must be positive")

    @property
    def kappa_mhz(self) -> float:
        """Linewidth kappa/2pi in MHz."""
        return self.f_c / self.q_c * 1e3


@dataclass(frozen=True)
class DispersiveSystem:
    f01: float
    mode: CavityMode
    g_mhz: float

    @property
    def detuning_ghz(self) -> float:
        """Signed detuning f01 - f_c."""
        return self.f01 - self.mode.f_c

    @property
    def chi_mhz(self) -> float:
        return self.g_mhz ** 2 / abs(self.detuning_ghz * 1e3)

    @property
    def dispersive(self) -> bool:
        return abs(self.detuning_ghz) * 1e3 > DISPERSIVE_RATIO * self.g_mhz

    @property
    def critical_photon_number(self) -> float:
        if self.g_mhz == 0:
            return math.inf
        return (self.detuning_ghz * 1e3) ** 2 / (4.0 * self.g_mhz ** 2)


class DispersiveShift(NamedTuple):
    chi_mhz: float
    dressed_cavity_ghz: float
    dispersive: bool


def dispersive_shift(g_mhz: float, f01: float, f_c: float) -> DispersiveShift:
    """Two-level pull ``g^2/delta`` of the cavity by a ground-state qubit.

    ``chi_mhz`` is signed: positive when the cavity is pushed up (qubit below it).
    """
    delta_mhz = (f_c - f01) * 1e3
    if abs(delta_mhz) <= abs(g_mhz) / 1000.0:
        raise ResonantRegimeError(
            f"|f01 - f_c| = {abs(delta_mhz):.3g} MHz is too small for g = {g_mhz} MHz"
        )
    chi = g_mhz ** 2 / delta_mhz
    return DispersiveShift(
        chi_mhz=chi,
        dressed_cavity_ghz=f_c + chi * 1e-3,
        dispersive=abs(delta_mhz) > DISPERSIVE_RATIO * abs(g_mhz),
    )


def transmon_chi_factor(alpha_ghz: float, detuning_ghz: float) -> float:
    """Multi-level correction alpha / (delta + alpha) to the two-level shift."""
    return alpha_ghz / (detuning_ghz + alpha_ghz)


class DressedLevels(NamedTuple):
    f01: float
    cavity_ghz: float
    bare_f01: float


def dressed_spectrum(
    params: TransmonParams,
    g_mhz: float,
    f_c: float,
    qubit_levels: int = 6,
    photons: int = 8,
    rwa: bool = False,
) -> DressedLevels:
    """Dressed qubit and cavity frequencies from the joint transmon-cavity Hamiltonian.

    The coupling is ``g * (n / n01) (a + a^dag)`` with ``n01 = |<0|n|1>|`` so that
    g is the 0-1 vacuum Rabi coupling. States are labelled by maximum overlap with
    the bare product basis.
    """
    levels, _ = eigenstates(params, qubit_levels)
    nmat = charge_matrix_elements(params, qubit_levels)
    coupling = nmat / abs(nmat[0, 1])
    a = np.diag(np.sqrt(np.arange(1, photons)), 1)
    g = g_mhz * 1e-3
    eye_q, eye_c = np.eye(qubit_levels), np.eye(photons)
    h = np.kron(np.diag(levels), eye_c) + np.kron(eye_q, f_c * (a.T @ a))
    if rwa:
        upper = np.triu(coupling, 1)
        h += g * (np.kron(upper, a.T) + np.kron(upper.T, a))
    else:
        h += g * np.kron(coupling, a + a.T)
    energies, vectors = np.linalg.eigh(h)

    def energy_of(qubit: int, photon: int) -> float:
        return float(energies[np.argmax(np.abs(vectors[qubit * photons + photon, :]))])

    ground = energy_of(0, 0)
    return DressedLevels(
        f01=energy_of(1, 0) - ground,
        cavity_ghz=energy_of(0, 1) - ground,
        bare_f01=float(levels[1]),
    )


class PurcellEstimate(NamedTuple):
    rate: float
    t1_us: float


def purcell_rate(modes: Iterable[Sequence[float]], f01: float) -> PurcellEstimate:
    """Multi-mode Purcell rate ``sum kappa_k (g_k/delta_k)^2``.

    Each mode is ``(g_mhz, f_c_ghz, kappa_mhz)`` with kappa the linewidth kappa/2pi.
    """
    total = 0.0
    for g_mhz, f_c, kappa_mhz in sorted(tuple(map(float, m)) for m in modes):
        delta_mhz = (f01 - f_c) * 1e3
        if g_mhz != 0 and abs(delta_mhz) <= abs(g_mhz):
            raise ResonantRegimeError(
                f"mode at {f_c} GHz is not dispersive with respect to f01 = {f01} GHz"
            )
        if g_mhz == 0:
            continue
        total += 2.0 * math.pi * kappa_mhz * 1e6 * (g_mhz / delta_mhz) ** 2
    t1 = math.inf if total == 0 else 1e6 / total
    return PurcellEstimate(rate=total, t1_us=t1)


@dataclass
class PowerScan:
    freqs_ghz: np.ndarray
    powers: np.ndarray
    transmission: np.ndarray  # shape (powers, freqs)
    photons: np.ndarray
    flagged: np.ndarray
    chi_mhz: float
    n_crit: float

    @property
    def peak_freqs_ghz(self) -> np.ndarray:
        return self.freqs_ghz[np.argmax(self.transmission, axis=1)]

    def rows(self):
        for i, p in enumerate(self.powers):
            for j, f in enumerate(self.freqs_ghz):
                yield float(f), float(p), float(self.transmission[i, j])


def power_scan(
    system: DispersiveSystem,
    alpha_ghz: float,
    drive_freqs_ghz,
    drive_powers,
    multilevel: bool = False,
    grid_points: int = 241,
    max_iter: int = 200,
) -> PowerScan:
    """Semiclassical cavity transmission versus drive frequency and power.

    The qubit pull saturates as ``chi / (1 + n/n_crit)``. Drive power is expressed
    as the intracavity photon number a drive on the line centre would produce, so
    ``n = p |t(n)|^2``. The smallest self-consistent ``n`` is taken (upward power
    sweep). It is bracketed on a logarithmic grid and refined by bisection.
    """
    freqs = np.asarray(drive_freqs_ghz, dtype=float)
    powers = np.asarray(drive_powers, dtype=float)
    if np.any(powers < 0):
        raise InvalidParameterError("drive powers must be non-negative")
    shift = dispersive_shift(system.g_mhz, system.f01, system.mode.f_c)
    chi = abs(shift.chi_mhz) * 1e-3
    if multilevel:
        chi *= abs(transmon_chi_factor(alpha_ghz, system.detuning_ghz))
    sign = 1.0 if shift.chi_mhz >= 0 else -1.0
    n_crit = system.critical_photon_number
    half_width = 0.5 * system.mode.kappa_mhz * 1e-3
    f_c = system.mode.f_c

    f = freqs[None, :]
    p = powers[:, None] * np.ones_like(f)

    def lorentz(n):
        centre = f_c + sign * chi / (1.0 + n / n_crit)
        return 1.0 / (1.0 + ((f - centre) / half_width) ** 2)

    def excess(n):
        return p * lorentz(n) - n

    lo = np.zeros_like(p)
    hi = p.copy()
    found = np.zeros(p.shape, dtype=bool)
    fractions = np.concatenate([[0.0], np.logspace(-15, 0, grid_points)])
    prev = lo.copy()
    for frac in fractions[1:]:
        cur = p * frac
        neg = (~found) & (excess(cur) <= 0)
        lo = np.where(neg, prev, lo)
        hi = np.where(neg, cur, hi)
        found |= neg
        prev = cur
    flagged = ~found
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        pos = excess(mid) > 0
        lo = np.where(pos, mid, lo)
        hi = np.where(pos, hi, mid)
        if np.all(hi - lo <= 1e-12 * np.maximum(hi, 1e-300)):
            break
    flagged |= (hi - lo) > 1e-9 * np.maximum(hi, 1e-300)
    photons = 0.5 * (lo + hi)
    return PowerScan(
        freqs_ghz=freqs,
        powers=powers,
        transmission=lorentz(photons),
        photons=photons,
        flagged=flagged,
        chi_mhz=chi * 1e3 * sign,
        n_crit=n_crit,
    )
