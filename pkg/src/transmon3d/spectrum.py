"""Charge-basis spectrum of a single-junction transmon.

The Hamiltonian ``H = 4 E_C (n - n_0)^2 - E_J cos(phi)`` is represented in the
basis of pair-charge states ``|n>``, ``n = -N..N``. In that basis ``cos(phi)``
couples neighbouring charge states, so the matrix is real, symmetric and
tridiagonal. All energies are frequencies (E/h) in GHz.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field, replace

import numpy as np
from scipy import linalg, optimize

from .constants import CONSTANTS
from .errors import InvalidParameterError, NoSolutionError, NumericFailureError

MIN_CUTOFF = 5
DEFAULT_CUTOFF = 20
TRANSMON_RATIO = 20.0


class TransmonRegimeWarning(UserWarning):
    pass


@dataclass(frozen=True)
class TransmonParams:
    """Josephson and charging energy (GHz), offset charge and charge cutoff."""

    ej: float
    ec: float
    n_offset: float = 0.0
    charge_cutoff: int = DEFAULT_CUTOFF

    def __post_init__(self):
        if not self.ej >= 0:
            raise InvalidParameterError(f"ej must be non-negative, got {self.ej}")
        if not self.ec > 0:
            raise InvalidParameterError(f"ec must be positive, got {self.ec}")
        if int(self.charge_cutoff) != self.charge_cutoff or self.charge_cutoff < MIN_CUTOFF:
            raise InvalidParameterError(
                f"charge_cutoff must be an integer >= {MIN_CUTOFF}, got {self.charge_cutoff}"
            )

    @property
    def dimension(self) -> int:
        return 2 * self.charge_cutoff + 1

    @property
    def ratio(self) -> float:
        return self.ej / self.ec

    @property
    def critical_current_na(self) -> float:
        return ic_from_ej(self.ej)

    @property
    def c_sigma_ff(self) -> float:
        return csigma_from_ec(self.ec)

    def recommended_cutoff(self) -> int:
        return int(math.ceil(4.0 * math.sqrt(self.ej / (8.0 * self.ec)) + 10))

    def with_cutoff(self, cutoff: int) -> "TransmonParams":
        return replace(self, charge_cutoff=int(cutoff))


@dataclass(frozen=True)
class EnergySpectrum:
    levels: np.ndarray
    params: TransmonParams = field(repr=False)

    @property
    def f01(self) -> float:
        return float(self.levels[1] - self.levels[0])

    @property
    def f12(self) -> float:
        return float(self.levels[2] - self.levels[1])

    @property
    def anharmonicity(self) -> float:
        return self.f12 - self.f01

    @property
    def omega01(self) -> float:
        """Angular 0-1 transition frequency in rad/s."""
        return 2.0 * math.pi * 1e9 * self.f01

    def transition(self, lower: int, upper: int) -> float:
        return float(self.levels[upper] - self.levels[lower])


def _charges(params: TransmonParams) -> np.ndarray:
    n = params.charge_cutoff
    return np.arange(-n, n + 1, dtype=float)


def build_hamiltonian(params: TransmonParams) -> np.ndarray:
    charges = _charges(params)
    h = np.diag(4.0 * params.ec * (charges - params.n_offset) ** 2)
    off = np.full(params.dimension - 1, -0.5 * params.ej)
    h += np.diag(off, 1) + np.diag(off, -1)
    return h


def _eigensystem(params: TransmonParams, k: int, vectors: bool):
    charges = _charges(params)
    diag = 4.0 * params.ec * (charges - params.n_offset) ** 2
    off = np.full(params.dimension - 1, -0.5 * params.ej)
    try:
        return linalg.eigh_tridiagonal(
            diag, off, eigvals_only=not vectors, select="i", select_range=(0, k - 1)
        )
    except (linalg.LinAlgError, ValueError) as exc:
        raise NumericFailureError(
            f"eigensolve failed for ej={params.ej}, ec={params.ec}, "
            f"n_offset={params.n_offset}, N={params.charge_cutoff}: {exc}"
        ) from exc


def eigenlevels(params: TransmonParams, k: int = 5) -> EnergySpectrum:
    """Lowest ``k`` levels, shifted so the ground state sits at zero."""
    if k < 3 or k > params.dimension:
        raise InvalidParameterError(f"level count must lie in [3, {params.dimension}], got {k}")
    values = _eigensystem(params, k, vectors=False)
    if not np.all(np.isfinite(values)):
        raise NumericFailureError(f"non-finite eigenvalues for {params}")
    values = np.sort(values)
    return EnergySpectrum(levels=values - values[0], params=params)


def eigenstates(params: TransmonParams, k: int = 5):
    """Levels (GHz, ground at zero) and charge-basis eigenvectors as columns."""
    values, vectors = _eigensystem(params, k, vectors=True)
    # fix the sign so that the largest component of each vector is positive
    signs = np.sign(vectors[np.argmax(np.abs(vectors), axis=0), np.arange(k)])
    return values - values[0], vectors * signs


def charge_matrix_elements(params: TransmonParams, k: int = 5) -> np.ndarray:
    """``<i|n|j>`` between the lowest ``k`` eigenstates."""
    _, vectors = eigenstates(params, k)
    return vectors.T @ (_charges(params)[:, None] * vectors)


def cutoff_convergence(params: TransmonParams) -> float:
    """|f01(N) - f01(2N)| in Hz."""
    base = eigenlevels(params).f01
    doubled = eigenlevels(params.with_cutoff(2 * params.charge_cutoff)).f01
    return abs(base - doubled) * 1e9


def approx_f01(ej: float, ec: float) -> float:
    """Closed-form transmon estimate sqrt(8 E_J E_C) - E_C in GHz."""
    if ej <= 0 or ec <= 0:
        raise InvalidParameterError("ej and ec must be positive")
    if ej / ec <= TRANSMON_RATIO:
        warnings.warn(
            f"E_J/E_C = {ej / ec:.3g} is outside the transmon regime (> {TRANSMON_RATIO:g}); "
            "the closed form is unreliable",
            TransmonRegimeWarning,
            stacklevel=2,
        )
    return math.sqrt(8.0 * ej * ec) - ec


def charge_dispersion(
    params: TransmonParams, transition: tuple[int, int] = (0, 1), n_points: int = 21
) -> float:
    """Peak-to-peak variation (Hz) of a transition frequency as n_0 sweeps [0, 0.5]."""
    if n_points < 21:
        raise InvalidParameterError("charge dispersion needs at least 21 offset-charge points")
    lower, upper = transition
    k = max(3, upper + 1)
    freqs = [
        eigenlevels(replace(params, n_offset=float(n0)), k).transition(lower, upper)
        for n0 in np.linspace(0.0, 0.5, n_points)
    ]
    return (max(freqs) - min(freqs)) * 1e9


def fit_ej_ec(f01: float, alpha: float, charge_cutoff: int = DEFAULT_CUTOFF) -> TransmonParams:
    """Find (E_J, E_C) whose diagonalized f01 and anharmonicity match the inputs."""
    if not (f01 > 0 and alpha < 0 and abs(alpha) < f01):
        raise NoSolutionError(
            f"no transmon solution for f01={f01} GHz, alpha={alpha} GHz "
            "(need f01 > 0, alpha < 0, |alpha| < f01)"
        )
    ec0 = -alpha
    ej0 = (f01 - alpha) ** 2 / (8.0 * ec0)
    target = np.array([f01, alpha])

    def residual(logp):
        ej, ec = np.exp(logp)
        spec = eigenlevels(TransmonParams(ej, ec, 0.0, charge_cutoff))
        return (np.array([spec.f01, spec.anharmonicity]) - target) / np.abs(target)

    sol = optimize.root(residual, np.log([ej0, ec0]), method="hybr", options={"xtol": 1e-12})
    ej, ec = (float(v) for v in np.exp(sol.x))
    if not sol.success or np.max(np.abs(residual(sol.x))) > 1e-4:
        raise NoSolutionError(f"root-find did not converge for f01={f01}, alpha={alpha}: {sol.message}")
    if ej / ec <= TRANSMON_RATIO:
        raise NoSolutionError(
            f"solution E_J/E_C = {ej / ec:.3g} lies outside the transmon regime"
        )
    return TransmonParams(ej, ec, 0.0, charge_cutoff)


def ej_from_ic(ic_na: float) -> float:
    """E_J/h in GHz for a critical current in nA (E_J = hbar I_c / 2e)."""
    if ic_na <= 0:
        raise InvalidParameterError("critical current must be positive")
    return CONSTANTS.hbar * ic_na * 1e-9 / (2.0 * CONSTANTS.e) / CONSTANTS.h * 1e-9


def ic_from_ej(ej_ghz: float) -> float:
    if ej_ghz <= 0:
        raise InvalidParameterError("ej must be positive")
    return ej_ghz * 1e9 * CONSTANTS.h * 2.0 * CONSTANTS.e / CONSTANTS.hbar * 1e9


def ec_from_csigma(c_sigma_ff: float) -> float:
    """E_C/h in GHz for a total capacitance in fF (E_C = e^2 / 2 C)."""
    if c_sigma_ff <= 0:
        raise InvalidParameterError("capacitance must be positive")
    return CONSTANTS.e ** 2 / (2.0 * c_sigma_ff * 1e-15) / CONSTANTS.h * 1e-9


def csigma_from_ec(ec_ghz: float) -> float:
    if ec_ghz <= 0:
        raise InvalidParameterError("ec must be positive")
    return CONSTANTS.e ** 2 / (2.0 * ec_ghz * 1e9 * CONSTANTS.h) * 1e15
