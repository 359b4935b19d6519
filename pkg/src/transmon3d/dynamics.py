"""Lindblad simulation of the T1, Ramsey and echo protocols.

Frame: rotating at the drive frequency. A qubit detuning ``Delta`` (Hz) enters as
``2 pi Delta N`` with ``N = diag(0, 1, 2, ...)``. Relaxation uses the truncated
harmonic lowering operator at rate ``gamma1``; pure dephasing uses ``N`` at rate
``2 gamma_phi`` so the 0-1 coherence decays at ``gamma1/2 + gamma_phi``.
Pulses rotate the 0-1 subspace by ``exp(-i theta/2 (cos(phi) X + sin(phi) Y))``.
The measured quantity is the excited population ``1 - rho_00``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Union

import numpy as np

from . import kernels
from .errors import InvalidParameterError, NumericFailureError
from .noise import (
    ECHO,
    RAMSEY,
    NoiseModel,
    OrnsteinUhlenbeck,
    PhaseNoiseSampler,
    StaticGaussian,
    Telegraph,
    White,
    coherence_function,
    noise_to_dict,
)

TWO_PI = 2.0 * math.pi
ANALYTIC = 0  # n_shots sentinel: apply the analytic coherence instead of sampling
STEPS_PER_RATE = 50
MIN_STEPS = 100
POP_TOL = 1e-6


@dataclass
class DensityMatrix:
    data: np.ndarray
    time: float = 0.0

    @classmethod
    def basis(cls, level: int, dim: int = 2) -> "DensityMatrix":
        rho = np.zeros((dim, dim), dtype=complex)
        rho[level, level] = 1.0
        return cls(rho)

    @property
    def dim(self) -> int:
        return self.data.shape[0]

    @property
    def trace(self) -> float:
        return float(np.trace(self.data).real)

    @property
    def purity(self) -> float:
        return float(np.trace(self.data @ self.data).real)

    def population(self, level: int) -> float:
        return float(self.data[level, level].real)

    def validate(self, tol: float = 1e-9):
        if np.max(np.abs(self.data - self.data.conj().T)) > tol:
            raise NumericFailureError("density matrix lost hermiticity")
        if abs(self.trace - 1.0) > tol:
            raise NumericFailureError(f"density matrix trace drifted to {self.trace!r}")
        low = np.linalg.eigvalsh(0.5 * (self.data + self.data.conj().T)).min()
        if low < -tol:
            raise NumericFailureError(f"density matrix has negative eigenvalue {low:.3g}")


@dataclass(frozen=True)
class Pulse:
    axis: float  # rad, in the equatorial plane
    angle: float  # rad
    duration: float = 0.0  # ns; 0 means instantaneous


@dataclass(frozen=True)
class Delay:
    duration: float  # s


@dataclass(frozen=True)
class Measure:
    pass


Segment = Union[Pulse, Delay, Measure]


@dataclass
class PulseSequence:
    segments: list
    detuning: float = 0.0  # Hz
    artificial_phase_rate: float = 0.0  # rad/s

    def __post_init__(self):
        if not self.segments or not isinstance(self.segments[-1], Measure):
            raise InvalidParameterError("a pulse sequence must end with Measure")
        if sum(isinstance(s, Measure) for s in self.segments) != 1:
            raise InvalidParameterError("a pulse sequence has exactly one Measure")
        for seg in self.segments:
            if isinstance(seg, (Pulse, Delay)) and seg.duration < 0:
                raise InvalidParameterError("segment durations must be non-negative")

    @property
    def duration(self) -> float:
        return sum(
            s.duration * (1e-9 if isinstance(s, Pulse) else 1.0)
            for s in self.segments
            if not isinstance(s, Measure)
        )


@dataclass
class ExperimentResult:
    delays: np.ndarray  # s
    population: np.ndarray
    protocol: str
    stderr: np.ndarray = None
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        self.delays = np.asarray(self.delays, dtype=float)
        self.population = np.asarray(self.population, dtype=float)
        if self.stderr is None:
            self.stderr = np.zeros_like(self.population)
        if np.any(np.diff(self.delays) <= 0):
            raise InvalidParameterError("delay grid must be strictly ascending")
        if np.any(self.population < -POP_TOL) or np.any(self.population > 1 + POP_TOL):
            raise NumericFailureError("population left [0, 1]")


def rotation(angle: float, axis: float, dim: int = 2) -> np.ndarray:
    u = np.eye(dim, dtype=complex)
    c, s = math.cos(angle / 2.0), math.sin(angle / 2.0)
    u[0, 0] = u[1, 1] = c
    u[0, 1] = -1j * s * np.exp(-1j * axis)
    u[1, 0] = -1j * s * np.exp(1j * axis)
    return u


def _number(dim: int) -> np.ndarray:
    return np.arange(dim, dtype=float)


def _max_step(h_rad: np.ndarray, gamma1: float, gamma_phi: float, extra: float = 0.0) -> float:
    scale = max(float(np.max(np.abs(h_rad))) if h_rad.size else 0.0, gamma1, gamma_phi, extra)
    return math.inf if scale == 0 else 1.0 / (STEPS_PER_RATE * scale)


def evolve(
    rho: DensityMatrix,
    hamiltonian,
    collapse_rates: dict,
    duration: float,
    dt: float,
    detunings=None,
) -> DensityMatrix:
    """Integrate the Lindblad equation for ``duration`` seconds with RK4.

    ``hamiltonian`` is in GHz (E/h). ``collapse_rates`` holds ``down`` (gamma1) and
    ``dephase`` (gamma_phi) in 1/s. ``detunings`` optionally gives one angular
    detuning (rad/s) per step, coupled to N.
    """
    h_rad = TWO_PI * 1e9 * np.asarray(hamiltonian, dtype=complex)
    gamma1 = float(collapse_rates.get("down", 0.0))
    gamma_phi = float(collapse_rates.get("dephase", 0.0))
    if gamma1 < 0 or gamma_phi < 0:
        raise InvalidParameterError("rates must be non-negative")
    if duration < 0 or dt <= 0:
        raise InvalidParameterError("duration must be >= 0 and dt > 0")
    n_steps = int(math.ceil(duration / dt - 1e-9)) if duration > 0 else 0
    det = None
    extra = 0.0
    if detunings is not None:
        det = np.asarray(detunings, dtype=float).reshape(1, -1)
        if det.shape[1] != n_steps:
            raise InvalidParameterError(f"expected {n_steps} detuning samples, got {det.shape[1]}")
        extra = float(np.max(np.abs(det))) if n_steps else 0.0
    limit = _max_step(h_rad, gamma1, gamma_phi, extra)
    if dt > limit * (1 + 1e-12):
        raise InvalidParameterError(f"dt = {dt:g} s exceeds the stability limit {limit:g} s")
    out = rho.data[None, :, :]
    if n_steps:
        out = kernels.lindblad_rk4(
            out, h_rad, _number(rho.dim), det, n_steps, gamma1, gamma_phi, duration / n_steps
        )
    result = DensityMatrix(out[0], rho.time + duration)
    result.validate()
    return result


class _Ensemble:
    """A batch of density matrices, one per noise shot, driven segment by segment."""

    def __init__(self, dim, n_shots, gamma1, gamma_phi, detuning_hz, alpha_ghz, sampler):
        self.dim = dim
        self.gamma1 = gamma1
        self.gamma_phi = gamma_phi
        self.sampler = sampler
        self.rho = np.zeros((n_shots, dim, dim), dtype=complex)
        self.rho[:, 0, 0] = 1.0
        self.h_free = np.diag(TWO_PI * detuning_hz * _number(dim)).astype(complex)
        if dim > 2:
            self.h_free[2, 2] += TWO_PI * 1e9 * alpha_ghz
        self.noise_scale = 0.0
        if sampler is not None:
            self.noise_scale = 5.0 * sampler.noise.sigma

    def copy(self) -> "_Ensemble":
        other = object.__new__(_Ensemble)
        other.__dict__.update(self.__dict__)
        other.rho = self.rho.copy()
        return other

    def _integrate(self, h_rad, duration):
        if duration <= 0:
            return
        dt_max = _max_step(h_rad, self.gamma1, self.gamma_phi, self.noise_scale)
        n_steps = max(MIN_STEPS, int(math.ceil(duration / dt_max - 1e-9)))
        h = duration / n_steps
        det = self.sampler.advance(h, n_steps) if self.sampler is not None else None
        self.rho = kernels.lindblad_rk4(
            self.rho, h_rad, _number(self.dim), det, n_steps, self.gamma1, self.gamma_phi, h
        )

    def pulse(self, pulse: Pulse):
        if pulse.duration == 0:
            u = rotation(pulse.angle, pulse.axis, self.dim)
            self.rho = u @ self.rho @ u.conj().T
            return
        duration = pulse.duration * 1e-9
        rabi = pulse.angle / duration
        drive = np.zeros((self.dim, self.dim), dtype=complex)
        for k in range(self.dim - 1):
            drive[k + 1, k] = math.sqrt(k + 1) * 0.5 * rabi * np.exp(1j * pulse.axis)
        self._integrate(self.h_free + drive + drive.conj().T, duration)

    def delay(self, duration: float):
        self._integrate(self.h_free, duration)

    def excited(self) -> np.ndarray:
        return 1.0 - self.rho[:, 0, 0].real


def _sampler(noise, n_shots, rng):
    if noise is None or isinstance(noise, White) or n_shots == ANALYTIC:
        return None
    if isinstance(noise, Telegraph):
        raise InvalidParameterError("telegraph noise is only used for frequency traces")
    return PhaseNoiseSampler(noise, n_shots, rng)


def _white_rate(noise) -> float:
    return noise.gamma_phi if isinstance(noise, White) else 0.0


def run_sequence(
    sequence: PulseSequence,
    gamma1: float,
    noise: NoiseModel | None = None,
    n_shots: int = 1,
    seed: int = 0,
    levels: int = 2,
    alpha_ghz: float = -0.3,
):
    """Per-shot excited populations after running ``sequence``."""
    rng = np.random.default_rng(seed)
    shots = max(1, n_shots)
    sampler = _sampler(noise, n_shots, rng)
    if sampler is None:
        shots = 1
    ens = _Ensemble(levels, shots, gamma1, _white_rate(noise), sequence.detuning, alpha_ghz, sampler)
    for seg in sequence.segments:
        if isinstance(seg, Pulse):
            ens.pulse(seg)
        elif isinstance(seg, Delay):
            ens.delay(seg.duration)
    return ens.excited()


def _check_delays(delays) -> np.ndarray:
    delays = np.asarray(delays, dtype=float)
    if delays.ndim != 1 or len(delays) == 0:
        raise InvalidParameterError("delay grid must be a non-empty 1-D sequence")
    if np.any(delays < 0) or np.any(np.diff(delays) <= 0):
        raise InvalidParameterError("delays must be non-negative and strictly ascending")
    return delays


def _summarize(per_shot: np.ndarray):
    mean = float(per_shot.mean())
    err = float(per_shot.std(ddof=1) / math.sqrt(len(per_shot))) if len(per_shot) > 1 else 0.0
    return mean, err


def _shot_seeds(seed, count):
    return np.random.SeedSequence(seed).spawn(count)


def simulate_t1(gamma1: float, delays, pulse_ns: float = 0.0, levels: int = 2) -> ExperimentResult:
    """pi pulse, wait, measure."""
    delays = _check_delays(delays)
    ens = _Ensemble(levels, 1, gamma1, 0.0, 0.0, -0.3, None)
    ens.pulse(Pulse(0.0, math.pi, pulse_ns))
    pops = np.empty(len(delays))
    elapsed = 0.0
    for i, t in enumerate(delays):
        ens.delay(t - elapsed)
        elapsed = t
        pops[i] = ens.excited()[0]
    return ExperimentResult(
        delays, np.clip(pops, 0.0, 1.0), "t1",
        metadata={"gamma1": gamma1, "pulse_ns": pulse_ns, "levels": levels},
    )


def simulate_ramsey(
    gamma1: float,
    noise: NoiseModel | None,
    detuning: float,
    artificial_phase_rate: float,
    delays,
    n_shots: int = 1,
    seed: int = 0,
    pulse_ns: float = 0.0,
) -> ExperimentResult:
    """pi/2, free evolution, pi/2 about an axis advanced by ``artificial_phase_rate * t``.

    Fringes oscillate at ``detuning + artificial_phase_rate / 2 pi``. Shots share one
    noise path across the delay grid; the second pulse is applied to a copy of
    the evolving ensemble at each delay.
    """
    delays = _check_delays(delays)
    if n_shots < 0:
        raise InvalidParameterError("n_shots must be >= 0")
    rng = np.random.default_rng(_shot_seeds(seed, 1)[0])
    sampler = _sampler(noise, n_shots, rng)
    shots = n_shots if sampler is not None else 1
    ens = _Ensemble(2, shots, gamma1, _white_rate(noise), detuning, -0.3, sampler)
    ens.pulse(Pulse(0.0, math.pi / 2, pulse_ns))
    pops = np.empty(len(delays))
    errs = np.zeros(len(delays))
    elapsed = 0.0
    for i, t in enumerate(delays):
        ens.delay(t - elapsed)
        elapsed = t
        probe = ens.copy()
        probe.sampler = None  # noise during the closing pulse is negligible
        probe.pulse(Pulse(artificial_phase_rate * t, math.pi / 2, pulse_ns))
        pops[i], errs[i] = _summarize(probe.excited())
    pops = _apply_analytic(pops, noise, n_shots, RAMSEY, delays)
    return ExperimentResult(
        delays, np.clip(pops, 0.0, 1.0), RAMSEY, errs,
        metadata=_metadata(gamma1, noise, n_shots, seed, pulse_ns,
                           detuning=detuning, artificial_phase_rate=artificial_phase_rate),
    )


def simulate_echo(
    gamma1: float,
    noise: NoiseModel | None,
    delays,
    n_shots: int = 1,
    seed: int = 0,
    pulse_ns: float = 0.0,
) -> ExperimentResult:
    """pi/2 - t/2 - pi - t/2 - pi/2(-x); each delay uses fresh shots."""
    delays = _check_delays(delays)
    if n_shots < 0:
        raise InvalidParameterError("n_shots must be >= 0")
    pops = np.empty(len(delays))
    errs = np.zeros(len(delays))
    for i, (t, ss) in enumerate(zip(delays, _shot_seeds(seed, len(delays)))):
        seq = PulseSequence([
            Pulse(0.0, math.pi / 2, pulse_ns),
            Delay(t / 2),
            Pulse(0.0, math.pi, pulse_ns),
            Delay(t / 2),
            Pulse(math.pi, math.pi / 2, pulse_ns),
            Measure(),
        ])
        per_shot = run_sequence(seq, gamma1, noise, n_shots, seed=ss)
        pops[i], errs[i] = _summarize(per_shot)
    pops = _apply_analytic(pops, noise, n_shots, ECHO, delays)
    return ExperimentResult(
        delays, np.clip(pops, 0.0, 1.0), ECHO, errs,
        metadata=_metadata(gamma1, noise, n_shots, seed, pulse_ns),
    )


def _apply_analytic(pops, noise, n_shots, protocol, delays):
    if n_shots != ANALYTIC or noise is None or isinstance(noise, White):
        return pops
    return 0.5 + (pops - 0.5) * coherence_function(noise, protocol, delays)


def _metadata(gamma1, noise, n_shots, seed, pulse_ns, **extra):
    meta = {
        "gamma1": gamma1,
        "noise": noise_to_dict(noise) if noise is not None else {"kind": "none"},
        "n_shots": n_shots,
        "seed": seed,
        "pulse_ns": pulse_ns,
    }
    meta.update(extra)
    return meta


def pulse_leakage(alpha_ghz: float, duration_ns: float = 20.0, angle: float = math.pi) -> float:
    """Population left in |2> after a square pulse on a three-level transmon."""
    ens = _Ensemble(3, 1, 0.0, 0.0, 0.0, alpha_ghz, None)
    ens.pulse(Pulse(0.0, angle, duration_ns))
    return float(ens.rho[0, 2, 2].real)


class ReadoutResult(NamedTuple):
    fidelity: float
    p0_given_1: float
    p1_given_0: float
    iq_ground: np.ndarray
    iq_excited: np.ndarray
    threshold: float


def single_shot_readout(
    chi: float,
    kappa: float,
    n_bar: float,
    t_int: float,
    t1: float,
    shots: int,
    seed: int = 0,
) -> ReadoutResult:
    """Gaussian IQ-cloud readout model.

    ``chi`` and ``kappa`` are chi/2pi and kappa/2pi in MHz, ``t_int`` and ``t1`` in us.
    The two pointer states sit at radius ``sqrt(n_bar kappa t_int)`` separated by the
    angle ``2 atan(2 chi / kappa)``; each shot adds complex Gaussian noise of unit
    variance. Excited shots decay during integration with probability
    ``1 - exp(-t_int/t1)`` and then land in the ground cloud. Shots are classified
    by the perpendicular bisector of the two cloud centres.
    """
    if shots < 1000:
        raise InvalidParameterError("readout statistics need at least 1000 shots")
    if kappa <= 0 or n_bar < 0 or t_int <= 0 or t1 <= 0:
        raise InvalidParameterError("readout parameters must be positive")
    rng = np.random.default_rng(seed)
    radius = math.sqrt(n_bar * TWO_PI * kappa * 1e6 * t_int * 1e-6)
    half_angle = math.atan(2.0 * chi / kappa)
    centre_g = radius * np.exp(-1j * half_angle)
    centre_e = radius * np.exp(1j * half_angle)

    def noise(n):
        return (rng.standard_normal(n) + 1j * rng.standard_normal(n)) / math.sqrt(2.0)

    iq_g = centre_g + noise(shots)
    decayed = rng.random(shots) < -math.expm1(-t_int / t1)
    iq_e = np.where(decayed, centre_g, centre_e) + noise(shots)

    axis = centre_e - centre_g
    axis = axis / abs(axis) if abs(axis) > 0 else 1.0 + 0j
    midpoint = 0.5 * (centre_e + centre_g)

    def project(z):
        return ((z - midpoint) * np.conj(axis)).real

    p1_given_0 = float(np.mean(project(iq_g) > 0))
    p0_given_1 = float(np.mean(project(iq_e) <= 0))
    return ReadoutResult(
        fidelity=1.0 - p0_given_1 - p1_given_0,
        p0_given_1=p0_given_1,
        p1_given_0=p1_given_0,
        iq_ground=iq_g,
        iq_excited=iq_e,
        threshold=float((midpoint * np.conj(axis)).real),
    )
