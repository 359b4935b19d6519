"""Qubit frequency-noise processes and the coherence they produce.

Every process describes fluctuations ``delta_omega(t)`` of the angular qubit
frequency (rad/s). The accumulated phase is ``phi = int s(t') delta_omega(t') dt'``
with ``s = +1`` throughout for Ramsey and ``s`` flipping sign at ``t/2`` for a
single Hahn echo. Coherence is ``<exp(i phi)>``.

White noise is parametrized by ``s_omega``, the time integral of the
autocorrelation of ``delta_omega`` (rad^2/s), so its pure dephasing rate is
``s_omega / 2``.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple, Union

import numpy as np
from scipy import optimize

from . import kernels
from .errors import InvalidParameterError

RAMSEY = "ramsey"
ECHO = "echo"
PROTOCOLS = (RAMSEY, ECHO)


@dataclass(frozen=True)
class White:
    s_omega: float
    kind = "white"
    refocused_by_echo = False

    def __post_init__(self):
        _non_negative(s_omega=self.s_omega)

    @classmethod
    def from_gamma_phi(cls, gamma_phi: float) -> "White":
        return cls(2.0 * gamma_phi)

    @property
    def gamma_phi(self) -> float:
        return 0.5 * self.s_omega


@dataclass(frozen=True)
class OrnsteinUhlenbeck:
    sigma: float
    tau_c: float
    kind = "ou"
    refocused_by_echo = "partial"

    def __post_init__(self):
        _non_negative(sigma=self.sigma)
        if not self.tau_c > 0:
            raise InvalidParameterError("tau_c must be positive")

    @classmethod
    def tuned(cls, tau_c: float, ramsey_time: float) -> "OrnsteinUhlenbeck":
        """OU noise whose Ramsey coherence falls to 1/e at ``ramsey_time``."""
        x = ramsey_time / tau_c
        return cls(sigma=1.0 / (tau_c * math.sqrt(x - 1.0 + math.exp(-x))), tau_c=tau_c)


@dataclass(frozen=True)
class StaticGaussian:
    sigma: float
    kind = "static"
    refocused_by_echo = True

    def __post_init__(self):
        _non_negative(sigma=self.sigma)


@dataclass(frozen=True)
class Telegraph:
    """Symmetric random telegraph switching of f01 by ``delta_f`` (Hz) at ``rate`` (1/s)."""

    delta_f: float
    rate: float
    kind = "telegraph"
    refocused_by_echo = None

    def __post_init__(self):
        _non_negative(delta_f=self.delta_f, rate=self.rate)


NoiseModel = Union[White, OrnsteinUhlenbeck, StaticGaussian, Telegraph]


def _non_negative(**values):
    for name, value in values.items():
        if not value >= 0:
            raise InvalidParameterError(f"{name} must be non-negative, got {value}")


def _check_protocol(protocol: str):
    if protocol not in PROTOCOLS:
        raise InvalidParameterError(f"protocol must be one of {PROTOCOLS}, got {protocol!r}")


def noise_to_dict(noise: NoiseModel) -> dict:
    out = {"kind": noise.kind}
    out.update({k: float(v) for k, v in noise.__dict__.items()})
    return out


def parse_noise(text: str) -> NoiseModel:
    """Parse ``kind:key=value,key=value``.

    Kinds: ``white`` (``s_omega`` or ``gamma_phi``), ``ou`` (``sigma``, ``tau_c``
    or ``tau_c``, ``ramsey_time``), ``static`` (``sigma``), ``telegraph``
    (``delta_f``, ``rate``) and ``none``.
    """
    kind, _, rest = text.strip().partition(":")
    kind = kind.strip().lower()
    params = {}
    for item in filter(None, (s.strip() for s in rest.split(","))):
        key, sep, value = item.partition("=")
        if not sep:
            raise InvalidParameterError(f"noise parameter {item!r} is not key=value")
        try:
            params[key.strip()] = float(value)
        except ValueError as exc:
            raise InvalidParameterError(f"noise parameter {item!r} is not numeric") from exc
    try:
        if kind == "none":
            return White(0.0)
        if kind == "white":
            if "gamma_phi" in params:
                return White.from_gamma_phi(params["gamma_phi"])
            return White(params["s_omega"])
        if kind == "ou":
            if "ramsey_time" in params:
                return OrnsteinUhlenbeck.tuned(params["tau_c"], params["ramsey_time"])
            return OrnsteinUhlenbeck(params["sigma"], params["tau_c"])
        if kind == "static":
            return StaticGaussian(params["sigma"])
        if kind == "telegraph":
            return Telegraph(params["delta_f"], params["rate"])
    except KeyError as exc:
        raise InvalidParameterError(f"noise kind {kind!r} needs parameter {exc.args[0]!r}") from exc
    raise InvalidParameterError(f"unknown noise kind {kind!r}")


def coherence_function(noise: NoiseModel, protocol: str, t):
    """Analytic coherence ``|<exp(i phi(t))>|`` for Ramsey or single echo."""
    _check_protocol(protocol)
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < 0):
        raise InvalidParameterError("time must be non-negative")
    if isinstance(noise, White):
        out = np.exp(-0.5 * noise.s_omega * t_arr)
    elif isinstance(noise, StaticGaussian):
        if protocol == RAMSEY:
            out = np.exp(-0.5 * (noise.sigma * t_arr) ** 2)
        else:
            out = np.ones_like(t_arr)
    elif isinstance(noise, OrnsteinUhlenbeck):
        x = t_arr / noise.tau_c
        if protocol == RAMSEY:
            shape = x - 1.0 + np.exp(-x)
        else:
            shape = x - 3.0 - np.exp(-x) + 4.0 * np.exp(-0.5 * x)
        out = np.exp(-((noise.sigma * noise.tau_c) ** 2) * np.maximum(shape, 0.0))
    else:
        raise InvalidParameterError(
            f"{type(noise).__name__} noise only drives frequency traces; it has no coherence function"
        )
    return float(out) if out.ndim == 0 else out


def coherence_time(noise: NoiseModel, protocol: str, gamma1: float = 0.0) -> float:
    """Delay at which ``exp(-gamma1 t/2) * coherence`` falls to 1/e."""
    target = math.exp(-1.0)

    def excess(t):
        return math.exp(-0.5 * gamma1 * t) * coherence_function(noise, protocol, t) - target

    hi = 1e-9
    while excess(hi) > 0:
        hi *= 2.0
        if hi > 1e6:
            return math.inf
    return optimize.brentq(excess, 0.0, hi, xtol=1e-18, rtol=1e-13)


class MCCoherence(NamedTuple):
    times: np.ndarray
    mean: np.ndarray
    stderr: np.ndarray


def _phase_steps(noise, n_traj, n_steps, h, rng):
    """Per-step phase increments, shape (n_traj, n_steps)."""
    if isinstance(noise, White):
        return math.sqrt(noise.s_omega * h) * rng.standard_normal((n_traj, n_steps))
    if isinstance(noise, StaticGaussian):
        return (noise.sigma * h) * np.repeat(rng.standard_normal((n_traj, 1)), n_steps, axis=1)
    if isinstance(noise, OrnsteinUhlenbeck):
        x0 = noise.sigma * rng.standard_normal(n_traj)
        normals = rng.standard_normal((n_traj, n_steps, 2))
        steps, _ = kernels.ou_integrals(x0, normals, h, noise.sigma, noise.tau_c)
        return steps
    raise InvalidParameterError(f"no phase trajectories for {type(noise).__name__} noise")


def mc_coherence(
    noise: NoiseModel,
    protocol: str,
    times,
    n_traj: int = 10_000,
    dt: float | None = None,
    seed: int = 0,
) -> MCCoherence:
    """Monte-Carlo estimate of the coherence by averaging ``cos(phi)`` over paths.

    Each grid point gets its own random stream spawned from ``seed``, so results
    do not depend on evaluation order.
    """
    _check_protocol(protocol)
    times = np.asarray(times, dtype=float)
    if np.any(times < 0):
        raise InvalidParameterError("time must be non-negative")
    if n_traj < 100:
        raise InvalidParameterError("need at least 100 trajectories")
    if isinstance(noise, OrnsteinUhlenbeck):
        limit = noise.tau_c / 20.0
        if dt is None:
            dt = limit
        elif dt > limit * (1 + 1e-12):
            raise InvalidParameterError(f"dt = {dt:g} s exceeds tau_c/20 = {limit:g} s")
    if dt is None:
        dt = max(float(times.max()), 1e-12) / 200.0
    if dt <= 0:
        raise InvalidParameterError("dt must be positive")

    streams = np.random.SeedSequence(seed).spawn(len(times))
    mean = np.empty(len(times))
    stderr = np.empty(len(times))
    for i, (t, ss) in enumerate(zip(times, streams)):
        if t == 0:
            mean[i], stderr[i] = 1.0, 0.0
            continue
        n_steps = max(2, int(math.ceil(t / dt - 1e-9)))
        n_steps += n_steps % 2
        h = t / n_steps
        steps = _phase_steps(noise, n_traj, n_steps, h, np.random.default_rng(ss))
        if protocol == RAMSEY:
            phase = steps.sum(axis=1)
        else:
            half = n_steps // 2
            phase = steps[:, :half].sum(axis=1) - steps[:, half:].sum(axis=1)
        c = np.cos(phase)
        mean[i] = c.mean()
        stderr[i] = c.std(ddof=1) / math.sqrt(n_traj)
    return MCCoherence(times, mean, stderr)


def frequency_psd_from_ic(s_ic_frac: float) -> float:
    """Fractional frequency PSD from fractional critical-current PSD.

    ``omega01`` scales as ``sqrt(I_c)``, so ``d omega/omega = (1/2) dI/I``.
    """
    _non_negative(s_ic_frac=s_ic_frac)
    return 0.25 * s_ic_frac


def ic_psd_from_frequency(s_omega_frac: float) -> float:
    _non_negative(s_omega_frac=s_omega_frac)
    return 4.0 * s_omega_frac


def ic_noise_translation(s_ic_frac: float) -> float:
    return frequency_psd_from_ic(s_ic_frac)


class PhaseNoiseSampler:
    """Stateful per-shot noise path used by the pulse-sequence simulator.

    ``advance(h, n)`` returns the mean detuning (rad/s) over each of the next
    ``n`` steps of width ``h``, shape (shots, n). Using the step average is exact
    for the phase because the detuning commutes with the rest of the generator.
    """

    def __init__(self, noise: NoiseModel, n_shots: int, rng: np.random.Generator):
        if isinstance(noise, (White, Telegraph)):
            raise InvalidParameterError(f"{type(noise).__name__} noise is not sampled per shot")
        self.noise = noise
        self.rng = rng
        self.n_shots = n_shots
        self.state = noise.sigma * rng.standard_normal(n_shots)

    def advance(self, h: float, n_steps: int) -> np.ndarray:
        if n_steps == 0:
            return np.zeros((self.n_shots, 0))
        if isinstance(self.noise, StaticGaussian):
            return np.repeat(self.state[:, None], n_steps, axis=1)
        normals = self.rng.standard_normal((self.n_shots, n_steps, 2))
        steps, self.state = kernels.ou_integrals(
            self.state, normals, h, self.noise.sigma, self.noise.tau_c
        )
        return steps / h


def telegraph_trace(noise: Telegraph, times_s, rng: np.random.Generator) -> np.ndarray:
    """Sample a symmetric telegraph signal (+-delta_f/2, Hz) at the given times."""
    times_s = np.asarray(times_s, dtype=float)
    if len(times_s) == 0:
        return np.zeros(0)
    gaps = np.diff(times_s)
    p_flip = 0.5 * (1.0 - np.exp(-2.0 * noise.rate * gaps))
    flips = rng.random(len(gaps)) < p_flip
    state0 = 1 if rng.random() < 0.5 else -1
    signs = state0 * np.concatenate([[1], np.where(np.cumsum(flips) % 2 == 1, -1, 1)])
    return 0.5 * noise.delta_f * signs


@dataclass(frozen=True)
class CoherenceRecord:
    """Measured coherence of one device; times in microseconds, f01 in GHz."""

    t1: float
    t2: float
    t_echo: float
    f01: float

    def __post_init__(self):
        if not self.t1 > 0:
            raise InvalidParameterError("t1 must be positive")

    @property
    def omega01(self) -> float:
        return 2.0 * math.pi * 1e9 * self.f01

    @property
    def q1(self) -> float:
        return self.omega01 * self.t1 * 1e-6

    @property
    def q2(self) -> float:
        return self.omega01 * self.t2 * 1e-6

    @property
    def gamma_phi(self) -> float:
        """Pure dephasing rate 1/T2 - 1/(2 T1) in 1/s, clamped at zero."""
        rate = 1e6 / self.t2 - 0.5e6 / self.t1
        if rate < 0:
            warnings.warn(f"T2 = {self.t2} us exceeds 2 T1; pure dephasing clamped to 0")
            return 0.0
        return rate

    def error_rate(self, t_gate_ns: float = 10.0) -> float:
        return t_gate_ns * 1e-3 / self.t2
