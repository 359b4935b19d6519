"""Curve fitting for coherence data, quasiparticle gap extraction and stability traces.

Least-squares problems are solved with Levenberg-Marquardt from several fixed
starting points, keeping the lowest residual. Nothing here draws random numbers
except the explicitly seeded synthetic-trace generator.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Callable, NamedTuple, Optional, Sequence

import numpy as np
from scipy import optimize

from .errors import FitError, IllConditionedError, InvalidParameterError
from .noise import Telegraph, telegraph_trace
from .quasiparticles import QuasiparticleModel, rate_per_xqp, thermal_xqp

N_TAU_SEEDS = 8
XTOL = 1e-8
MIN_DECAY_POINTS = 8
MIN_RAMSEY_POINTS = 16
IC_THRESHOLD = 2.0


@dataclass
class FitResult:
    model: str
    params: dict
    errors: dict
    rss: float
    criterion: float
    n_points: int
    degenerate: bool = False
    diagnostics: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = asdict(self)
        out["errors"] = {k: (None if not math.isfinite(v) else v) for k, v in self.errors.items()}
        return out


def _criterion(rss: float, n: int, k: int) -> float:
    return n * math.log(max(rss, 1e-300) / n) + 2 * k


def _covariance(jac: np.ndarray, rss: float, n: int) -> np.ndarray:
    k = jac.shape[1]
    dof = max(n - k, 1)
    try:
        cov = np.linalg.inv(jac.T @ jac) * (rss / dof)
    except np.linalg.LinAlgError:
        return np.full((k, k), np.inf)
    if not np.all(np.isfinite(cov)):
        return np.full((k, k), np.inf)
    return cov


def _prepare(t, y, minimum):
    t = np.asarray(t, dtype=float)
    y = np.asarray(y, dtype=float)
    if t.shape != y.shape or t.ndim != 1:
        raise InvalidParameterError("t and y must be 1-D arrays of equal length")
    if len(t) < minimum:
        raise InvalidParameterError(f"need at least {minimum} points, got {len(t)}")
    if np.any(np.diff(t) <= 0):
        raise InvalidParameterError("t must be strictly ascending")
    if not (np.all(np.isfinite(t)) and np.all(np.isfinite(y))):
        raise InvalidParameterError("data must be finite")
    return t, y


def _best_fit(residual: Callable, starts: Sequence[np.ndarray]):
    best = None
    failures = []
    for x0 in starts:
        try:
            with np.errstate(over="ignore", under="ignore"):
                res = optimize.least_squares(residual, x0, method="lm", xtol=XTOL, ftol=1e-12, gtol=1e-12)
        except (ValueError, FloatingPointError) as exc:
            failures.append(str(exc))
            continue
        if not np.all(np.isfinite(res.x)) or not np.isfinite(res.cost):
            failures.append("non-finite solution")
            continue
        if best is None or res.cost < best.cost:
            best = res
    return best, failures


def _envelope(model: str):
    if model == "exponential":
        return lambda t, tau: np.exp(-t / tau)
    if model == "gaussian":
        return lambda t, tau: np.exp(-((t / tau) ** 2))
    raise InvalidParameterError(f"unknown decay model {model!r}")


def fit_decay(t, y, model: str = "exponential") -> FitResult:
    """Fit ``A env(t/T) + c`` with env exponential or Gaussian."""
    t, y = _prepare(t, y, MIN_DECAY_POINTS)
    env = _envelope(model)
    span = t[-1] - t[0]
    scale = max(np.ptp(y), np.max(np.abs(y)), 1e-300)

    def residual(p):
        amp, log_tau, off = p
        return (amp * env(t, math.exp(min(max(log_tau, -700.0), 700.0))) + off - y) / scale

    starts = [
        np.array([y[0] - y[-1], math.log(tau0), y[-1]])
        for tau0 in np.geomspace(span / 100.0, 10.0 * span, N_TAU_SEEDS)
    ]
    best, failures = _best_fit(residual, starts)
    if best is None:
        raise FitError("decay fit failed from every start", {"failures": failures})
    amp, log_tau, off = best.x
    tau = math.exp(min(max(log_tau, -700.0), 700.0))
    rss = float(np.sum((best.fun * scale) ** 2))
    cov = _covariance(best.jac * scale, rss, len(t))
    degenerate = abs(amp) <= 1e-9 * scale or tau > 1e3 * span or not math.isfinite(tau)
    errors = {
        "amplitude": math.sqrt(cov[0, 0]),
        "tau": tau * math.sqrt(cov[1, 1]) if math.isfinite(cov[1, 1]) else math.inf,
        "offset": math.sqrt(cov[2, 2]),
    }
    if degenerate:
        errors["tau"] = math.inf
    return FitResult(
        model=model,
        params={"amplitude": float(amp), "tau": tau, "offset": float(off)},
        errors=errors,
        rss=rss,
        criterion=_criterion(rss, len(t), 3),
        n_points=len(t),
        degenerate=degenerate,
        diagnostics={"nfev": int(best.nfev), "status": int(best.status)},
    )


def _spectral_peak(t, y):
    detrended = y - np.polyval(np.polyfit(t, y, 1), t)
    if np.ptp(detrended) <= 1e-9 * max(1.0, float(np.max(np.abs(y)))):
        detrended = np.zeros_like(detrended)  # rounding residue only
    span = t[-1] - t[0]
    nyquist = 0.5 / np.min(np.diff(t))
    freqs = np.linspace(0.5 / span, nyquist, 16 * len(t))
    amps = np.exp(-2j * np.pi * np.outer(freqs, t)) @ detrended
    power = np.abs(amps) ** 2
    i = int(np.argmax(power))
    floor = float(np.median(power))
    return freqs[i], float(np.angle(amps[i])), float(power[i]), floor


def fit_ramsey(t, y) -> FitResult:
    """Fit damped fringes ``A exp(-t/T2) cos(2 pi f t + phi) + c``."""
    t, y = _prepare(t, y, MIN_RAMSEY_POINTS)
    f0, phi0, peak, floor = _spectral_peak(t, y)
    if not peak > 0 or peak < 10.0 * floor:
        raise FitError("no spectral peak above the noise floor", {"peak": peak, "floor": floor})
    span = t[-1] - t[0]
    scale = max(np.ptp(y), 1e-300)
    # work in units of the span so the frequency parameter is O(1)
    ts = (t - t[0]) / span

    def model(p, tt):
        amp, log_tau, fs, phi, off = p
        return amp * np.exp(-tt / math.exp(min(max(log_tau, -700.0), 700.0))) * np.cos(2 * np.pi * fs * tt + phi) + off

    def residual(p):
        return (model(p, ts) - y) / scale

    phase_at_t0 = phi0 + 2 * np.pi * f0 * t[0]
    starts = [
        np.array([0.5 * np.ptp(y), math.log(tau0 / span), f0 * span, phase_at_t0, float(np.mean(y))])
        for tau0 in np.geomspace(span / 100.0, 10.0 * span, N_TAU_SEEDS)
    ]
    best, failures = _best_fit(residual, starts)
    if best is None:
        raise FitError("Ramsey fit failed from every start", {"failures": failures})
    amp, log_tau, fs, phi, off = best.x
    if amp < 0:
        amp, phi = -amp, phi + np.pi
    if fs < 0:
        fs, phi = -fs, -phi
    freq = fs / span
    tau = math.exp(min(max(log_tau, -700.0), 700.0)) * span
    phi = phi - 2 * np.pi * freq * t[0]
    phi = float((phi + np.pi) % (2 * np.pi) - np.pi)
    rss = float(np.sum((best.fun * scale) ** 2))
    cov = _covariance(best.jac * scale, rss, len(t))
    sd = np.sqrt(np.abs(np.diag(cov)))
    return FitResult(
        model="ramsey",
        params={"amplitude": float(amp), "t2": tau, "frequency": float(freq), "phase": phi, "offset": float(off)},
        errors={
            "amplitude": float(sd[0]),
            "t2": float(tau * sd[1]),
            "frequency": float(sd[2] / span),
            "phase": float(sd[3]),
            "offset": float(sd[4]),
        },
        rss=rss,
        criterion=_criterion(rss, len(t), 5),
        n_points=len(t),
        diagnostics={"seed_frequency": float(f0), "nfev": int(best.nfev)},
    )


class EnvelopeVerdict(NamedTuple):
    label: str  # "exponential", "gaussian" or "undecided"
    confidence: float
    delta: float  # criterion(exponential) - criterion(gaussian)
    exponential: Optional[FitResult]
    gaussian: Optional[FitResult]


def discriminate_envelope(t, y, threshold: float = IC_THRESHOLD) -> EnvelopeVerdict:
    """Pick the decay shape with the lower information criterion.

    Both models have three parameters, so the comparison reduces to residuals.
    Differences below ``threshold`` and traces too short to fit are undecided.
    """
    if len(t) < MIN_DECAY_POINTS:
        return EnvelopeVerdict("undecided", 0.0, 0.0, None, None)
    try:
        fe = fit_decay(t, y, "exponential")
        fg = fit_decay(t, y, "gaussian")
    except FitError:
        return EnvelopeVerdict("undecided", 0.0, 0.0, None, None)
    delta = fe.criterion - fg.criterion
    confidence = 1.0 / (1.0 + math.exp(-0.5 * min(abs(delta), 1400.0)))
    if abs(delta) < threshold:
        return EnvelopeVerdict("undecided", confidence, delta, fe, fg)
    label = "gaussian" if delta > 0 else "exponential"
    return EnvelopeVerdict(label, confidence, delta, fe, fg)


class GapFit(NamedTuple):
    delta_uev: float
    gamma0: float
    sigma_delta: float
    sigma_gamma0: float
    rss: float


def fit_gap(temperatures_k, t1_values, f01_ghz: float) -> GapFit:
    """Fit ``T1(T) = 1 / (Gamma0 + Gamma_qp(T; Delta))`` in log space.

    ``t1_values`` in seconds. The gap is seeded from a grid over 100-400 ueV and
    then refined jointly with the base rate.
    """
    temps = np.asarray(temperatures_k, dtype=float)
    t1 = np.asarray(t1_values, dtype=float)
    if temps.shape != t1.shape or len(temps) < 6:
        raise InvalidParameterError("need at least 6 (temperature, T1) points")
    if np.any(t1 <= 0) or np.any(temps <= 0):
        raise InvalidParameterError("temperatures and T1 values must be positive")
    log_t1 = np.log(t1)

    def residual(p):
        gap, log_g0 = p
        gap = max(gap, 1.0)
        rate = math.exp(log_g0) + thermal_xqp(gap, temps) * rate_per_xqp(gap, f01_ghz)
        return -np.log(rate) - log_t1

    order = np.argsort(temps)
    g0_seed = math.log(1.0 / np.median(t1[order][: max(2, len(t1) // 3)]))
    grid = np.linspace(100.0, 400.0, 61)
    costs = [np.sum(residual((g, g0_seed)) ** 2) for g in grid]
    start = np.array([grid[int(np.argmin(costs))], g0_seed])
    best, failures = _best_fit(residual, [start])
    if best is None:
        raise FitError("gap fit failed", {"failures": failures})
    gap, log_g0 = best.x
    rss = float(np.sum(best.fun ** 2))
    cov = _covariance(best.jac, rss, len(temps))
    sigma_gap = math.sqrt(cov[0, 0]) if math.isfinite(cov[0, 0]) else math.inf
    if not math.isfinite(sigma_gap) or sigma_gap > 0.5 * abs(gap):
        raise IllConditionedError(
            "no thermal activation visible: the gap is not constrained by the data",
            {"gap": float(gap), "sigma_gap": sigma_gap},
        )
    g0 = math.exp(log_g0)
    return GapFit(
        delta_uev=float(gap),
        gamma0=g0,
        sigma_delta=sigma_gap,
        sigma_gamma0=g0 * math.sqrt(cov[1, 1]),
        rss=rss,
    )


def synthetic_t1_curve(model: QuasiparticleModel, f01_ghz, temperatures_k, noise_frac=0.0, seed=0):
    """T1 values (s) from the quasiparticle model with multiplicative Gaussian noise."""
    t1 = np.asarray(model.t1(f01_ghz, np.asarray(temperatures_k, dtype=float)), dtype=float)
    if noise_frac:
        rng = np.random.default_rng(seed)
        t1 = t1 * (1.0 + noise_frac * rng.standard_normal(t1.shape))
    return t1


class Jump(NamedTuple):
    index: int
    time_h: float
    size_hz: float


@dataclass
class StabilityTrace:
    times_h: np.ndarray
    offsets_hz: np.ndarray
    jumps: list = field(default_factory=list)
    drift_hz: Optional[float] = None

    def __post_init__(self):
        self.times_h = np.asarray(self.times_h, dtype=float)
        self.offsets_hz = np.asarray(self.offsets_hz, dtype=float)
        if self.times_h.shape != self.offsets_hz.shape:
            raise InvalidParameterError("times and offsets must have equal length")
        if np.any(np.diff(self.times_h) <= 0):
            raise InvalidParameterError("trace times must be strictly ascending")


def synthetic_stability_trace(
    hours: float = 23.0,
    n_samples: int = 1380,
    rms_hz: float = 600.0,
    steps: Sequence[tuple] = (),
    telegraph: Optional[Telegraph] = None,
    seed: int = 0,
) -> StabilityTrace:
    """White frequency scatter plus permanent steps ``(time_h, size_hz)`` and optional telegraph switching."""
    rng = np.random.default_rng(seed)
    times = np.linspace(0.0, hours, n_samples)
    offsets = rms_hz * rng.standard_normal(n_samples)
    for when, size in steps:
        offsets[times >= when] += size
    if telegraph is not None:
        offsets += telegraph_trace(telegraph, times * 3600.0, rng)
    return StabilityTrace(times, offsets)


def _window_stats(y: np.ndarray, window: int):
    """Means and variances of the windows ending / starting at each boundary."""
    c1 = np.concatenate([[0.0], np.cumsum(y)])
    c2 = np.concatenate([[0.0], np.cumsum(y * y)])
    idx = np.arange(window, len(y) - window + 1)

    def stats(lo, hi):
        s1 = c1[hi] - c1[lo]
        s2 = c2[hi] - c2[lo]
        mean = s1 / window
        var = np.maximum(s2 - s1 * mean, 0.0) / (window - 1)
        return mean, var

    left = stats(idx - window, idx)
    right = stats(idx, idx + window)
    return idx, left, right


def detect_jumps(trace: StabilityTrace, window: int = 15, threshold_sigma: float = 4.0) -> StabilityTrace:
    """Moving-window mean-shift detector.

    A boundary is a candidate when the means of the adjacent windows differ by
    more than ``threshold_sigma`` pooled per-sample standard deviations. Runs of
    neighbouring candidates collapse to their strongest member. Drift is the
    largest peak-to-peak excursion of the window-averaged trace within a
    jump-free segment.
    """
    y = trace.offsets_hz - np.mean(trace.offsets_hz)
    n = len(y)
    if window < 2 or n < 3 * window:
        raise InvalidParameterError(f"need at least 3*window = {3 * window} samples, got {n}")
    idx, (ml, vl), (mr, vr) = _window_stats(y, window)
    diff = mr - ml
    pooled = np.sqrt(0.5 * (vl + vr))
    scale = max(float(np.max(np.abs(y))), 1.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        stat = np.where(pooled > 1e-12 * scale, np.abs(diff) / pooled, np.where(np.abs(diff) > 1e-9 * scale, np.inf, 0.0))
    candidates = stat > threshold_sigma
    jumps = []
    i = 0
    while i < len(idx):
        if not candidates[i]:
            i += 1
            continue
        j = i
        while j + 1 < len(idx) and candidates[j + 1]:
            j += 1
        k = i + int(np.argmax(stat[i : j + 1]))
        jumps.append(Jump(int(idx[k]), float(trace.times_h[idx[k]]), float(diff[k])))
        i = j + 1

    bounds = [0] + [jp.index for jp in jumps] + [n]
    drift = 0.0
    for lo, hi in zip(bounds[:-1], bounds[1:]):
        seg = trace.offsets_hz[lo:hi]
        if len(seg) >= window:
            smooth = np.convolve(seg, np.ones(window) / window, mode="valid")
            drift = max(drift, float(np.ptp(smooth)))
        elif len(seg):
            drift = max(drift, 0.0)
    return StabilityTrace(trace.times_h, trace.offsets_hz, jumps, drift)
