"""Command-line front end.

Each subcommand writes a table (CSV or JSON) plus a ``.meta.json`` sidecar with
the code version, a hash of the resolved parameters and the seed. Exit codes:
0 ok, 2 usage, 3 parse, 4 validation, 5 numeric failure.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from typing import Optional

import numpy as np

from . import __version__
from . import catalog as cat
from .cavity import CavityMode, DispersiveSystem, dressed_spectrum, power_scan, purcell_rate, transmon_chi_factor
from .config import ExperimentConfig, load_config
from .dynamics import simulate_echo, simulate_ramsey, simulate_t1, single_shot_readout
from .errors import FitError, InvalidParameterError, TransmonError, ValidationError
from .fitting import (
    StabilityTrace, detect_jumps, discriminate_envelope, fit_decay, fit_gap, fit_ramsey,
    synthetic_stability_trace,
)
from .io import config_hash, dumps, read_table, write_outputs
from .noise import CoherenceRecord, Telegraph, White, noise_to_dict, parse_noise
from .quasiparticles import QuasiparticleModel, t1_vs_temperature, thermal_xqp, xqp_bound
from .spectrum import (
    TransmonParams, approx_f01, charge_dispersion, cutoff_convergence, eigenlevels,
)

EXIT_OK, EXIT_USAGE = 0, 2
COMMANDS = (
    "spectrum", "dispersive", "powerscan", "t1", "ramsey", "echo",
    "tempsweep", "readout", "stability", "fit", "validate",
)
DEFAULT_DEVICE = "J1"


class Context:
    """Resolved inputs: CLI flag, then config file, then built-in default."""

    def __init__(self, args, cfg: ExperimentConfig):
        self.args = args
        self.cfg = cfg
        self._records = None

    def pick(self, name, default=None, cfg_name=None):
        value = getattr(self.args, name, None)
        if value is not None:
            return value
        value = getattr(self.cfg, cfg_name or name, None)
        return default if value is None else value

    @property
    def records(self):
        if self._records is None:
            self._records = cat.load_catalog(self.args.catalog)
        return self._records

    def device(self, required=True) -> Optional[cat.DeviceRecord]:
        name = self.pick("device")
        if name is None:
            if not required:
                return None
            name = DEFAULT_DEVICE
        return cat.find_device(self.records, name)

    @property
    def seed(self) -> int:
        return int(self.pick("seed", 0))

    def noise(self, default=None):
        text = self.pick("noise")
        return parse_noise(text) if text is not None else default

    def grid(self, start_us, stop_us, points):
        arg = getattr(self.args, "delays_us", None)
        if arg is not None:
            lo, hi, n = arg
            return ExperimentConfig(start_us=lo, stop_us=hi, points=int(n)).delays_s()
        return self.cfg.delays_s(start_us, stop_us, points)


def _device_noise(dev: cat.DeviceRecord):
    rec = CoherenceRecord(dev.t1_us, dev.t2_us, dev.techo_us, dev.f01_ghz)
    return White.from_gamma_phi(rec.gamma_phi)


def _noise_meta(noise):
    return noise_to_dict(noise) if noise is not None else {"kind": "none"}


# -- subcommands: each returns (columns, rows, parameters, summary) -----------

def cmd_spectrum(ctx: Context):
    a = ctx.args
    dev = ctx.device(required=a.ej is None or a.ec is None)
    ej = a.ej if a.ej is not None else dev.ej_ghz
    ec = a.ec if a.ec is not None else dev.ec_ghz
    params = TransmonParams(ej, ec, a.n_offset, a.cutoff)
    spec = eigenlevels(params, a.levels)
    rows = [(k, lvl, lvl - spec.levels[0]) for k, lvl in enumerate(spec.levels)]
    summary = {
        "f01_ghz": spec.f01,
        "f12_ghz": spec.f12,
        "alpha_mhz": spec.anharmonicity * 1e3,
        "approx_f01_ghz": approx_f01(ej, ec) if ec > 0 and ej / ec > 20 else None,
        "charge_dispersion_hz": charge_dispersion(params),
        "cutoff_convergence_hz": cutoff_convergence(params),
    }
    if dev is not None and a.ej is None and a.ec is None:
        dressed = dressed_spectrum(params, dev.g_mhz, dev.fc_ghz)
        summary["dressed_f01_ghz"] = dressed.f01
        summary["catalog_f01_ghz"] = dev.f01_ghz
    parameters = {"ej": ej, "ec": ec, "n_offset": a.n_offset, "cutoff": a.cutoff, "levels": a.levels,
                  "device": dev.id if dev else None}
    return ("level", "energy_ghz", "excitation_ghz"), rows, parameters, summary


def cmd_dispersive(ctx: Context):
    dev = ctx.device(required=False)
    devices = [dev] if dev is not None else ctx.records
    rows = []
    for d in devices:
        system = DispersiveSystem(d.f01_ghz, CavityMode(d.fc_ghz, d.qc), d.g_mhz)
        spec = eigenlevels(d.params, 3)
        factor = transmon_chi_factor(spec.anharmonicity, system.detuning_ghz)
        dressed = dressed_spectrum(d.params, d.g_mhz, d.fc_ghz)
        purcell = purcell_rate([(d.g_mhz, d.fc_ghz, system.mode.kappa_mhz)], d.f01_ghz)
        rows.append((
            d.id, d.f01_ghz, d.fc_ghz, d.g_mhz, system.detuning_ghz * 1e3, system.chi_mhz, d.chi_mhz,
            system.chi_mhz * abs(factor), (dressed.cavity_ghz - d.fc_ghz) * 1e3,
            system.mode.kappa_mhz, system.critical_photon_number, purcell.t1_us,
        ))
    columns = ("id", "f01_ghz", "fc_ghz", "g_mhz", "detuning_mhz", "chi_mhz", "chi_catalog_mhz",
               "chi_multilevel_mhz", "cavity_shift_dressed_mhz", "kappa_mhz", "n_crit", "purcell_t1_us")
    return columns, rows, {"devices": [d.id for d in devices]}, {}


def cmd_powerscan(ctx: Context):
    a = ctx.args
    dev = ctx.device()
    system = DispersiveSystem(dev.f01_ghz, CavityMode(dev.fc_ghz, dev.qc), dev.g_mhz)
    alpha = eigenlevels(dev.params, 3).anharmonicity
    chi = system.g_mhz ** 2 / ((dev.fc_ghz - dev.f01_ghz) * 1e3)
    if a.span_mhz is None:
        # bare and pulled resonances with a quarter-chi margin either side
        lo_mhz, hi_mhz = min(0.0, chi) - 0.25 * abs(chi), max(0.0, chi) + 0.25 * abs(chi)
    else:
        lo_mhz, hi_mhz = -0.5 * a.span_mhz, 0.5 * a.span_mhz
    freqs = dev.fc_ghz + np.linspace(lo_mhz, hi_mhz, a.n_freqs) * 1e-3
    powers = np.logspace(math.log10(a.power_min), math.log10(a.power_max), a.n_powers)
    scan = power_scan(system, alpha, freqs, powers, multilevel=a.multilevel)
    rows = list(scan.rows())
    peaks = scan.peak_freqs_ghz
    summary = {
        "chi_mhz": scan.chi_mhz,
        "n_crit": scan.n_crit,
        "low_power_peak_offset_mhz": (peaks[0] - dev.fc_ghz) * 1e3,
        "high_power_peak_offset_mhz": (peaks[-1] - dev.fc_ghz) * 1e3,
        "kappa_mhz": system.mode.kappa_mhz,
        "unresolved_points": int(scan.flagged.sum()),
    }
    parameters = {"device": dev.id, "power_min": a.power_min, "power_max": a.power_max,
                  "n_powers": a.n_powers, "n_freqs": a.n_freqs, "span_mhz": a.span_mhz,
                  "multilevel": a.multilevel}
    return ("freq_ghz", "power_photons", "transmission"), rows, parameters, summary


def _gamma1(ctx: Context, dev):
    g1 = ctx.pick("gamma1")
    return float(g1) if g1 is not None else 1e6 / dev.t1_us


def _try_fit(summary, fn, *args):
    # simulated data is still written when the grid cannot support a fit
    try:
        return fn(*args)
    except (InvalidParameterError, FitError) as exc:
        summary["fit_error"] = str(exc)
        return None


def cmd_t1(ctx: Context):
    dev = ctx.device()
    gamma1 = _gamma1(ctx, dev)
    pulse_ns = float(ctx.pick("pulse_ns", 0.0))
    delays = ctx.grid(0.0, 5.0 * dev.t1_us, 101)
    res = simulate_t1(gamma1, delays, pulse_ns=pulse_ns, levels=ctx.args.levels)
    rows = list(zip(res.delays * 1e6, res.population))
    parameters = {"device": dev.id, "gamma1": gamma1, "pulse_ns": pulse_ns, "levels": ctx.args.levels,
                  "delays_us": [delays[0] * 1e6, delays[-1] * 1e6, len(delays)]}
    summary = {"t1_expected_us": 1e6 / gamma1 if gamma1 > 0 else math.inf}
    fit = _try_fit(summary, fit_decay, res.delays, res.population, "exponential")
    if fit is not None:
        summary.update(t1_fit_us=fit.params["tau"] * 1e6, t1_fit_err_us=fit.errors["tau"] * 1e6)
    return ("delay_us", "population"), rows, parameters, summary


def _coherence_common(ctx: Context):
    dev = ctx.device()
    gamma1 = _gamma1(ctx, dev)
    noise = ctx.noise(_device_noise(dev))
    n_shots = int(ctx.pick("n_shots", 0))
    pulse_ns = float(ctx.pick("pulse_ns", 0.0))
    return dev, gamma1, noise, n_shots, pulse_ns


def _result_rows(res):
    if res.stderr is not None and np.any(res.stderr > 0):
        return ("delay_us", "population", "stderr"), list(zip(res.delays * 1e6, res.population, res.stderr))
    return ("delay_us", "population"), list(zip(res.delays * 1e6, res.population))


def cmd_ramsey(ctx: Context):
    dev, gamma1, noise, n_shots, pulse_ns = _coherence_common(ctx)
    detuning = float(ctx.pick("detuning_hz", 0.0))
    rate = float(ctx.pick("phase_rate", 2.0 * math.pi * 0.25e6, cfg_name="artificial_phase_rate"))
    delays = ctx.grid(0.0, 60.0, 301)
    res = simulate_ramsey(gamma1, noise, detuning, rate, delays, n_shots=n_shots, seed=ctx.seed, pulse_ns=pulse_ns)
    columns, rows = _result_rows(res)
    parameters = {"device": dev.id, "gamma1": gamma1, "noise": _noise_meta(noise), "n_shots": n_shots,
                  "pulse_ns": pulse_ns, "detuning_hz": detuning, "artificial_phase_rate": rate,
                  "delays_us": [delays[0] * 1e6, delays[-1] * 1e6, len(delays)], "seed": ctx.seed}
    summary = {"frequency_expected_hz": detuning + rate / (2.0 * math.pi)}
    fit = _try_fit(summary, fit_ramsey, res.delays, res.population)
    if fit is not None:
        summary.update(t2_fit_us=fit.params["t2"] * 1e6, t2_fit_err_us=fit.errors["t2"] * 1e6,
                       frequency_fit_hz=fit.params["frequency"])
    if isinstance(noise, White):
        summary["t2_expected_us"] = 1e6 / (0.5 * gamma1 + noise.gamma_phi)
    return columns, rows, parameters, summary


def cmd_echo(ctx: Context):
    dev, gamma1, noise, n_shots, pulse_ns = _coherence_common(ctx)
    delays = ctx.grid(0.0, 100.0, 101)
    res = simulate_echo(gamma1, noise, delays, n_shots=n_shots, seed=ctx.seed, pulse_ns=pulse_ns)
    columns, rows = _result_rows(res)
    parameters = {"device": dev.id, "gamma1": gamma1, "noise": _noise_meta(noise), "n_shots": n_shots,
                  "pulse_ns": pulse_ns, "delays_us": [delays[0] * 1e6, delays[-1] * 1e6, len(delays)],
                  "seed": ctx.seed}
    verdict = discriminate_envelope(res.delays, res.population)
    summary = {"envelope": verdict.label, "envelope_confidence": verdict.confidence}
    fit = _try_fit(summary, fit_decay, res.delays, res.population, "exponential")
    if fit is not None:
        summary.update(techo_fit_us=fit.params["tau"] * 1e6, techo_fit_err_us=fit.errors["tau"] * 1e6)
    return columns, rows, parameters, summary


def cmd_tempsweep(ctx: Context):
    a = ctx.args
    dev = ctx.device()
    model = QuasiparticleModel(a.gap, 1e6 / dev.t1_us)
    temps = np.linspace(a.t_min_mk, a.t_max_mk, a.points) * 1e-3
    sweep = t1_vs_temperature(model, dev.f01_ghz, temps)
    x = thermal_xqp(model.gap_delta, temps)
    rows = list(zip(temps * 1e3, sweep.t1_s * 1e6, sweep.qp_rate, sweep.df01_hz, x))
    bound = xqp_bound(dev.t1_us * 1e-6, model.gap_delta, dev.f01_ghz)
    summary = {"crossover_mk": sweep.crossover_k * 1e3, "xqp_bound": bound.x_qp,
               "nqp_bound_per_um3": bound.n_qp_per_um3}
    parameters = {"device": dev.id, "gap_uev": a.gap, "base_rate": model.base_rate,
                  "t_min_mk": a.t_min_mk, "t_max_mk": a.t_max_mk, "points": a.points}
    return ("temperature_mk", "t1_us", "qp_rate", "df01_hz", "x_qp"), rows, parameters, summary


def cmd_readout(ctx: Context):
    a = ctx.args
    dev = ctx.device()
    chi = a.chi_mhz if a.chi_mhz is not None else dev.chi_mhz
    kappa = a.kappa_mhz if a.kappa_mhz is not None else dev.kappa_mhz
    res = single_shot_readout(chi, kappa, a.n_bar, a.t_int_us, dev.t1_us, a.shots, seed=ctx.seed)
    rows = [(0, z.real, z.imag) for z in res.iq_ground] + [(1, z.real, z.imag) for z in res.iq_excited]
    parameters = {"device": dev.id, "chi_mhz": chi, "kappa_mhz": kappa, "n_bar": a.n_bar,
                  "t_int_us": a.t_int_us, "t1_us": dev.t1_us, "shots": a.shots, "seed": ctx.seed}
    summary = {"fidelity": res.fidelity, "p0_given_1": res.p0_given_1, "p1_given_0": res.p1_given_0}
    return ("prepared", "i", "q"), rows, parameters, summary


def _parse_step(text):
    try:
        when, size = text.split(":")
        return float(when), float(size)
    except ValueError:
        raise argparse.ArgumentTypeError(f"step must be TIME_H:SIZE_HZ, got {text!r}") from None


def cmd_stability(ctx: Context):
    a = ctx.args
    noise = ctx.noise()
    if noise is not None and not isinstance(noise, Telegraph):
        raise InvalidParameterError("stability traces accept only telegraph noise")
    if a.input:
        cols = read_table(a.input, ("time_h", "offset_hz"))
        trace = StabilityTrace(cols["time_h"], cols["offset_hz"])
        source = {"input": str(a.input)}
    else:
        trace = synthetic_stability_trace(a.hours, a.samples, a.rms_hz, a.step or (), noise, seed=ctx.seed)
        source = {"hours": a.hours, "samples": a.samples, "rms_hz": a.rms_hz,
                  "steps": [list(s) for s in (a.step or ())], "noise": _noise_meta(noise), "seed": ctx.seed}
    out = detect_jumps(trace, a.window, a.threshold)
    rows = list(zip(out.times_h, out.offsets_hz))
    summary = {"jumps": [{"time_h": j.time_h, "size_hz": j.size_hz} for j in out.jumps],
               "drift_hz": out.drift_hz}
    parameters = dict(source, window=a.window, threshold_sigma=a.threshold)
    return ("time_h", "offset_hz"), rows, parameters, summary


def cmd_fit(ctx: Context):
    a = ctx.args
    if a.model == "gap":
        dev = ctx.device()
        cols = read_table(a.input, ("temperature_mk", "t1_us"))
        g = fit_gap(cols["temperature_mk"] * 1e-3, cols["t1_us"] * 1e-6, dev.f01_ghz)
        rows = [("delta_uev", g.delta_uev, g.sigma_delta), ("gamma0", g.gamma0, g.sigma_gamma0)]
        return ("parameter", "value", "error"), rows, {"input": str(a.input), "model": "gap", "device": dev.id}, \
            {"rss": g.rss}
    cols = read_table(a.input, (a.x_column, a.y_column))
    t = cols[a.x_column] * (1e-6 if a.x_column.endswith("_us") else 1.0)
    y = cols[a.y_column]
    summary = {}
    if a.model == "ramsey":
        fit = fit_ramsey(t, y)
    elif a.model == "auto":
        verdict = discriminate_envelope(t, y)
        summary.update(envelope=verdict.label, confidence=verdict.confidence, delta_criterion=verdict.delta)
        fit = fit_decay(t, y, "gaussian" if verdict.label == "gaussian" else "exponential")
    else:
        fit = fit_decay(t, y, a.model)
    rows = [(k, v, fit.errors.get(k, math.nan)) for k, v in fit.params.items()]
    summary.update(model=fit.model, rss=fit.rss, criterion=fit.criterion, degenerate=fit.degenerate,
                   params=fit.params, errors=fit.errors)
    parameters = {"input": str(a.input), "model": a.model, "x_column": a.x_column, "y_column": a.y_column}
    return ("parameter", "value", "error"), rows, parameters, summary


def cmd_validate(ctx: Context):
    records = ctx.records
    dev = ctx.pick("device")
    if dev is not None:
        records = [cat.find_device(records, dev)]
    report = cat.validate_catalog(records)
    rows = [tuple(r.values()) for r in report.rows()]
    columns = tuple(next(iter(report.rows())).keys())
    summary = {"ok": report.ok, "violations": {c.id: c.violations for c in report.checks if c.violations}}
    return columns, rows, {"devices": [r.id for r in records]}, summary


HANDLERS = {name: globals()[f"cmd_{name}"] for name in COMMANDS}


# -- argument parsing ----------------------------------------------------------

def _common_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("common options")
    g.add_argument("--device", help=f"device id from the catalog (default {DEFAULT_DEVICE})")
    g.add_argument("--catalog", help="device catalog CSV (default: $TRANSMON3D_CATALOG or the shipped table)")
    g.add_argument("--config", help="INI experiment configuration")
    g.add_argument("--seed", type=int, help="master seed (default 0)")
    g.add_argument("--out", help="output path prefix, '-' for stdout (default out/<command>)")
    g.add_argument("--format", choices=("csv", "json"), help="table format (default csv)")
    g.add_argument("--noise", help="noise model, e.g. white:gamma_phi=4.72e4 or ou:sigma=1e5,tau_c=1e-5")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common_parser()
    parser = argparse.ArgumentParser(prog="transmon3d", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    def add(name, help_text):
        return sub.add_parser(name, parents=[common], help=help_text, description=help_text)

    def grid(p):
        p.add_argument("--delays-us", nargs=3, type=float, metavar=("START", "STOP", "POINTS"),
                       help="delay grid in microseconds")

    def pulses(p):
        p.add_argument("--pulse-ns", type=float, help="finite square pulse length (0 = ideal)")
        p.add_argument("--gamma1", type=float, help="relaxation rate 1/s (default 1/t1 of the device)")

    p = add("spectrum", "transmon levels from charge-basis diagonalization")
    p.add_argument("--ej", type=float, help="E_J/h in GHz")
    p.add_argument("--ec", type=float, help="E_C/h in GHz")
    p.add_argument("--n-offset", type=float, default=0.0)
    p.add_argument("--cutoff", type=int, default=20)
    p.add_argument("--levels", type=int, default=5)

    add("dispersive", "dispersive shifts, dressed cavity pull and Purcell limit")

    p = add("powerscan", "cavity transmission versus drive frequency and power")
    p.add_argument("--power-min", type=float, default=1e-2, help="photons on resonance")
    p.add_argument("--power-max", type=float, default=1e9)
    p.add_argument("--n-powers", type=int, default=23)
    p.add_argument("--n-freqs", type=int, default=2001)
    p.add_argument("--span-mhz", type=float, help="frequency window centred on f_c")
    p.add_argument("--multilevel", action="store_true", help="use the transmon multilevel chi")

    p = add("t1", "relaxation experiment")
    grid(p)
    pulses(p)
    p.add_argument("--levels", type=int, default=2, choices=(2, 3))

    p = add("ramsey", "Ramsey fringes with an advancing second-pulse phase")
    grid(p)
    pulses(p)
    p.add_argument("--detuning-hz", type=float)
    p.add_argument("--phase-rate", type=float, help="artificial phase rate in rad/s (default 2pi*250 kHz)")
    p.add_argument("--n-shots", type=int, help="noise trajectories (0 = analytic multiplier)")

    p = add("echo", "Hahn echo decay")
    grid(p)
    pulses(p)
    p.add_argument("--n-shots", type=int, help="noise trajectories (0 = analytic multiplier)")

    p = add("tempsweep", "T1 and frequency shift versus temperature from thermal quasiparticles")
    p.add_argument("--gap", type=float, default=194.0, help="superconducting gap in ueV")
    p.add_argument("--t-min-mk", type=float, default=20.0)
    p.add_argument("--t-max-mk", type=float, default=300.0)
    p.add_argument("--points", type=int, default=57)

    p = add("readout", "Gaussian-cloud single-shot readout")
    p.add_argument("--chi-mhz", type=float)
    p.add_argument("--kappa-mhz", type=float)
    p.add_argument("--n-bar", type=float, default=5.0)
    p.add_argument("--t-int-us", type=float, default=1.0)
    p.add_argument("--shots", type=int, default=10000)

    p = add("stability", "jump and drift analysis of a frequency trace")
    p.add_argument("--input", help="CSV with time_h, offset_hz (default: synthetic trace)")
    p.add_argument("--hours", type=float, default=23.0)
    p.add_argument("--samples", type=int, default=1380)
    p.add_argument("--rms-hz", type=float, default=600.0)
    p.add_argument("--step", type=_parse_step, action="append", help="inject TIME_H:SIZE_HZ (repeatable)")
    p.add_argument("--window", type=int, default=15)
    p.add_argument("--threshold", type=float, default=4.0)

    p = add("fit", "fit a decay, fringe or gap model to tabulated data")
    p.add_argument("--input", required=True)
    p.add_argument("--model", choices=("exponential", "gaussian", "ramsey", "auto", "gap"), default="auto")
    p.add_argument("--x-column", default="delay_us")
    p.add_argument("--y-column", default="population")

    add("validate", "consistency report for the device catalog")

    p = sub.add_parser("run", parents=[common], help="run the protocol named in --config")
    return parser


def _parse(argv):
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = load_config(args.config) if args.config else ExperimentConfig()
    if args.command == "run":
        if not args.config:
            parser.error("run needs --config")
        if cfg.protocol not in COMMANDS:
            parser.error(f"unknown protocol {cfg.protocol!r} in config")
        defaults = parser.parse_args([cfg.protocol])
        for key, value in vars(args).items():
            if value is not None and key != "command":
                setattr(defaults, key, value)
        defaults.command = cfg.protocol
        args = defaults
    elif cfg.protocol is not None and cfg.protocol != args.command:
        parser.error(f"config protocol {cfg.protocol!r} does not match command {args.command!r}")
    return args, cfg


def main(argv=None) -> int:
    try:
        args, cfg = _parse(argv)
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else EXIT_USAGE
    except TransmonError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    ctx = Context(args, cfg)
    try:
        columns, rows, parameters, summary = HANDLERS[args.command](ctx)
    except TransmonError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    fmt_name = ctx.pick("format", "csv")
    out = ctx.pick("out", f"out/{args.command}")
    parameters = dict(parameters, command=args.command)
    sidecar = {
        "command": args.command,
        "code_version": __version__,
        "config_hash": config_hash(parameters),
        "seed": ctx.seed,
        "parameters": parameters,
        "summary": summary,
    }
    written = write_outputs(out, columns, rows, fmt_name, sidecar)
    if written:
        print(dumps({"summary": summary, "files": [str(p) for p in written]}), end="")
    if args.command == "validate" and not summary["ok"]:
        return ValidationError.exit_code
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
