"""Experiment configuration files.

Grammar (standard INI as read by ``configparser``; ``#`` and ``;`` start comments)::

    [experiment]
    protocol = ramsey          # any CLI subcommand name
    device = J1                # id from the device catalog
    seed = 0
    out = out/ramsey           # output path prefix, "-" for stdout
    format = csv               # csv | json
    detuning_hz = 0
    artificial_phase_rate = 1.5708e6   # rad/s
    n_shots = 0                # 0 = analytic noise multiplier
    pulse_ns = 0               # 0 = ideal rotations
    gamma1 = 16666.7           # 1/s; defaults to 1/t1 of the device

    [noise]
    model = white:gamma_phi=4.72e4     # same syntax as --noise

    [grid]
    start_us = 0
    stop_us = 40
    points = 81

Every key is optional. Unknown sections or keys are rejected so typos surface.
"""
from __future__ import annotations

import configparser
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Optional

import numpy as np

from .errors import ParseError, ValidationError

_KNOWN = {
    "experiment": {
        "protocol", "device", "seed", "out", "format", "detuning_hz",
        "artificial_phase_rate", "n_shots", "pulse_ns", "gamma1",
    },
    "noise": {"model"},
    "grid": {"start_us", "stop_us", "points"},
}


@dataclass
class ExperimentConfig:
    protocol: Optional[str] = None
    device: Optional[str] = None
    seed: Optional[int] = None
    out: Optional[str] = None
    format: Optional[str] = None
    detuning_hz: Optional[float] = None
    artificial_phase_rate: Optional[float] = None
    n_shots: Optional[int] = None
    pulse_ns: Optional[float] = None
    gamma1: Optional[float] = None
    noise: Optional[str] = None
    start_us: Optional[float] = None
    stop_us: Optional[float] = None
    points: Optional[int] = None
    extra: dict = field(default_factory=dict)

    def delays_s(self, start_us=0.0, stop_us=40.0, points=81) -> np.ndarray:
        lo = self.start_us if self.start_us is not None else start_us
        hi = self.stop_us if self.stop_us is not None else stop_us
        n = self.points if self.points is not None else points
        if n < 1:
            raise ValidationError("delay grid must be non-empty")
        if n > 1 and not hi > lo:
            raise ValidationError("delay grid stop must exceed start")
        if lo < 0:
            raise ValidationError("delays must be non-negative")
        return np.linspace(lo, hi, n) * 1e-6


_INTS = {"seed", "n_shots", "points"}
_STRS = {"protocol", "device", "out", "format"}


def load_config(path) -> ExperimentConfig:
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"), interpolation=None)
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read config {path}: {exc.strerror}") from exc
    try:
        parser.read_string(text, source=str(path))
    except configparser.Error as exc:
        raise ParseError(f"malformed config: {exc}", line=getattr(exc, "lineno", None)) from None
    cfg = ExperimentConfig()
    names = {f.name for f in fields(cfg)}
    for section in parser.sections():
        if section not in _KNOWN:
            raise ParseError(f"unknown config section [{section}]")
        for key, raw in parser.items(section):
            if key not in _KNOWN[section]:
                raise ParseError(f"unknown key {key!r} in [{section}]", column=key)
            target = "noise" if (section, key) == ("noise", "model") else key
            assert target in names
            try:
                if target in _INTS:
                    value = int(raw)
                elif target in _STRS or target == "noise":
                    value = raw.strip()
                else:
                    value = float(raw)
            except ValueError:
                raise ParseError(f"bad value {raw!r} for {key}", column=key) from None
            setattr(cfg, target, value)
    return cfg
