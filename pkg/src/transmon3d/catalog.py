"""Device catalog: loading, schema checks and physical consistency report."""
from __future__ import annotations

import csv
import math
import os
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Optional

from .cavity import dressed_spectrum
from .errors import ParseError, ValidationError
from .spectrum import TransmonParams

CATALOG_ENV = "TRANSMON3D_CATALOG"
COLUMNS = (
    "id", "cavity", "f01_ghz", "ej_ghz", "ec_ghz", "g_mhz", "chi_mhz",
    "fc_ghz", "qc", "t1_us", "t2_us", "techo_us", "tgate_ns",
)
NUMERIC = COLUMNS[2:]
F01_TOL = 0.005
SHIFT_TOL = 0.02
T2_SLACK = 0.05  # fit tolerance on the T2 <= 2 T1 bound


@dataclass(frozen=True)
class DeviceRecord:
    id: str
    cavity: str
    f01_ghz: float
    ej_ghz: float
    ec_ghz: float
    g_mhz: float
    chi_mhz: float
    fc_ghz: float
    qc: float
    t1_us: float
    t2_us: float
    techo_us: float
    tgate_ns: float = 10.0

    def __post_init__(self):
        for name in NUMERIC:
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValidationError(f"{self.id}: {name} must be positive, got {value}")
        if self.t2_us > 2.0 * self.t1_us * (1.0 + T2_SLACK):
            raise ValidationError(f"{self.id}: t2 = {self.t2_us} us exceeds 2*t1 = {2 * self.t1_us} us")

    @property
    def params(self) -> TransmonParams:
        return TransmonParams(self.ej_ghz, self.ec_ghz)

    @property
    def kappa_mhz(self) -> float:
        return self.fc_ghz / self.qc * 1e3

    @property
    def omega01(self) -> float:
        return 2.0 * math.pi * 1e9 * self.f01_ghz


def default_catalog_path() -> Path:
    env = os.environ.get(CATALOG_ENV)
    if env:
        return Path(env)
    return Path(str(resources.files("transmon3d") / "data" / "devices.csv"))


def load_catalog(path: Optional[os.PathLike] = None) -> list[DeviceRecord]:
    path = Path(path) if path is not None else default_catalog_path()
    try:
        text = path.read_text()
    except OSError as exc:
        raise ParseError(f"cannot read catalog {path}: {exc.strerror}") from exc
    rows = list(csv.reader(text.splitlines()))
    if not rows:
        raise ParseError(f"catalog {path} is empty", line=1)
    header = [h.strip() for h in rows[0]]
    if tuple(header) != COLUMNS:
        raise ParseError(f"header must be {','.join(COLUMNS)}", line=1)
    records = []
    seen = set()
    for lineno, row in enumerate(rows[1:], start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != len(COLUMNS):
            raise ParseError(f"expected {len(COLUMNS)} fields, got {len(row)}", line=lineno)
        values = {"id": row[0].strip(), "cavity": row[1].strip()}
        for name, raw in zip(NUMERIC, row[2:]):
            try:
                values[name] = float(raw)
            except ValueError:
                raise ParseError(f"not a number: {raw.strip()!r}", line=lineno, column=name) from None
        if not values["id"]:
            raise ParseError("empty device id", line=lineno, column="id")
        if values["id"] in seen:
            raise ValidationError(f"duplicate device id {values['id']!r} on line {lineno}")
        seen.add(values["id"])
        records.append(DeviceRecord(**values))
    if not records:
        raise ParseError(f"catalog {path} has no records", line=len(rows) + 1)
    return records


def find_device(records: Iterable[DeviceRecord], device_id: str) -> DeviceRecord:
    for rec in records:
        if rec.id == device_id:
            return rec
    raise ValidationError(f"unknown device {device_id!r}")


@dataclass
class RecordCheck:
    id: str
    f01_dressed: float
    f01_bare: float
    f01_dev: float
    shift_mhz: float
    shift_dev: float
    q1: float
    q2: float
    error_rate: float
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


@dataclass
class ValidationReport:
    checks: list

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def rows(self):
        for c in self.checks:
            yield {
                "id": c.id,
                "f01_dressed_ghz": c.f01_dressed,
                "f01_bare_ghz": c.f01_bare,
                "f01_rel_dev": c.f01_dev,
                "shift_mhz": c.shift_mhz,
                "shift_rel_dev": c.shift_dev,
                "q1": c.q1,
                "q2": c.q2,
                "error_rate": c.error_rate,
                "ok": int(c.ok),
                "violations": ";".join(c.violations),
            }


def check_record(rec: DeviceRecord) -> RecordCheck:
    violations = []
    # the catalogued f01 is the cavity-dressed transition
    dressed = dressed_spectrum(rec.params, rec.g_mhz, rec.fc_ghz)
    f01_dev = dressed.f01 / rec.f01_ghz - 1.0
    if abs(f01_dev) > F01_TOL:
        violations.append(f"f01 off by {100 * f01_dev:+.2f}%")

    delta_mhz = abs(rec.f01_ghz - rec.fc_ghz) * 1e3
    if delta_mhz <= 1e-9:
        shift, shift_dev = math.inf, math.inf
        violations.append("qubit resonant with cavity: shift undefined")
    else:
        shift = rec.g_mhz ** 2 / delta_mhz
        shift_dev = shift / rec.chi_mhz - 1.0
        if abs(shift_dev) > SHIFT_TOL:
            violations.append(f"shift off by {100 * shift_dev:+.2f}%")

    return RecordCheck(
        id=rec.id,
        f01_dressed=dressed.f01,
        f01_bare=dressed.bare_f01,
        f01_dev=f01_dev,
        shift_mhz=shift,
        shift_dev=shift_dev,
        q1=rec.omega01 * rec.t1_us * 1e-6,
        q2=rec.omega01 * rec.t2_us * 1e-6,
        error_rate=rec.tgate_ns * 1e-3 / rec.t2_us,
        violations=violations,
    )


def validate_catalog(records: Iterable[DeviceRecord]) -> ValidationReport:
    records = list(records)
    if not records:
        raise ValidationError("catalog is empty")
    return ValidationReport([check_record(r) for r in records])
