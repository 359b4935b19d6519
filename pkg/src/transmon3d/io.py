"""Table output with provenance sidecars, and table input for the fitter."""
from __future__ import annotations

import csv
import hashlib
import io as _io
import json
import math
import sys
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import ParseError

SIG_DIGITS = 9


def fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return str(int(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.{SIG_DIGITS}g}"
    return str(value)


def _json_value(value):
    if isinstance(value, Mapping):
        return {str(k): _json_value(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, np.ndarray)):
        return [_json_value(v) for v in value]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        v = float(value)
        if not math.isfinite(v):
            return None if math.isnan(v) else ("inf" if v > 0 else "-inf")
        return float(f"{v:.{SIG_DIGITS}g}")
    return value


def dumps(obj) -> str:
    return json.dumps(_json_value(obj), indent=2, sort_keys=True) + "\n"


def config_hash(parameters: Mapping) -> str:
    canonical = json.dumps(_json_value(parameters), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()


def render_table(columns: Sequence[str], rows: Iterable[Sequence], fmt_name: str = "csv") -> str:
    rows = [list(r) for r in rows]
    if fmt_name == "json":
        return dumps({"columns": list(columns), "rows": rows})
    buf = _io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for r in rows:
        writer.writerow([fmt(v) for v in r])
    return buf.getvalue()


def write_outputs(out: str, columns, rows, fmt_name: str, sidecar: Mapping) -> list[Path]:
    """Write the table (and, for file output, a ``.meta.json`` sidecar)."""
    text = render_table(columns, rows, fmt_name)
    if out == "-":
        sys.stdout.write(text)
        return []
    base = Path(out)
    if base.suffix in (".csv", ".json"):
        base = base.with_suffix("")
    base.parent.mkdir(parents=True, exist_ok=True)
    data_path = base.with_name(base.name + (".json" if fmt_name == "json" else ".csv"))
    meta_path = base.with_name(base.name + ".meta.json")
    data_path.write_text(text)
    meta_path.write_text(dumps(sidecar))
    return [data_path, meta_path]


def read_table(path, required: Sequence[str]) -> dict:
    """Read numeric columns from a CSV with a header row."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from exc
    rows = list(csv.reader(text.splitlines()))
    if not rows:
        raise ParseError(f"{path} is empty", line=1)
    header = [h.strip() for h in rows[0]]
    missing = [c for c in required if c not in header]
    if missing:
        raise ParseError(f"missing column(s) {', '.join(missing)}", line=1)
    cols = {c: [] for c in header}
    for lineno, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        if len(row) != len(header):
            raise ParseError(f"expected {len(header)} fields, got {len(row)}", line=lineno)
        for name, raw in zip(header, row):
            try:
                cols[name].append(float(raw))
            except ValueError:
                raise ParseError(f"not a number: {raw!r}", line=lineno, column=name) from None
    return {c: np.asarray(cols[c]) for c in required}
