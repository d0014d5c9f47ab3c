"""CSV schemas and deterministic JSON serialization.

Life-data CSV: columns `time`, `status` (failed/censored) and one column
per condition variable, headers carrying unit suffixes (temp_C,
voltstress_V_per_mm, rh_frac).  Degradation CSV: `unit`, `time`,
`response` plus condition columns constant within each unit.  Spectral
CSV: `wavelength_nm` plus `irradiance` and/or `absorbance`.  Moisture
CSV: `rh`, `moisture_content`.

JSON reports print floats with 17 significant digits (lossless round
trip); CSV tables default to 6.  Serialization is hand-rolled so the byte
output is fully determined by the report contents.
"""

from __future__ import annotations

import csv
import json
import math
from typing import IO, Iterable, Mapping, Sequence

import numpy as np

from .data import STATUSES, LifeRecord
from .degradation import DegradationSample
from .errors import DataError
from .photodeg import MoistureTable

JSON_SIG_DIGITS = 17
TABLE_SIG_DIGITS = 6


def _open_rows(path_or_file) -> tuple[csv.DictReader, IO | None]:
    if hasattr(path_or_file, "read"):
        return csv.DictReader(path_or_file), None
    fh = open(path_or_file, newline="")
    return csv.DictReader(fh), fh


def _parse_float(text: str, what: str) -> float:
    try:
        return float(text)
    except (TypeError, ValueError):
        raise DataError(f"{what}: expected a number, got {text!r}")


def read_life_csv(path_or_file) -> list[LifeRecord]:
    """Read life records; every non-time/status column becomes a condition
    variable."""
    reader, fh = _open_rows(path_or_file)
    try:
        header = reader.fieldnames
        if not header:
            raise DataError("empty CSV: no header row")
        if "time" not in header or "status" not in header:
            raise DataError("life-data CSV needs 'time' and 'status' columns")
        cond_cols = [c for c in header if c not in ("time", "status")]
        records = []
        for i, row in enumerate(reader, start=2):
            status = (row["status"] or "").strip()
            if status not in STATUSES:
                raise DataError(
                    f"line {i}: status must be one of {STATUSES}, got {status!r}"
                )
            condition = {c: _parse_float(row[c], f"line {i}, column {c}") for c in cond_cols}
            records.append(
                LifeRecord(_parse_float(row["time"], f"line {i}, column time"),
                           status, condition)
            )
        return records
    finally:
        if fh is not None:
            fh.close()


def write_life_csv(records: Sequence[LifeRecord], out: IO) -> None:
    """Write records with shortest lossless floats so round trips refit
    identically."""
    cond_cols = sorted({k for r in records for k in r.condition})
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["time", "status", *cond_cols])
    for r in records:
        missing = [c for c in cond_cols if c not in r.condition]
        if missing:
            raise DataError(f"record lacks condition column(s) {missing}")
        writer.writerow(
            [repr(float(r.time)), r.status,
             *(repr(float(r.condition[c])) for c in cond_cols)]
        )


def read_degradation_csv(path_or_file) -> list[DegradationSample]:
    """Read per-unit degradation paths grouped by the `unit` column."""
    reader, fh = _open_rows(path_or_file)
    try:
        header = reader.fieldnames
        if not header:
            raise DataError("empty CSV: no header row")
        for col in ("unit", "time", "response"):
            if col not in header:
                raise DataError("degradation CSV needs 'unit', 'time' and 'response'")
        cond_cols = [c for c in header if c not in ("unit", "time", "response")]
        order: list[str] = []
        times: dict[str, list[float]] = {}
        resps: dict[str, list[float]] = {}
        conds: dict[str, dict[str, float]] = {}
        for i, row in enumerate(reader, start=2):
            unit = (row["unit"] or "").strip()
            if not unit:
                raise DataError(f"line {i}: empty unit id")
            cond = {c: _parse_float(row[c], f"line {i}, column {c}") for c in cond_cols}
            if unit not in times:
                order.append(unit)
                times[unit], resps[unit], conds[unit] = [], [], cond
            elif cond != conds[unit]:
                raise DataError(f"line {i}: unit {unit!r} changes condition mid-path")
            times[unit].append(_parse_float(row["time"], f"line {i}, column time"))
            resps[unit].append(_parse_float(row["response"], f"line {i}, column response"))
        return [DegradationSample(u, times[u], resps[u], conds[u]) for u in order]
    finally:
        if fh is not None:
            fh.close()


def read_spectral_csv(path_or_file) -> tuple[np.ndarray, dict[str, np.ndarray]]:
    """Read a spectrum: wavelengths plus any of irradiance/absorbance columns."""
    reader, fh = _open_rows(path_or_file)
    try:
        header = reader.fieldnames
        if not header or "wavelength_nm" not in header:
            raise DataError("spectral CSV needs a 'wavelength_nm' column")
        value_cols = [c for c in header if c != "wavelength_nm"]
        if not value_cols:
            raise DataError("spectral CSV needs at least one value column")
        wavelengths = []
        values: dict[str, list[float]] = {c: [] for c in value_cols}
        for i, row in enumerate(reader, start=2):
            wavelengths.append(
                _parse_float(row["wavelength_nm"], f"line {i}, column wavelength_nm")
            )
            for c in value_cols:
                values[c].append(_parse_float(row[c], f"line {i}, column {c}"))
        if len(wavelengths) < 2:
            raise DataError("spectral CSV needs at least 2 rows")
        return np.array(wavelengths), {c: np.array(v) for c, v in values.items()}
    finally:
        if fh is not None:
            fh.close()


def read_mc_csv(path_or_file) -> MoistureTable:
    """Read a moisture-content table over relative humidity."""
    reader, fh = _open_rows(path_or_file)
    try:
        header = reader.fieldnames
        if not header or "rh" not in header or "moisture_content" not in header:
            raise DataError("moisture CSV needs 'rh' and 'moisture_content' columns")
        rh, mc = [], []
        for i, row in enumerate(reader, start=2):
            rh.append(_parse_float(row["rh"], f"line {i}, column rh"))
            mc.append(_parse_float(row["moisture_content"], f"line {i}, column moisture_content"))
        return MoistureTable(rh, mc)
    finally:
        if fh is not None:
            fh.close()


def format_float(x: float, sig: int = JSON_SIG_DIGITS) -> str:
    """Shortest fixed-significance decimal; non-finite values print as nan/inf."""
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(x, f".{sig}g")


def _json_fragment(obj, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1))
    close_pad = " " * (indent * level)
    if obj is None:
        return "null"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        # JSON has no NaN/Infinity literals; report them as null.
        x = float(obj)
        if not math.isfinite(x):
            return "null"
        return format_float(x)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, np.ndarray):
        obj = obj.tolist()
    if isinstance(obj, Mapping):
        if not obj:
            return "{}"
        items = [
            f"{pad}{json.dumps(str(k))}: {_json_fragment(v, indent, level + 1)}"
            for k, v in obj.items()
        ]
        return "{\n" + ",\n".join(items) + "\n" + close_pad + "}"
    if isinstance(obj, Iterable):
        seq = list(obj)
        if not seq:
            return "[]"
        items = [f"{pad}{_json_fragment(v, indent, level + 1)}" for v in seq]
        return "[\n" + ",\n".join(items) + "\n" + close_pad + "]"
    raise DataError(f"cannot serialize {type(obj).__name__} to JSON")


def dump_json(obj, indent: int = 2) -> str:
    """Deterministic JSON: insertion-keyed objects, 17-significant-digit
    floats, newline-terminated."""
    return _json_fragment(obj, indent, 0) + "\n"
