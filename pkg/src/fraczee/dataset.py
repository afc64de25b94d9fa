"""Built-in hadron table and CSV/JSON ingestion of user spectra.

The built-in table lists 53 states with proposed (L, M) quantum numbers
and experimental masses in MeV.  The five L in {1, 2} rows are mesons
kept for comparison against baryon-mass predictions; Omega_cc and
Omega_ccc carry masses quoted from an external model prediction and are
tagged ``theoretical``.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

__all__ = [
    "GROUPS",
    "DatasetError",
    "ParticleRecord",
    "builtin_table",
    "load_records",
    "records_to_csv",
    "records_to_json",
]

GROUPS = ("meson", "baryon", "theoretical")

_CSV_COLUMNS = ("name", "L", "M", "mass_mev", "status", "group")


class DatasetError(ValueError):
    pass


@dataclass(frozen=True)
class ParticleRecord:
    name: str
    L: int
    M: int
    mass_mev: float
    status: str
    group: str

    def __post_init__(self):
        if not self.name:
            raise DatasetError("empty particle name")
        if self.L < 0 or self.M < 0 or self.M > self.L:
            raise DatasetError(
                f"{self.name}: need 0 <= M <= L, got L={self.L}, M={self.M}"
            )
        if not self.mass_mev > 0.0:
            raise DatasetError(f"{self.name}: nonpositive mass {self.mass_mev}")
        if self.group not in GROUPS:
            raise DatasetError(f"{self.name}: unknown group {self.group!r}")


# name, L, M, mass [MeV], status, group
_TABLE = (
    ("pi0", 1, 0, 135, "", "meson"),
    ("K0s", 1, 1, 498, "", "meson"),
    ("rho(770)", 2, 0, 776, "", "meson"),
    ("K*(892)0", 2, 1, 896, "", "meson"),
    ("phi(1020)", 2, 2, 1019, "", "meson"),
    ("N", 3, 0, 938, "", "baryon"),
    ("Lambda", 3, 1, 1116, "", "baryon"),
    ("Sigma0", 3, 2, 1193, "", "baryon"),
    ("Xi0", 3, 3, 1315, "", "baryon"),
    ("Delta(1232)", 4, 0, 1232, "", "baryon"),
    ("Sigma0(1385)", 4, 1, 1384, "", "baryon"),
    ("Xi(1530)", 4, 2, 1532, "", "baryon"),
    ("Omega-", 4, 3, 1672, "", "baryon"),
    ("Lambda(1800)", 4, 4, 1775, "", "baryon"),
    ("Lambda(1520)", 5, 0, 1520, "", "baryon"),
    ("Lambda(1670)", 5, 1, 1670, "", "baryon"),
    ("Xi(1820)", 5, 2, 1823, "", "baryon"),
    ("Delta(1910)", 5, 3, 1910, "", "baryon"),
    ("Sigma(2030)", 5, 4, 2030, "", "baryon"),
    ("Lambda(2100)", 5, 5, 2100, "", "baryon"),
    ("Sigma(1750)", 6, 0, 1750, "", "baryon"),
    ("Sigma(1915)", 6, 1, 1915, "", "baryon"),
    ("Xi(2030)", 6, 2, 2025, "", "baryon"),
    ("Delta(2150)", 6, 3, 2150, "*", "baryon"),
    ("Omega(2250)", 6, 4, 2252, "", "baryon"),
    ("Omega(2380)", 6, 5, 2380, "**", "baryon"),
    ("Sigma_c(2452)", 6, 6, 2452, "", "baryon"),
    ("Xi(1950)", 7, 0, 1950, "", "baryon"),
    ("Lambda(2110)", 7, 1, 2110, "", "baryon"),
    ("Lambda_c", 7, 2, 2286, "", "baryon"),
    ("Delta(2420)", 7, 3, 2420, "", "baryon"),
    ("Xi_c+(2467)", 7, 4, 2467, "", "baryon"),
    ("Xi_c'+(2575)", 7, 5, 2576, "", "baryon"),
    ("Xi_c0(2645)", 7, 6, 2645, "", "baryon"),
    ("Xi_c0(2790)", 7, 7, 2791, "", "baryon"),
    ("N(2190)", 8, 0, 2190, "", "baryon"),
    ("Lambda(2350)", 8, 1, 2350, "", "baryon"),
    ("Xi_c0(2471)", 8, 2, 2471, "", "baryon"),
    ("Lambda_c+(2593)", 8, 3, 2595, "", "baryon"),
    ("Omega_c0", 8, 4, 2698, "", "baryon"),
    ("Sigma_c0(2800)", 8, 5, 2800, "", "baryon"),
    ("Lambda_c+(2880)", 8, 6, 2882, "***", "baryon"),
    ("Xi(2980)", 8, 7, 2978, "***", "baryon"),
    ("Xi_c(3080)", 8, 8, 3076, "***", "baryon"),
    ("Omega-(2380)", 9, 0, 2380, "**", "baryon"),
    ("Sigma_c(2520)", 9, 1, 2518, "***", "baryon"),
    ("Sigma_c(2645)", 9, 2, 2646, "***", "baryon"),
    ("Lambda_c(2880)", 9, 4, 2882, "***", "baryon"),
    ("Sigma(3170)", 9, 7, 3170, "*", "baryon"),
    ("Xi_cc+", 10, 9, 3519, "*", "baryon"),
    ("Omega_cc", 11, 8, 3637, "th", "theoretical"),
    ("Omega_ccc", 15, 15, 4681, "th", "theoretical"),
    ("Lambda_b0", 20, 20, 5620, "***", "baryon"),
)


def builtin_table() -> list[ParticleRecord]:
    """All 53 built-in records, in table order."""
    return [ParticleRecord(*row) for row in _TABLE]


def _validate(records: Iterable[ParticleRecord]) -> list[ParticleRecord]:
    out: list[ParticleRecord] = []
    seen: set[str] = set()
    for r in records:
        if r.name in seen:
            raise DatasetError(f"duplicate particle name {r.name!r}")
        seen.add(r.name)
        out.append(r)
    return out


def _record_from_mapping(obj: dict, where: str) -> ParticleRecord:
    try:
        return ParticleRecord(
            name=str(obj["name"]),
            L=int(obj["L"]),
            M=int(obj["M"]),
            mass_mev=float(obj["mass_mev"]),
            status=str(obj.get("status", "")),
            group=str(obj["group"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, DatasetError):
            raise
        raise DatasetError(f"{where}: {exc}") from exc


def load_records(path: str | Path, format: str | None = None) -> list[ParticleRecord]:
    """Load particle records from CSV (with header) or a JSON array.

    The format is inferred from the suffix unless given explicitly.
    Duplicate names and invariant violations (M > L, nonpositive mass)
    are rejected with the offending line identified.
    """
    p = Path(path)
    fmt = format or ("json" if p.suffix.lower() == ".json" else "csv")
    text = p.read_text()
    if fmt == "json":
        if not text.strip():
            return []
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise DatasetError(f"{p}: invalid JSON: {exc}") from exc
        if not isinstance(data, list):
            raise DatasetError(f"{p}: expected a JSON array of records")
        return _validate(
            _record_from_mapping(obj, f"{p} entry {i}") for i, obj in enumerate(data)
        )
    if fmt != "csv":
        raise ValueError(f"unknown format {fmt!r} (expected 'csv' or 'json')")
    if not text.strip():
        return []
    reader = csv.DictReader(io.StringIO(text))
    missing = set(_CSV_COLUMNS) - set(reader.fieldnames or ())
    if missing:
        raise DatasetError(f"{p}: missing CSV columns {sorted(missing)}")
    records = []
    for i, row in enumerate(reader, start=2):
        records.append(_record_from_mapping(row, f"{p} line {i}"))
    return _validate(records)


def records_to_csv(records: Iterable[ParticleRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(_CSV_COLUMNS)
    for r in records:
        w.writerow([r.name, r.L, r.M, f"{r.mass_mev:g}", r.status, r.group])
    return buf.getvalue()


def records_to_json(records: Iterable[ParticleRecord]) -> str:
    rows = [
        {
            "name": r.name,
            "L": r.L,
            "M": r.M,
            "mass_mev": r.mass_mev,
            "status": r.status,
            "group": r.group,
        }
        for r in records
    ]
    return json.dumps(rows, indent=2) + "\n"
