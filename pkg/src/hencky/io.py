"""Tab-separated data input and lossless CSV output."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .errors import InvalidInputError, ParseError, UnitError

KINDS = ("shear", "uniaxial", "eos")

# factor to SI; stresses end up in Pa
UNITS = {
    "dimensionless": (None, 1.0),
    "-": (None, 1.0),
    "Pa": ("stress", 1.0),
    "kPa": ("stress", 1e3),
    "MPa": ("stress", 1e6),
    "MN/m2": ("stress", 1e6),
    "MN/m^2": ("stress", 1e6),
    "MN/m²": ("stress", 1e6),
    "GPa": ("stress", 1e9),
    "kgf/cm2": ("stress", 98066.5),
    "kg/cm2": ("stress", 98066.5),
}


def unit_factor(unit: str, expect: Optional[str]) -> float:
    """SI factor of ``unit``; ``expect`` is None for dimensionless or 'stress'."""
    if unit not in UNITS:
        raise UnitError(f"unknown unit {unit!r}; known: {sorted(UNITS)}")
    dim, f = UNITS[unit]
    if dim != expect:
        want = "a stress unit" if expect == "stress" else "dimensionless"
        raise UnitError(f"unit {unit!r} does not match the column, expected {want}")
    return f


def parse_units(spec) -> Tuple[str, str]:
    """'dimensionless,MN/m2' or a 2-tuple."""
    if spec is None:
        raise UnitError("units must be declared explicitly (abscissa, ordinate)")
    if isinstance(spec, str):
        parts = [s.strip() for s in spec.split(",")]
    else:
        parts = list(spec)
    if len(parts) != 2:
        raise UnitError(f"need two units (abscissa, ordinate), got {spec!r}")
    return parts[0], parts[1]


@dataclass(frozen=True)
class DataSeries:
    """Abscissa (dimensionless) and ordinate (Pa) of one experiment, sorted."""

    kind: str
    abscissa: np.ndarray
    ordinate: np.ndarray
    units: Tuple[str, str] = ("dimensionless", "Pa")
    weights: Optional[np.ndarray] = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidInputError(f"kind must be one of {KINDS}, got {self.kind!r}")
        x = np.asarray(self.abscissa, dtype=float)
        y = np.asarray(self.ordinate, dtype=float)
        if x.shape != y.shape or x.ndim != 1 or len(x) < 2:
            raise InvalidInputError("abscissa and ordinate need equal length >= 2")
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
            raise InvalidInputError("data must be finite")
        order = np.argsort(x, kind="stable")
        x, y = x[order], y[order]
        if np.any(np.diff(x) <= 0):
            raise InvalidInputError("abscissa values must be distinct")
        if self.kind in ("uniaxial", "eos") and x[0] <= 0:
            raise InvalidInputError(f"{self.kind} abscissa must be positive, got {x[0]}")
        w = self.weights
        if w is not None:
            w = np.asarray(w, dtype=float)[order]
            if w.shape != x.shape or np.any(w < 0):
                raise InvalidInputError("weights must be nonnegative, one per point")
        object.__setattr__(self, "abscissa", x)
        object.__setattr__(self, "ordinate", y)
        object.__setattr__(self, "weights", w)

    def __len__(self) -> int:
        return len(self.abscissa)


def load_tsv(path, kind: str, units) -> DataSeries:
    """Two (or three, with weights) tab-separated numeric columns; '#' lines are comments."""
    ua, uo = parse_units(units)
    fa = unit_factor(ua, None)
    fo = unit_factor(uo, "stress")
    xs, ys, ws = [], [], []
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            cols = line.split("\t") if "\t" in line else line.split()
            if len(cols) not in (2, 3):
                raise ParseError(f"expected 2 or 3 columns, got {len(cols)}", line=lineno)
            try:
                vals = [float(c) for c in cols]
            except ValueError:
                bad = next(c for c in cols if not _is_float(c))
                raise ParseError(f"non-numeric token {bad!r}", line=lineno) from None
            if not all(math.isfinite(v) for v in vals):
                raise ParseError("non-finite value", line=lineno)
            if kind in ("eos", "uniaxial") and vals[0] <= 0:
                raise ParseError(f"{kind} abscissa must be positive, got {vals[0]}", line=lineno)
            xs.append(vals[0] * fa)
            ys.append(vals[1] * fo)
            ws.append(vals[2] if len(vals) == 3 else None)
    if len(xs) < 2:
        raise InvalidInputError(f"{path}: need at least 2 data rows, got {len(xs)}")
    weights = None
    if any(w is not None for w in ws):
        if any(w is None for w in ws):
            raise ParseError("weights column present on some rows only")
        weights = np.array(ws)
    return DataSeries(kind, np.array(xs), np.array(ys), ("dimensionless", "Pa"), weights)


def _is_float(s: str) -> bool:
    try:
        float(s)
        return True
    except ValueError:
        return False


# ---------------------------------------------------------------------------


def fmt(v: float) -> str:
    """17 significant digits: exact double round trip."""
    return format(float(v), ".17g")


def write_csv(path_or_file, header: Sequence[str], rows) -> None:
    def _write(fh):
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow([fmt(v) for v in r])

    if hasattr(path_or_file, "write"):
        _write(path_or_file)
    else:
        with open(path_or_file, "w", newline="") as fh:
            _write(fh)


def read_csv(path) -> Tuple[List[str], np.ndarray]:
    with open(path, newline="") as fh:
        rd = csv.reader(fh)
        header = next(rd)
        rows = [[float(v) for v in r] for r in rd if r]
    return header, np.array(rows, dtype=float).reshape(len(rows), len(header))
