"""Stretch-space domain scans of a pointwise criterion.

The grid lives in log-stretch space. Chunks of consecutive points go to
independent worker processes and come back in grid order, so the result
does not depend on the worker count.
"""

from __future__ import annotations

import csv
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np

from ..energies import EnergySpec
from ..errors import InvalidInputError
from ..tensor import PrincipalState, dev_norm_sq_from_log
from .criteria import (
    check_BE,
    check_buliga,
    check_dacorogna_3d,
    check_KS_2d,
    check_TE,
    check_zubov_incompressible,
)
from .report import FAIL, PASS

CRITERIA = {
    "KS2D": check_KS_2d,
    "Dacorogna3D": check_dacorogna_3d,
    "ZubovIncompressible": check_zubov_incompressible,
    "Buliga": check_buliga,
    "SC/TE": check_TE,
    "BE": check_BE,
}
ALIASES = {"ks2d": "KS2D", "dacorogna": "Dacorogna3D", "zubov": "ZubovIncompressible",
           "buliga": "Buliga", "te": "SC/TE", "sc": "SC/TE", "be": "BE"}


def criterion_name(name: str) -> str:
    if name in CRITERIA:
        return name
    key = ALIASES.get(name.lower())
    if key is None:
        raise InvalidInputError(f"unknown criterion {name!r}; choose from {sorted(CRITERIA)}")
    return key


@dataclass(frozen=True)
class LogGrid:
    """Lattice of n points per axis on [lo, hi]^dim in log-stretch space.

    ``dev_bound`` keeps only points with ||dev_n x||^2 <= dev_bound.
    ``jitter`` (in cell widths) perturbs each lattice point by a seeded
    uniform offset. ``incompressible`` removes the mean so that
    l1 l2 l3 = 1 exactly in log space.
    """

    dim: int = 3
    lo: float = -2.0
    hi: float = 2.0
    n: int = 20
    dev_bound: Optional[float] = None
    jitter: float = 0.0
    seed: int = 42
    incompressible: bool = False

    def points(self) -> np.ndarray:
        if self.n < 1 or not self.hi >= self.lo:
            raise InvalidInputError("grid needs n >= 1 and hi >= lo")
        axis = np.linspace(self.lo, self.hi, self.n)
        mesh = np.stack(np.meshgrid(*([axis] * self.dim), indexing="ij"), axis=-1)
        pts = mesh.reshape(-1, self.dim)
        if self.jitter:
            h = (self.hi - self.lo) / max(self.n - 1, 1)
            rng = np.random.default_rng(self.seed)
            pts = pts + self.jitter * h * rng.uniform(-0.5, 0.5, size=pts.shape)
        if self.incompressible:
            pts = pts - pts.mean(axis=1, keepdims=True)
        if self.dev_bound is not None:
            keep = np.array([dev_norm_sq_from_log(p) <= self.dev_bound for p in pts])
            pts = pts[keep]
        return pts


@dataclass(frozen=True)
class PointRecord:
    log_stretches: tuple
    verdict: str
    dev_sq: float
    margins: Dict[str, float]


@dataclass
class ScanSummary:
    count: int
    passed: int
    boundary: int
    failed: int
    pass_fraction: float
    failing: List[tuple]
    # largest ||dev_3 log U||^2 level whose sublevel set on the grid has no fail
    dev_bound: float
    bound_is_limit: bool  # False when nothing failed (bound is just the grid extent)


@dataclass
class ScanResult:
    criterion: str
    model: str
    grid: LogGrid
    reports: List[PointRecord]
    summary: ScanSummary

    def verdicts(self) -> List[str]:
        return [r.verdict for r in self.reports]

    def margin_names(self) -> List[str]:
        names: List[str] = []
        seen = set()
        for r in self.reports:
            for k in r.margins:
                if k not in seen:
                    seen.add(k)
                    names.append(k)
        return names

    def to_csv(self, path) -> None:
        names = self.margin_names()
        d = self.grid.dim
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow([f"lambda{i + 1}" for i in range(d)] + names + ["verdict"])
            for r in self.reports:
                lam = [repr(math.exp(x)) for x in r.log_stretches]
                ms = [repr(r.margins[n]) if n in r.margins else "" for n in names]
                w.writerow(lam + ms + [r.verdict])

    def summary_dict(self) -> dict:
        out = {"criterion": self.criterion, "model": self.model, "grid": asdict(self.grid)}
        out.update(asdict(self.summary))
        out["failing"] = [list(p) for p in self.summary.failing]
        return out

    def to_json(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.summary_dict(), fh, indent=2)


def _record(check, spec, x) -> PointRecord:
    rep = check(PrincipalState.from_log(x), spec)
    return PointRecord(
        tuple(float(v) for v in x),
        rep.verdict,
        dev_norm_sq_from_log(x),
        {m.name: m.value for m in rep.margins},
    )


def _run_chunk(args):
    name, spec, pts = args
    check = CRITERIA[name]
    return [_record(check, spec, x) for x in pts]


def worker_count(workers: Optional[int] = None) -> int:
    env = os.environ.get("HF_WORKERS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise InvalidInputError(f"HF_WORKERS must be an integer, got {env!r}")
    return max(1, workers or 1)


def summarize(records: Sequence[PointRecord]) -> ScanSummary:
    n = len(records)
    passed = sum(r.verdict == PASS for r in records)
    failed = [r for r in records if r.verdict == FAIL]
    boundary = n - passed - len(failed)
    if failed:
        level = min(r.dev_sq for r in failed)
        below = [r.dev_sq for r in records if r.dev_sq < level]
        bound = max(below) if below else 0.0
        limited = True
    else:
        bound = max((r.dev_sq for r in records), default=0.0)
        limited = False
    return ScanSummary(
        n,
        passed,
        boundary,
        len(failed),
        (n - len(failed)) / n if n else 1.0,
        [r.log_stretches for r in failed],
        bound,
        limited,
    )


def scan_domain(criterion: str, spec: EnergySpec, grid: LogGrid, workers: Optional[int] = None,
                points: Optional[np.ndarray] = None) -> ScanResult:
    """Evaluate ``criterion`` at every grid point (or at explicit log points)."""
    name = criterion_name(criterion)
    pts = grid.points() if points is None else np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != spec.dim:
        raise InvalidInputError(f"points must have shape (N, {spec.dim})")
    nw = worker_count(workers)
    if nw == 1 or len(pts) < 2 * nw:
        records = _run_chunk((name, spec, pts))
    else:
        chunks = np.array_split(pts, nw * 4)
        with ProcessPoolExecutor(max_workers=nw) as ex:
            parts = list(ex.map(_run_chunk, [(name, spec, c) for c in chunks if len(c)]))
        records = [r for part in parts for r in part]
    return ScanResult(name, spec.model, grid, records, summarize(records))
