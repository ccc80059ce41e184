"""Margins, verdicts and the per-point derivative bundle shared by the criteria."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..energies import EXP_LIMIT, PrincipalFunction
from ..tensor import PrincipalState

REL_TOL = 1e-9

PASS, FAIL, BOUNDARY = "pass", "fail", "boundary"


@dataclass(frozen=True)
class Margin:
    """One inequality, positive when satisfied.

    ``value`` and ``tol`` share the report's exp(-log_scale) units; ``tol`` is
    REL_TOL times the largest term entering the inequality.
    """

    name: str
    value: float
    tol: float

    @property
    def status(self) -> str:
        if self.value < -self.tol:
            return FAIL
        if self.value <= self.tol:
            return BOUNDARY
        return PASS


def margin(name: str, value: float, terms: Sequence[float]) -> Margin:
    mags = [abs(t) for t in terms if math.isfinite(t)]
    return Margin(name, float(value), REL_TOL * (max(mags) if mags else 0.0))


_RANK = {PASS: 0, BOUNDARY: 1, FAIL: 2}


def either(name: str, first: Margin, second: Margin) -> Margin:
    """Disjunction: keep whichever alternative has the better status."""
    best = first if _RANK[first.status] <= _RANK[second.status] else second
    return Margin(name, best.value, best.tol)


def combine(statuses) -> str:
    worst = PASS
    for s in statuses:
        if _RANK[s] > _RANK[worst]:
            worst = s
    return worst


@dataclass
class CriterionReport:
    criterion: str
    point: object
    margins: List[Margin]
    log_scale: float = 0.0
    detail: Dict[str, object] = field(default_factory=dict)
    sampled: bool = False

    @property
    def verdict(self) -> str:
        return combine(m.status for m in self.margins)

    @property
    def label(self) -> str:
        v = self.verdict
        return f"{v} (sampled)" if self.sampled and v == PASS else v

    def margin(self, name: str) -> Margin:
        for m in self.margins:
            if m.name == name:
                return m
        raise KeyError(name)

    def raw(self, value: float) -> float:
        """Undo the common positive factor; inf when not representable."""
        if value == 0.0:
            return 0.0
        if self.log_scale > EXP_LIMIT:
            return math.copysign(math.inf, value)
        return value * math.exp(self.log_scale)

    @property
    def min_margin(self) -> Margin:
        return min(self.margins, key=lambda m: m.value)

    def failing(self) -> List[Margin]:
        return [m for m in self.margins if m.status == FAIL]

    def to_dict(self) -> dict:
        pt = self.point
        if isinstance(pt, PrincipalState):
            pt = list(pt.stretches)
        elif isinstance(pt, np.ndarray):
            pt = pt.tolist()
        return {
            "criterion": self.criterion,
            "point": pt,
            "verdict": self.verdict,
            "sampled": self.sampled,
            "log_scale": self.log_scale,
            "margins": {m.name: m.value for m in self.margins},
            "tolerances": {m.name: m.tol for m in self.margins},
        }


@dataclass(frozen=True)
class PointDerivs:
    """Scaled first and second partials of g at one stretch point.

    ``phi1``/``phi2`` are the log-stretch derivatives of Phi(x) = g(e^x),
    ``g1``/``g2`` the stretch derivatives; ``g2mag`` bounds |g2| term-wise.
    Everything carries the common factor exp(-scale).
    """

    lam: np.ndarray
    x: np.ndarray
    scale: float
    phi1: np.ndarray
    phi2: np.ndarray
    g1: np.ndarray
    g2: np.ndarray
    g2mag: np.ndarray
    equal: np.ndarray  # coincidence flags, equal[i, j]

    @classmethod
    def at(cls, g: PrincipalFunction, p: PrincipalState) -> "PointDerivs":
        lam = p.array
        x = np.log(lam)
        d = g.log_derivs(x)
        ll = np.outer(lam, lam)
        g1 = d.grad / lam
        g2 = (d.hess - np.diag(d.grad)) / ll
        g2mag = (np.abs(d.hess) + np.diag(np.abs(d.grad))) / ll
        n = len(lam)
        eq = np.array([[i == j or p.coincident(i, j) for j in range(n)] for i in range(n)])
        return cls(lam, x, d.scale, d.grad, d.hess, g1, g2, g2mag, eq)

    @property
    def n(self) -> int:
        return len(self.lam)

    def sqrt_prod(self, i: int, j: int) -> float:
        return math.sqrt(max(self.g2[i, i] * self.g2[j, j], 0.0))

    def sqrt_mag(self, i: int, j: int) -> float:
        return math.sqrt(self.g2mag[i, i] * self.g2mag[j, j])
