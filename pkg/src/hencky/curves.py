"""Plot-ready curve data for the standard loadings."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .energies import MaterialParams
from .errors import InvalidInputError
from .convexity.monotonicity import tsts_bounded_distortion_feasibility
from .inversion import nonlinear_poisson
from .io import write_csv
from .stress import (
    eos_pressure,
    nominal_stress_uniaxial_1d,
    simple_shear_sigma12,
)

CURVES = (
    "uniaxial-nominal",
    "kirchhoff-vs-logstrain",
    "shear-sigma12",
    "eos-pressure",
    "poisson-hat",
    "tsts-feasibility",
)

DEFAULT_RANGES = {
    "uniaxial-nominal": (0.1, 10.0),
    "kirchhoff-vs-logstrain": (-2.0, 2.0),
    "shear-sigma12": (0.0, 3.0),
    "eos-pressure": (0.2, 10.0),
    "poisson-hat": (0.0, 2.0),
    "tsts-feasibility": (0.01, 1.0),
}

DEFAULT_NUS = (0.0, 1.0 / 3.0, 0.5)


@dataclass(frozen=True)
class Curve:
    curve_id: str
    header: List[str]
    rows: np.ndarray

    def column(self, name: str) -> np.ndarray:
        return self.rows[:, self.header.index(name)]

    def write(self, path_or_file) -> None:
        write_csv(path_or_file, self.header, self.rows)


def _nu_label(nu: float) -> str:
    return format(nu, ".6g")


def emit_curve(
    curve_id: str,
    p: MaterialParams,
    xrange: Optional[Tuple[float, float]] = None,
    resolution: int = 101,
    nus: Sequence[float] = DEFAULT_NUS,
) -> Curve:
    """Sample one curve on ``resolution`` evenly spaced abscissae.

    Stresses are in Pa when ``p.mu``/``p.kappa`` are; ``poisson-hat``
    uses ``p.k``, ``p.khat`` and one column per entry of ``nus``.
    """
    if curve_id not in CURVES:
        raise InvalidInputError(f"unknown curve {curve_id!r}; choose from {CURVES}")
    if resolution < 2:
        raise InvalidInputError("resolution must be >= 2")
    lo, hi = DEFAULT_RANGES[curve_id] if xrange is None else xrange
    xs = np.linspace(float(lo), float(hi), int(resolution))
    if curve_id == "uniaxial-nominal":
        header = ["lambda [dimensionless]", "nominal_stress_eH [Pa]"]
        rows = [(x, nominal_stress_uniaxial_1d(x, p.mu, p.k)) for x in xs]
    elif curve_id == "kirchhoff-vs-logstrain":
        header = ["log_strain [dimensionless]", "kirchhoff_eH [Pa]", "kirchhoff_H [Pa]"]
        rows = [(x, 2.0 * p.mu * math.exp(p.k * x * x) * x, 2.0 * p.mu * x) for x in xs]
    elif curve_id == "shear-sigma12":
        header = ["gamma [dimensionless]", "sigma12_eH [Pa]", "sigma12_H [Pa]", "sigma12_linear [Pa]"]
        rows = [
            (g, simple_shear_sigma12(g, p, "eH"), simple_shear_sigma12(g, p, "H"),
             simple_shear_sigma12(g, p, "linear"))
            for g in xs
        ]
    elif curve_id == "eos-pressure":
        header = ["J [dimensionless]", "pressure_eH [Pa]", "pressure_H [Pa]"]
        rows = [(J, eos_pressure(J, p, "eH"), eos_pressure(J, p, "H")) for J in xs]
    elif curve_id == "poisson-hat":
        header = ["s_over_E [dimensionless]"] + [f"nu_hat[nu={_nu_label(n)}] [dimensionless]" for n in nus]
        rows = [(s,) + tuple(nonlinear_poisson(s, n, p.k, p.khat) for n in nus) for s in xs]
    else:
        header = [
            "sigma_tilde_y [dimensionless]",
            "k_lo_fixed_khat [dimensionless]",
            "k_hi_fixed_khat [dimensionless]",
            "k_lo_sharp [dimensionless]",
            "k_hi_sharp [dimensionless]",
        ]
        rows = []
        for s in xs:
            a = tsts_bounded_distortion_feasibility(p, s) if p.khat > 0.125 else None
            b = tsts_bounded_distortion_feasibility(p, s, three_parameter=True)
            rows.append(
                (s,)
                + ((a.lo, a.hi) if a else (math.nan, math.nan))
                + ((b.lo, b.hi) if b else (math.nan, math.nan))
            )
    return Curve(curve_id, header, np.array(rows, dtype=float))
