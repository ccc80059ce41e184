"""Least-squares calibration of (mu, k) from shear data and (kappa, khat) from EOS data.

Both fits work in log-parameters, start from the best point of a coarse
log-spaced grid and finish with MINPACK's Levenberg-Marquardt through
``scipy.optimize.least_squares`` using a forward-difference Jacobian.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from typing import Callable, Dict, List, Tuple

import numpy as np
from scipy.optimize import least_squares

from .energies import MaterialParams
from .errors import InvalidInputError
from .io import DataSeries
from .stress import simple_shear_sigma12

GRID_N = 50
MAX_ITER = 200
GRAD_TOL = 1e-8
WIDE_REL = 1.0  # log-parameter std above this flags the parameter as unidentifiable
NOISE_FLOOR = 1e-6  # relative resolution assumed for exact data
FD_STEP = 1e-7


@dataclass
class FitResult:
    params: Dict[str, float]
    intervals: Dict[str, Tuple[float, float]]
    rss: float
    iterations: int
    converged: bool
    wide: List[str] = field(default_factory=list)
    grid_rss: float = math.nan

    def to_json(self) -> str:
        d = asdict(self)
        d["intervals"] = {k: list(v) for k, v in self.intervals.items()}
        return json.dumps(d, indent=2)


def _shear_model(gamma: np.ndarray, mu: float, k: float) -> np.ndarray:
    p = MaterialParams(mu, 1.0, k, 1.0)
    return np.array([simple_shear_sigma12(g, p, "eH") for g in gamma])


def _eos_model(J: np.ndarray, kappa: float, khat: float) -> np.ndarray:
    lj = np.log(J)
    with np.errstate(over="ignore"):
        return kappa * np.exp(khat * lj * lj) * lj / J


def _fit(
    model: Callable[[np.ndarray, float, float], np.ndarray],
    data: DataSeries,
    names: Tuple[str, str],
    grid_a: np.ndarray,
    grid_b: np.ndarray,
) -> FitResult:
    if len(data) < 3:
        raise InvalidInputError(f"need at least 3 data points, got {len(data)}")
    x, y = data.abscissa, data.ordinate
    w = np.ones_like(y) if data.weights is None else np.sqrt(data.weights)
    scale = float(np.max(np.abs(y))) or 1.0

    def resid(theta):
        with np.errstate(over="ignore", invalid="ignore"):
            m = model(x, math.exp(theta[0]), math.exp(theta[1]))
        r = w * (m - y) / scale
        return np.clip(np.where(np.isfinite(r), r, 1e100), -1e100, 1e100)

    def jac(theta):
        r0 = resid(theta)
        J = np.empty((len(r0), 2))
        for i in range(2):
            h = FD_STEP * max(1.0, abs(theta[i]))
            t = theta.copy()
            t[i] += h
            J[:, i] = (resid(t) - r0) / h
        return J

    best, best_rss = None, math.inf
    for a in grid_a:
        for b in grid_b:
            th = np.array([math.log(a), math.log(b)])
            rs = float(np.sum(resid(th) ** 2))
            if rs < best_rss:
                best, best_rss = th, rs
    sol = least_squares(resid, best, jac=jac, method="lm", max_nfev=MAX_ITER,
                        xtol=1e-15, ftol=1e-15, gtol=1e-15)
    th = sol.x
    r = resid(th)
    rss_scaled = float(r @ r)
    if rss_scaled > best_rss:
        th, r, rss_scaled = best, resid(best), best_rss
    J = jac(th)
    grad = float(np.max(np.abs(J.T @ r)))
    converged = bool(sol.status > 0 and grad <= GRAD_TOL)
    # naive intervals from the linearization, with a floor for exact data
    n, p = len(r), 2
    s2 = max(rss_scaled / max(n - p, 1), NOISE_FLOOR**2 * float(np.mean((w * y / scale) ** 2)))
    _, sv, vt = np.linalg.svd(J, full_matrices=False)
    with np.errstate(divide="ignore"):
        inv_sq = np.where(sv > 0, 1.0 / sv**2, np.inf)
    std = np.sqrt(s2 * np.einsum("ki,k,ki->i", vt, inv_sq, vt))
    vals = [math.exp(v) for v in th]
    intervals = {}
    wide = []
    for nm, v, sd in zip(names, vals, std):
        sd = float(sd) if math.isfinite(sd) else math.inf
        lo = v * math.exp(-2.0 * sd) if sd < 300 else 0.0
        hi = v * math.exp(2.0 * sd) if sd < 300 else math.inf
        intervals[nm] = (lo, hi)
        if not sd <= WIDE_REL:
            wide.append(nm)
    return FitResult(
        dict(zip(names, vals)),
        intervals,
        rss_scaled * scale * scale,
        int(sol.njev or 0),
        converged,
        wide,
        best_rss * scale * scale,
    )


def fit_shear(data: DataSeries) -> FitResult:
    """Fit [sigma_eH]_12(gamma; mu, k) to shear data (gamma, Pa)."""
    if data.kind != "shear":
        raise InvalidInputError(f"fit_shear needs shear data, got {data.kind!r}")
    g, s = data.abscissa, data.ordinate
    nz = np.abs(g) > 0
    if not np.any(nz):
        raise InvalidInputError("shear data need some nonzero gamma")
    i = int(np.argmin(np.where(nz, np.abs(g), np.inf)))
    mu0 = abs(s[i] / g[i]) or 1.0
    return _fit(_shear_model, data, ("mu", "k"),
                np.geomspace(mu0 * 1e-2, mu0 * 1e2, GRID_N), np.geomspace(1e-3, 1e2, GRID_N))


def fit_eos(data: DataSeries) -> FitResult:
    """Fit kappa e^{khat log^2 J} log J / J to (J, Pa) data."""
    if data.kind != "eos":
        raise InvalidInputError(f"fit_eos needs eos data, got {data.kind!r}")
    J, p = data.abscissa, data.ordinate
    lj = np.log(J)
    nz = np.abs(lj) > 0
    if not np.any(nz):
        raise InvalidInputError("eos data need some J != 1")
    i = int(np.argmin(np.where(nz, np.abs(lj), np.inf)))
    k0 = abs(p[i] * J[i] / lj[i]) or 1.0
    return _fit(_eos_model, data, ("kappa", "khat"),
                np.geomspace(k0 * 1e-2, k0 * 1e2, GRID_N), np.geomspace(1e-3, 1e3, GRID_N))


def synthetic_shear(mu: float, k: float, gammas) -> DataSeries:
    g = np.asarray(gammas, dtype=float)
    return DataSeries("shear", g, _shear_model(g, mu, k))


def synthetic_eos(kappa: float, khat: float, Js) -> DataSeries:
    J = np.asarray(Js, dtype=float)
    return DataSeries("eos", J, _eos_model(J, kappa, khat))
