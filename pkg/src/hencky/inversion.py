"""Inverting the Cauchy stress / log-strain map and the special loadings.

All scalar problems reduce to a strictly increasing map on the real line,
solved by ``monotone_solve``: bracket by doubling, then Newton steps kept
inside the bracket with bisection as fallback.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .energies import MaterialParams
from .errors import HenckyError, InvalidInputError, MonotonicityViolationError
from .tensor import as_sym, deviatoric

RES_TOL = 1e-12
STEP_TOL = 1e-14
KHAT_MIN = 0.125


def _safe(fn, x):
    try:
        return fn(x)
    except OverflowError:
        return math.copysign(math.inf, x)


def monotone_solve(
    f: Callable[[float], float],
    df: Callable[[float], float],
    y: float,
    x0: Optional[float] = None,
    max_iter: int = 400,
) -> float:
    """Solve f(x) = y for strictly increasing f with f(0) = 0."""
    if y == 0.0:
        return 0.0
    tol = RES_TOL * max(1.0, abs(y))
    j = 0
    while True:
        b = 2.0**j
        if _safe(f, -b) < y < _safe(f, b):
            break
        j += 1
        if j > 1100:
            raise HenckyError(f"could not bracket the root for y = {y}")
    lo, hi = (0.0, b) if y > 0 else (-b, 0.0)
    x = 0.5 * (lo + hi) if x0 is None or not lo < x0 < hi else float(x0)
    best = None
    for _ in range(max_iter):
        r = _safe(f, x) - y
        if r > 0:
            hi = x
        elif r < 0:
            lo = x
        d = _safe(df, x)
        cand = None
        if math.isfinite(r) and math.isfinite(d) and d > 0:
            cand = x - r / d
        if abs(r) <= tol:
            best = x
            if cand is None or abs(cand - x) <= STEP_TOL * (1.0 + abs(x)) or r == 0.0:
                return x
        if cand is None or not lo < cand < hi:
            cand = 0.5 * (lo + hi)
        if cand == x:
            break
        x = cand
    if best is not None:
        return best
    raise HenckyError(f"monotone solve did not converge for y = {y}")


def _require_khat(khat: float):
    if not khat > KHAT_MIN:
        raise MonotonicityViolationError(
            f"e^(khat x^2 - x) x is not strictly monotone for khat = {khat} <= 1/8"
        )


def solve_trace_equation(y: float, khat: float, x0: Optional[float] = None) -> float:
    """x with e^{khat x^2 - x} x = y; requires khat > 1/8."""
    _require_khat(khat)
    f = lambda x: math.exp(khat * x * x - x) * x
    df = lambda x: math.exp(khat * x * x - x) * (2.0 * khat * x * x - x + 1.0)
    return monotone_solve(f, df, float(y), x0)


def solve_amplitude(rhs: float, c: float, k: float, x0: Optional[float] = None) -> float:
    """r with c r e^{k r^2} = rhs (c, k > 0); odd and strictly increasing in r."""
    f = lambda r: c * r * math.exp(k * r * r)
    df = lambda r: c * math.exp(k * r * r) * (1.0 + 2.0 * k * r * r)
    return monotone_solve(f, df, float(rhs), x0)


def invert_cauchy_eH(sigma, p: MaterialParams, x0: Optional[float] = None) -> np.ndarray:
    """Unique log V with cauchy_eH(log V, p) = sigma."""
    _require_khat(p.khat)
    S = as_sym(sigma)
    n = S.shape[0]
    x = solve_trace_equation(np.trace(S) / (n * p.kappa), p.khat, x0)
    D = deviatoric(S)
    nd = float(np.linalg.norm(D))
    if nd == 0.0:
        return (x / n) * np.eye(n)
    r = solve_amplitude(nd * math.exp(x), 2.0 * p.mu, p.k)
    return (r / nd) * D + (x / n) * np.eye(n)


# ---------------------------------------------------------------------------


def pure_shear_strain(s: float, p: MaterialParams) -> float:
    """gamma with mu gamma e^{k gamma^2 / 2} = s, log V = offdiag(gamma/2)."""
    return solve_amplitude(float(s), p.mu, 0.5 * p.k)


def pure_shear_stretch(gamma: float) -> np.ndarray:
    c, s = math.cosh(0.5 * gamma), math.sinh(0.5 * gamma)
    return np.array([[c, s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


@dataclass(frozen=True)
class UniaxialSolution:
    s: float
    a: float
    x: float
    logV: np.ndarray
    nu_hat: float


def _hat_nu(a: float, x: float, nu: float) -> float:
    den = a + x / 3.0
    if den == 0.0:
        return nu
    return (0.5 * a - x / 3.0) / den


def uniaxial_enu(s: float, E: float, nu: float, k: float, khat: float) -> UniaxialSolution:
    """Uniaxial Cauchy stress diag(s, 0, 0) in (E, nu) form; nu in [-1, 1/2].

    nu = 1/2 is the incompressible limit (x = 0), nu = -1 gives a = 0.
    """
    if not (-1.0 <= nu <= 0.5):
        raise InvalidInputError(f"nu must lie in [-1, 1/2], got {nu}")
    if not (E > 0 and k > 0):
        raise InvalidInputError("E and k must be positive")
    s = float(s)
    if nu == 0.5:
        x = 0.0
    else:
        x = solve_trace_equation((1.0 - 2.0 * nu) * s / E, khat)
    if nu == -1.0:
        a = 0.0
    else:
        # e^{(3/2) k a^2 - x} (3/2) a = (1 + nu) s / E
        a = solve_amplitude((1.0 + nu) * s / E * math.exp(x), 1.5, 1.5 * k)
    logV = np.diag([a + x / 3.0, -0.5 * a + x / 3.0, -0.5 * a + x / 3.0])
    return UniaxialSolution(s, a, x, logV, _hat_nu(a, x, nu))


def uniaxial_tension(s: float, p: MaterialParams) -> UniaxialSolution:
    _require_khat(p.khat)
    return uniaxial_enu(s, p.E, p.nu, p.k, p.khat)


def nonlinear_poisson(s_over_E: float, nu: float, k: float, khat: float) -> float:
    """nu_hat = -(log V)_22 / (log V)_11 under uniaxial stress s = s_over_E * E."""
    _require_khat(khat)
    if s_over_E == 0.0:
        return float(nu)
    return uniaxial_enu(s_over_E, 1.0, nu, k, khat).nu_hat


def poisson_implicit_residual(nu_hat: float, x: float, nu: float, k: float, khat: float) -> float:
    """[(2k/3)((1+nh)/(1-2nh))^2 - khat] x^2 - log(((1-2nh)/(1+nh)) ((1+nu)/(1-2nu)))."""
    q = (1.0 + nu_hat) / (1.0 - 2.0 * nu_hat)
    lhs = (2.0 * k / 3.0 * q * q - khat) * x * x
    rhs = math.log((1.0 / q) * (1.0 + nu) / (1.0 - 2.0 * nu))
    return lhs - rhs
