"""Closed-form stresses, special loadings and the Vallee chain-rule check.

Stresses take log V (the Hencky strain) as input. tau is the Kirchhoff
stress, sigma = e^{-tr log V} tau the Cauchy stress.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .energies import EXP_LIMIT, EnergySpec, MaterialParams, as_principal_function, energy_of
from .errors import InvalidInputError
from .tensor import as_array, as_sym, deviatoric, matrix_exp_sym, matrix_log_spd, spectral_decompose


@dataclass(frozen=True)
class StressState:
    cauchy: np.ndarray
    kirchhoff: np.ndarray
    jacobian: float
    biot: Optional[np.ndarray] = None
    first_pk: Optional[np.ndarray] = None


def log_strain(V=None, B=None) -> np.ndarray:
    """log V from V, or from B = V^2 via log V = (1/2) log B."""
    if (V is None) == (B is None):
        raise InvalidInputError("give exactly one of V or B")
    return matrix_log_spd(V) if V is not None else 0.5 * matrix_log_spd(B)


def _split(logV):
    X = as_sym(logV)
    n = X.shape[0]
    x = float(np.trace(X))
    D = deviatoric(X)
    return X, n, x, D, float(np.sum(D * D))


def _safe_exp(e):
    with np.errstate(over="ignore"):
        return np.exp(e)


def _exp1(e: float) -> float:
    """Scalar exp that saturates to inf instead of raising."""
    try:
        return math.exp(e)
    except OverflowError:
        return math.inf


def kirchhoff_eH(logV, p: MaterialParams) -> np.ndarray:
    """tau = 2 mu e^{k||dev X||^2} dev X + kappa e^{khat x^2} x I, x = tr X."""
    X, n, x, D, d2 = _split(logV)
    return 2.0 * p.mu * _safe_exp(p.k * d2) * D + p.kappa * _safe_exp(p.khat * x * x) * x * np.eye(n)


def cauchy_eH(logV, p: MaterialParams) -> np.ndarray:
    X, n, x, D, d2 = _split(logV)
    dev = 2.0 * p.mu * _safe_exp(p.k * d2 - x) * D
    vol = p.kappa * _safe_exp(p.khat * x * x - x) * x
    return dev + vol * np.eye(n)


def stresses_eH(logV, p: MaterialParams) -> StressState:
    X = as_sym(logV)
    J = math.exp(float(np.trace(X)))
    return StressState(cauchy_eH(X, p), kirchhoff_eH(X, p), J)


def stresses_H(logV, p: MaterialParams) -> StressState:
    """Quadratic Hencky: tau = 2 mu dev X + kappa tr(X) I, sigma = e^{-tr X} tau."""
    X, n, x, D, _ = _split(logV)
    tau = 2.0 * p.mu * D + p.kappa * x * np.eye(n)
    return StressState(math.exp(-x) * tau, tau, math.exp(x))


def biot_becker(U, mu: float, kappa: float) -> np.ndarray:
    """T_Biot = 2 mu dev_3 log U + kappa tr(log U) I."""
    L = matrix_log_spd(U)
    n = L.shape[0]
    return 2.0 * mu * deviatoric(L) + kappa * np.trace(L) * np.eye(n)


def kirchhoff_becker(V, mu: float, kappa: float) -> np.ndarray:
    """tau_Becker = V tau_H(log V)."""
    V = as_sym(V)
    L = matrix_log_spd(V)
    n = L.shape[0]
    tau_h = 2.0 * mu * deviatoric(L) + kappa * np.trace(L) * np.eye(n)
    return V @ tau_h


def linear_cauchy(eps, mu: float, kappa: float) -> np.ndarray:
    e = as_sym(eps)
    n = e.shape[0]
    return 2.0 * mu * deviatoric(e) + kappa * np.trace(e) * np.eye(n)


def kirchhoff_from_log(spec: EnergySpec, logV) -> np.ndarray:
    """tau = D_X W(exp X) for any isotropic model, via its log-stretch partials."""
    X = as_sym(logV)
    d = spectral_decompose(X)
    ld = as_principal_function(spec).log_derivs(d.eigenvalues)
    if ld.scale > EXP_LIMIT:
        raise InvalidInputError("stress exceeds double range at this state")
    q = d.frame
    out = (q * (ld.grad * math.exp(ld.scale))) @ q.T
    return 0.5 * (out + out.T)


def cauchy_from_log(spec: EnergySpec, logV) -> np.ndarray:
    X = as_sym(logV)
    return math.exp(-float(np.trace(X))) * kirchhoff_from_log(spec, X)


# ---------------------------------------------------------------------------
# simple glide F = [[1, g, 0], [0, 1, 0], [0, 0, 1]]


@dataclass(frozen=True)
class ShearKinematics:
    U: np.ndarray
    R: np.ndarray
    V: np.ndarray
    logV: np.ndarray
    lambda1: float


def simple_shear_kinematics(gamma: float) -> ShearKinematics:
    g = float(gamma)
    r = math.sqrt(g * g + 4.0)
    lam1 = 0.5 * (r + g)
    U = np.eye(3)
    U[:2, :2] = np.array([[2.0, g], [g, g * g + 2.0]]) / r
    R = np.eye(3)
    R[:2, :2] = np.array([[2.0, g], [-g, 2.0]]) / r
    V = np.eye(3)
    V[:2, :2] = np.array([[g * g + 2.0, g], [g, 2.0]]) / r
    logV = np.zeros((3, 3))
    logV[:2, :2] = (math.log(lam1) / r) * np.array([[g, 2.0], [2.0, -g]])
    return ShearKinematics(U, R, V, logV, lam1)


SHEAR_MODELS = ("eH", "H", "linear", "neo-hooke", "mooney-rivlin")


def simple_shear_sigma12(gamma: float, p: MaterialParams, model: str = "eH") -> float:
    if model not in SHEAR_MODELS:
        raise InvalidInputError(f"shear model must be one of {SHEAR_MODELS}, got {model!r}")
    g = float(gamma)
    if model in ("linear", "neo-hooke", "mooney-rivlin"):
        return p.mu * g
    r = math.sqrt(g * g + 4.0)
    loglam = math.log(0.5 * (r + g))
    s_h = 4.0 * p.mu * loglam / r
    if model == "H":
        return s_h
    return s_h * _exp1(2.0 * p.k * loglam * loglam)


# ---------------------------------------------------------------------------
# hydrostatic and 1D responses


def eos_pressure(J: float, p: MaterialParams, model: str = "eH") -> float:
    """Mean Cauchy stress under pure dilatation det F = J."""
    if not J > 0:
        raise InvalidInputError(f"J must be positive, got {J}")
    lj = math.log(J)
    if model == "H":
        return p.kappa * lj / J
    if model == "eH":
        return p.kappa * _exp1(p.khat * lj * lj) * lj / J
    raise InvalidInputError(f"eos model must be 'eH' or 'H', got {model!r}")


def eos_pressure_slope(J: float, p: MaterialParams, model: str = "eH") -> float:
    """d(pressure)/dJ in closed form."""
    if not J > 0:
        raise InvalidInputError(f"J must be positive, got {J}")
    lj = math.log(J)
    if model == "H":
        return p.kappa * (1.0 - lj) / (J * J)
    if model == "eH":
        return p.kappa * _exp1(p.khat * lj * lj) * (2.0 * p.khat * lj * lj + 1.0 - lj) / (J * J)
    raise InvalidInputError(f"eos model must be 'eH' or 'H', got {model!r}")


def nominal_stress_uniaxial_1d(lam: float, mu: float, k: float) -> float:
    """d/dlam of (mu/k) e^{k log^2 lam}."""
    if not lam > 0:
        raise InvalidInputError(f"stretch must be positive, got {lam}")
    ll = math.log(lam)
    return 2.0 * mu * _exp1(k * ll * ll) * ll / lam


def nominal_stress_slope_1d(lam: float, mu: float, k: float) -> float:
    if not lam > 0:
        raise InvalidInputError(f"stretch must be positive, got {lam}")
    ll = math.log(lam)
    return 2.0 * mu * _exp1(k * ll * ll) * (2.0 * k * ll * ll + 1.0 - ll) / (lam * lam)


# ---------------------------------------------------------------------------


def _fd_gradient(fun, X, h):
    n = X.shape[0]
    G = np.zeros((n, n))
    for i in range(n):
        for j in range(i, n):
            E = np.zeros((n, n))
            if i == j:
                E[i, i] = 1.0
            else:
                E[i, j] = E[j, i] = 0.5
            G[i, j] = G[j, i] = (fun(X + h * E) - fun(X - h * E)) / (2.0 * h)
    return G


def energy_gradient_fd(spec: EnergySpec, logV, rel_step: float = 1e-6) -> np.ndarray:
    """Central-difference gradient of X -> W(exp X) over symmetric X."""
    X = as_sym(logV)
    h = rel_step * max(1.0, float(np.linalg.norm(X)))
    return _fd_gradient(lambda Y: energy_of(spec, matrix_exp_sym(Y)), X, h)


def vallee_check(spec: EnergySpec, C, rel_step: float = 1e-6) -> float:
    """Relative residual of D_S[Psi(exp S)] = exp(S) D Psi(exp S) at S = log C.

    Both sides use central differences; returns
    ||lhs - rhs|| / max(1, ||lhs||).
    """
    C = as_sym(C)
    S = matrix_log_spd(C)
    psi = lambda M: energy_of(spec, M)
    hs = rel_step * max(1.0, float(np.linalg.norm(S)))
    lhs = _fd_gradient(lambda Y: psi(matrix_exp_sym(Y)), S, hs)
    hc = rel_step * max(1.0, float(np.linalg.norm(C)))
    dpsi = _fd_gradient(psi, C, hc)
    rhs = matrix_exp_sym(S) @ dpsi
    return float(np.linalg.norm(lhs - rhs) / max(1.0, float(np.linalg.norm(lhs))))
