"""Monotonicity of stress in log strain: TSTS-M+ and Hill's inequality (KSTS-M+).

TSTS-M+ asks that <D_X sigma(X).H, H> > 0 with sigma the Cauchy stress as a
function of X = log V; KSTS-M+ asks the same of the Kirchhoff stress, i.e.
convexity of X -> W(exp X).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional

import numpy as np
from scipy.optimize import brentq

from ..energies import EXP_LIMIT, EnergySpec, MaterialParams, as_principal_function
from ..errors import InvalidInputError, MonotonicityViolationError
from ..stress import cauchy_from_log
from ..tensor import as_sym, deviatoric, spectral_decompose
from .report import REL_TOL, CriterionReport, Margin, margin

SAMPLE_RADIUS = 5.0
SEED = 42


def _parts(X, H):
    X, H = as_sym(X), as_sym(H)
    n = X.shape[0]
    x, h = float(np.trace(X)), float(np.trace(H))
    DX, DH = deviatoric(X), deviatoric(H)
    return n, x, h, DX, DH, X, H


def _exp(e):
    return math.inf if e > EXP_LIMIT else math.exp(e)


def check_tsts_quadratic_form(spec: EnergySpec, X, H) -> float:
    """<D_X sigma(X).H, H> in closed form."""
    n, x, h, DX, DH, X, H = _parts(X, H)
    p = spec.params
    w = float(np.sum(DX * H))
    ddh = float(np.sum(DH * DH))
    if spec.model in ("eH", "eH_sharp"):
        dev = 2.0 * p.mu * _exp(p.k * float(np.sum(DX * DX)) - x) * (2.0 * p.k * w * w - h * w + ddh)
        vol = p.kappa * _exp(p.khat * x * x - x) * (2.0 * p.khat * x * x - x + 1.0) * h * h
        return dev + vol
    if spec.model == "H":
        return math.exp(-x) * (2.0 * p.mu * (ddh - h * w) + p.kappa * (1.0 - x) * h * h)
    if spec.model == "dev_exp":
        k = p.k
        return 2.0 * k * _exp(k * float(np.sum(DX * DX)) - x) * (2.0 * k * w * w - h * w + ddh)
    if spec.model == "log_full_exp":
        k = p.k
        wf = float(np.sum(X * H))
        return 2.0 * k * _exp(k * float(np.sum(X * X)) - x) * (2.0 * k * wf * wf - h * wf + float(np.sum(H * H)))
    if spec.model == "coupled_exp":
        a, ah = spec.a, spec.a_hat
        psi = a * float(np.sum(DX * DX)) + 0.5 * ah * x * x
        u = 2.0 * a * w + ah * x * h
        return p.mu * _exp(psi - x) * (u * u - h * u + 2.0 * a * ddh + ah * h * h)
    if spec.model == "vol_exp":
        kh, m = p.khat, spec.m
        poly = (m - 1) * x ** (m - 2) + x ** (m - 1) * (kh * m * x ** (m - 1) - 1.0)
        return kh * m * _exp(kh * x**m - x) * poly * h * h
    raise InvalidInputError(f"no closed-form TSTS quadratic form for model {spec.model!r}")


def tsts_form_fd(spec: EnergySpec, X, H, rel_step: float = 1e-6) -> float:
    """Central difference of s -> <sigma(X + sH), H> at s = 0."""
    X, H = as_sym(X), as_sym(H)
    h = rel_step * max(1.0, float(np.linalg.norm(X)))
    up = float(np.sum(cauchy_from_log(spec, X + h * H) * H))
    dn = float(np.sum(cauchy_from_log(spec, X - h * H) * H))
    return (up - dn) / (2.0 * h)


def _random_sym(rng, n, radius):
    A = rng.normal(size=(n, n))
    S = 0.5 * (A + A.T)
    return S / np.linalg.norm(S) * radius


def sample_pairs(n: int, count: int, seed: int = SEED, radius: float = SAMPLE_RADIUS):
    """Seeded (X, H) with ||X|| <= radius and ||H|| = 1."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        X = _random_sym(rng, n, radius * rng.uniform())
        H = _random_sym(rng, n, 1.0)
        out.append((X, H))
    return out


# ---------------------------------------------------------------------------
# e^{k||log V||^2}


def full_exp_braces(k: float, X, H) -> float:
    """2k<X,H>^2 - tr(H)<X,H> + ||H||^2; the form divided by its positive prefactor."""
    X, H = as_sym(X), as_sym(H)
    w = float(np.sum(X * H))
    return 2.0 * k * w * w - float(np.trace(H)) * w + float(np.sum(H * H))


def full_exp_certificate(k: float, X, H) -> float:
    """||H - sqrt(2k/3)<X,H> I||^2, equal to the braces at k = 3/8."""
    X, H = as_sym(X), as_sym(H)
    w = float(np.sum(X * H))
    R = H - math.sqrt(2.0 * k / 3.0) * w * np.eye(X.shape[0])
    return float(np.sum(R * R))


def _full_exp_witnesses(k: float, n: int, rng, count: int = 64):
    """H near I/sqrt(n), X = w H with w minimizing the braces along that line."""
    base = np.eye(n) / math.sqrt(n)
    out = []
    for j in range(count):
        H = base if j == 0 else base + 0.05 * _random_sym(rng, n, 1.0)
        H = H / np.linalg.norm(H)
        w = float(np.trace(H)) / (4.0 * k)
        X = w * H
        if np.linalg.norm(X) > SAMPLE_RADIUS:
            X *= SAMPLE_RADIUS / np.linalg.norm(X)
        out.append((X, H))
    return out


def _min_braces(name, fn, pairs, detail):
    best = None
    for X, H in pairs:
        v, mags = fn(X, H)
        m = margin(name, v, mags)
        if best is None or m.value < best.value:
            best = m
            detail[name + "_at"] = (X, H)
    return best


def check_tsts_full_exponential(k: float, samples: int = 10_000, seed: int = SEED, n: int = 3) -> CriterionReport:
    """TSTS-M for X -> e^{k||X||^2} over seeded samples plus structured witnesses."""
    rng = np.random.default_rng(seed + 1)

    def fn(X, H):
        w = float(np.sum(X * H))
        t = float(np.trace(H))
        return full_exp_braces(k, X, H), [2.0 * k * w * w, t * w, 1.0]

    detail = {}
    ms = [
        _min_braces("random", fn, sample_pairs(n, samples, seed), detail),
        _min_braces("witness", fn, _full_exp_witnesses(k, n, rng), detail),
    ]
    if k == 0.375:
        X, H = detail["random_at"]
        detail["certificate_gap"] = abs(full_exp_braces(k, X, H) - full_exp_certificate(k, X, H))
    return CriterionReport("TSTSM", None, ms, 0.0, detail, sampled=True)


# ---------------------------------------------------------------------------
# mu e^{a||dev X||^2 + (ahat/2)(tr X)^2}


def coupled_braces(a: float, a_hat: float, X, H):
    n, x, h, DX, DH, X, H = _parts(X, H)
    u = 2.0 * a * float(np.sum(DX * H)) + a_hat * x * h
    ddh = float(np.sum(DH * DH))
    v = u * u - h * u + 2.0 * a * ddh + a_hat * h * h
    return v, [u * u, h * u, 2.0 * a * ddh, a_hat * h * h]


def check_coupled_exponential_tsts(
    a_hat: float, samples: int = 10_000, seed: int = SEED, a: float = 1.0, n: int = 3
) -> CriterionReport:
    """The braces are >= (ahat - 1/4) tr(H)^2 after minimizing over the coupling term."""
    fn = lambda X, H: coupled_braces(a, a_hat, X, H)
    Hw = np.eye(n) / math.sqrt(n)
    # tr X chosen so that u = tr(H)/2, the minimizer of u^2 - tr(H) u
    Xw = (1.0 / (2.0 * a_hat)) / n * np.eye(n) if a_hat > 0 else np.zeros((n, n))
    detail = {}
    ms = [
        _min_braces("random", fn, sample_pairs(n, samples, seed), detail),
        _min_braces("witness", fn, [(Xw, Hw)], detail),
    ]
    return CriterionReport("TSTSM", None, ms, 0.0, detail, sampled=True)


# ---------------------------------------------------------------------------
# bounded distortions


@dataclass(frozen=True)
class KInterval:
    lo: float
    hi: float  # math.inf when unbounded

    def __contains__(self, k: float) -> bool:
        return self.lo <= k <= self.hi


def feasibility_lhs(k: float, sigma_tilde_y: float, p: MaterialParams) -> float:
    """e^{k (2/3) s^2} / k * mu / (4 kappa)."""
    return math.exp(k * 2.0 * sigma_tilde_y**2 / 3.0) / k * p.mu / (4.0 * p.kappa)


def feasibility_rhs(khat: float) -> float:
    return (8.0 * khat - 1.0) / (8.0 * khat)


def feasibility_bound(p: MaterialParams) -> float:
    """Largest admissible sigma_tilde_y^2 at fixed khat: (6/e)(kappa/mu)(8khat-1)/(8khat)."""
    return 6.0 / math.e * p.kappa / p.mu * feasibility_rhs(p.khat)


def _root_above(f, a, start):
    """Root of f in (a, b) with f(a) <= 0 < f(b), growing b from ``start``."""
    b = max(start, a * 2.0 + 1.0)
    while f(b) <= 0.0:
        b *= 2.0
        if b > 1e300:
            return math.inf
    return brentq(f, a, b, xtol=1e-15, rtol=1e-15, maxiter=500)


def tsts_bounded_distortion_feasibility(
    p: MaterialParams, sigma_tilde_y: float, three_parameter: bool = False
) -> Optional[KInterval]:
    """k-interval on which TSTS-M+ holds for ||dev_3 log V||^2 <= (2/3) sigma_tilde_y^2.

    With ``three_parameter`` khat = 2k/3 moves with k and the condition
    reads e^{ck}/(16k - 3) <= kappa/(4 mu) on k > 3/16; otherwise khat is
    taken from ``p``. Returns None when no k qualifies.
    """
    s2 = float(sigma_tilde_y) ** 2
    if not math.isfinite(s2):
        raise InvalidInputError("sigma_tilde_y must be finite")
    c = 2.0 * s2 / 3.0
    r = p.kappa / p.mu
    if three_parameter:
        # feasible iff phi(k) >= 0; phi is concave and -> -inf at k = 3/16
        phi = lambda k: math.log(16.0 * k - 3.0) - c * k - math.log(4.0 / r)
        k0 = 3.0 / 16.0
        a = k0 * (1.0 + 1e-15)
        if c == 0.0:
            lo = k0 if phi(a) >= 0 else _root_above(phi, a, 1.0)
            return KInterval(lo, math.inf)
        kstar = k0 + 1.0 / c
        if phi(kstar) < 0:
            return None
        lo = k0 if phi(a) >= 0 else brentq(phi, a, kstar, xtol=1e-300, rtol=1e-15, maxiter=500)
        hi = _root_above(lambda k: -phi(k), kstar, 2.0 * kstar)
        return KInterval(lo, hi)
    if p.khat <= 0.125:
        raise MonotonicityViolationError("khat must exceed 1/8")
    # feasible iff psi(k) = c k - log k - log(4 kappa R / mu) <= 0, psi convex
    bound = math.log(4.0 * r * feasibility_rhs(p.khat))
    if c == 0.0:
        return KInterval(math.exp(-bound), math.inf)
    psi = lambda k: c * k - math.log(k) - bound
    kmin = 1.0 / c
    if psi(kmin) > 0:
        return None
    a = kmin
    while psi(a) <= 0:
        a *= 0.5
    lo = brentq(psi, a, kmin, xtol=1e-300, rtol=1e-15, maxiter=500)
    hi = _root_above(psi, kmin, 2.0 * kmin)
    return KInterval(lo, hi)


# ---------------------------------------------------------------------------
# Hill's inequality


def _fd_second(fun, X, H, rel_step):
    h = rel_step * max(1.0, float(np.linalg.norm(X)))
    return (fun(X + h * H) - 2.0 * fun(X) + fun(X - h * H)) / (h * h)


KSTS_TOL = 1e-8


def check_kstsm(spec: EnergySpec, samples: int = 1000, seed: int = SEED, rel_step: float = 1e-4) -> CriterionReport:
    """Sampled second directional derivatives of X -> W(exp X) by central differences."""
    g = as_principal_function(spec)
    W = lambda Y: g.value_log(spectral_decompose(Y).eigenvalues)
    ms: List[Margin] = []
    worst = None
    for X, H in sample_pairs(spec.dim, samples, seed):
        d2 = _fd_second(W, X, H, rel_step)
        m = Margin("D2W", d2, KSTS_TOL * max(1.0, abs(W(X))))
        if worst is None or m.value + m.tol < worst[0].value + worst[0].tol:
            worst = (m, X, H)
    ms.append(worst[0])
    return CriterionReport("KSTSM", None, ms, 0.0, {"worst_at": (worst[1], worst[2])}, sampled=True)
