"""The exponentiated Hencky family and the comparison energies.

Every isotropic energy here is written as a function of the log-stretches
x_i = log(lambda_i),

    Phi(x) = sum_t c_t * P_t(x) * exp(psi_t(x)),

with polynomial prefactors P_t and exponents psi_t. Derivatives are exact,
and the common factor exp(max_t psi_t) is kept apart as ``scale`` so that
quantities at stretches like e^11 stay inside double range.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from .errors import InvalidInputError, UnsupportedDimensionError
from .tensor import EIG_FLOOR, as_array, principal_stretches, spectral_decompose
from .errors import OrientationError

EXP_LIMIT = 700.0


@dataclass(frozen=True)
class MaterialParams:
    """(mu, kappa) in Pa, (k, khat) dimensionless."""

    mu: float
    kappa: float
    k: float
    khat: float

    def __post_init__(self):
        for name in ("mu", "kappa", "k", "khat"):
            v = float(getattr(self, name))
            if not (math.isfinite(v) and v > 0):
                raise InvalidInputError(f"{name} must be finite and > 0, got {v}")
            object.__setattr__(self, name, v)

    @classmethod
    def from_E_nu(cls, E: float, nu: float, k: float, khat: float) -> "MaterialParams":
        if not (-1.0 < nu < 0.5):
            raise InvalidInputError(f"nu must lie in (-1, 1/2), got {nu}")
        mu = E / (2.0 * (1.0 + nu))
        kappa = E / (3.0 * (1.0 - 2.0 * nu))
        return cls(mu, kappa, k, khat)

    @property
    def E(self) -> float:
        return 9.0 * self.kappa * self.mu / (3.0 * self.kappa + self.mu)

    @property
    def nu(self) -> float:
        return (3.0 * self.kappa - 2.0 * self.mu) / (2.0 * (3.0 * self.kappa + self.mu))

    @property
    def lame(self) -> float:
        return self.kappa - 2.0 * self.mu / 3.0

    def sharp(self) -> "MaterialParams":
        """The 3-parameter member khat = 2k/3."""
        return replace(self, khat=2.0 * self.k / 3.0)


UNIT_PARAMS = MaterialParams(1.0, 1.0, 1.0, 1.0)

MODELS = (
    "eH",
    "eH_sharp",
    "H",
    "vol_exp",
    "dev_exp",
    "log_full_exp",
    "neo_hooke_CG",
    "coupled_exp",
    "becker",
    "cgmr",
)


@dataclass(frozen=True)
class EnergySpec:
    """Model tag, parameters and dimension.

    ``dev_exp`` and ``log_full_exp`` read their exponent from ``params.k``,
    ``vol_exp`` from ``params.khat``. ``coupled_exp`` uses ``a``/``a_hat``
    and ``params.mu``; ``cgmr`` uses ``alpha1``/``alpha2``.
    """

    model: str
    params: MaterialParams = UNIT_PARAMS
    dim: int = 3
    a: Optional[float] = None
    a_hat: Optional[float] = None
    m: int = 2
    alpha1: float = 1.0
    alpha2: float = 1.0

    def __post_init__(self):
        if self.model not in MODELS:
            raise InvalidInputError(f"unknown model tag {self.model!r}")
        if self.dim not in (2, 3):
            raise UnsupportedDimensionError(f"dim must be 2 or 3, got {self.dim}")
        if self.model in ("eH_sharp", "cgmr") and self.dim != 3:
            raise UnsupportedDimensionError(f"{self.model} requires dim 3")
        if self.model == "eH_sharp":
            object.__setattr__(self, "params", self.params.sharp())
        if self.model == "coupled_exp":
            if self.a is None or self.a_hat is None:
                raise InvalidInputError("coupled_exp needs a and a_hat")
        if self.model == "vol_exp" and self.m < 2:
            raise InvalidInputError("vol_exp needs m >= 2")

    @property
    def scale_invariant(self) -> bool:
        """True when g(a*lambda) = g(lambda) for every a > 0."""
        return self.model == "dev_exp"


def dev_exp(k: float, dim: int = 3) -> EnergySpec:
    return EnergySpec("dev_exp", MaterialParams(1.0, 1.0, k, k), dim)


def log_full_exp(k: float = 1.0, dim: int = 3) -> EnergySpec:
    return EnergySpec("log_full_exp", MaterialParams(1.0, 1.0, k, k), dim)


def vol_exp(khat: float, m: int = 2, dim: int = 3) -> EnergySpec:
    return EnergySpec("vol_exp", MaterialParams(1.0, 1.0, khat, khat), dim, m=m)


# ---------------------------------------------------------------------------
# polynomial pieces: each maps x -> (value, gradient, hessian)

Triple = Tuple[float, np.ndarray, np.ndarray]


def _const(c: float):
    def f(x):
        n = len(x)
        return c, np.zeros(n), np.zeros((n, n))

    return f


def _linear(w: Sequence[float], c0: float = 0.0):
    w = np.asarray(w, dtype=float)

    def f(x):
        n = len(x)
        return float(w @ x) + c0, w.copy(), np.zeros((n, n))

    return f


def _dev_sq(x):
    n = len(x)
    t = x.sum()
    d = x - t / n
    return float(d @ d), 2.0 * d, 2.0 * (np.eye(n) - np.ones((n, n)) / n)


def _tr_sq(x):
    n = len(x)
    t = x.sum()
    return t * t, 2.0 * t * np.ones(n), 2.0 * np.ones((n, n))


def _norm_sq(x):
    n = len(x)
    return float(x @ x), 2.0 * x, 2.0 * np.eye(n)


def _tr_pow(m: int):
    def f(x):
        n = len(x)
        t = x.sum()
        one = np.ones(n)
        d2 = m * (m - 1) * t ** (m - 2) if m >= 2 else 0.0
        return t**m, m * t ** (m - 1) * one, d2 * np.ones((n, n))

    return f


def _combo(*pairs):
    """Linear combination sum c_i * f_i of polynomial pieces."""

    def f(x):
        v, g, h = 0.0, 0.0, 0.0
        for c, fi in pairs:
            vi, gi, hi = fi(x)
            v, g, h = v + c * vi, g + c * gi, h + c * hi
        return v, g, h

    return f


class Term(NamedTuple):
    coef: float
    prefactor: Callable[[np.ndarray], Triple]
    exponent: Callable[[np.ndarray], Triple]


class LogDerivs(NamedTuple):
    """Phi and its x-derivatives, each multiplied by exp(-scale)."""

    scale: float
    value: float
    grad: np.ndarray
    hess: np.ndarray


class StretchDerivs(NamedTuple):
    """g and its lambda-derivatives, each multiplied by exp(-scale)."""

    scale: float
    stretches: np.ndarray
    value: float
    grad: np.ndarray
    hess: np.ndarray

    def raw(self, v):
        """Undo the scale factor; +inf/-inf when not representable."""
        if self.scale > EXP_LIMIT:
            return np.where(np.asarray(v) == 0, 0.0, np.sign(v) * np.inf)
        return np.asarray(v) * math.exp(self.scale)


class PrincipalFunction:
    """g(lambda_1..lambda_n) = Phi(log lambda) with analytic partials."""

    def __init__(self, dim: int, terms: List[Term], name: str = ""):
        self.dim = dim
        self.terms = terms
        self.name = name

    def log_derivs(self, x) -> LogDerivs:
        x = np.asarray(x, dtype=float)
        n = len(x)
        if n != self.dim:
            raise UnsupportedDimensionError(f"{self.name} expects {self.dim} stretches, got {n}")
        psis = [t.exponent(x) for t in self.terms]
        s = max(p[0] for p in psis)
        val, grad, hess = 0.0, np.zeros(n), np.zeros((n, n))
        for term, (pv, pg, ph) in zip(self.terms, psis):
            w = term.coef * math.exp(pv - s)
            if w == 0.0:
                continue
            qv, qg, qh = term.prefactor(x)
            val += w * qv
            grad += w * (qg + qv * pg)
            hess += w * (qh + np.outer(qg, pg) + np.outer(pg, qg) + qv * (ph + np.outer(pg, pg)))
        return LogDerivs(s, val, grad, hess)

    def derivs(self, stretches) -> StretchDerivs:
        lam = np.asarray(stretches, dtype=float)
        if np.any(lam <= 0):
            raise InvalidInputError("stretches must be positive")
        d = self.log_derivs(np.log(lam))
        g = d.grad / lam
        h = (d.hess - np.diag(d.grad)) / np.outer(lam, lam)
        return StretchDerivs(d.scale, lam, d.value, g, h)

    def value_log(self, x) -> float:
        d = self.log_derivs(x)
        if d.value == 0.0:
            return 0.0
        if d.scale > EXP_LIMIT:
            return math.copysign(math.inf, d.value)
        return d.value * math.exp(d.scale)

    def __call__(self, stretches) -> float:
        lam = np.asarray(stretches, dtype=float)
        return self.value_log(np.log(lam))


def _terms_for(spec: EnergySpec) -> List[Term]:
    p, n = spec.params, spec.dim
    one = _const(1.0)
    zero = _const(0.0)
    if spec.model in ("eH", "eH_sharp"):
        return [
            Term(p.mu / p.k, one, _combo((p.k, _dev_sq))),
            Term(p.kappa / (2.0 * p.khat), one, _combo((p.khat, _tr_sq))),
        ]
    if spec.model == "H":
        return [Term(p.mu, _dev_sq, zero), Term(0.5 * p.kappa, _tr_sq, zero)]
    if spec.model == "vol_exp":
        return [Term(1.0, one, _combo((p.khat, _tr_pow(spec.m))))]
    if spec.model == "dev_exp":
        return [Term(1.0, one, _combo((p.k, _dev_sq)))]
    if spec.model == "log_full_exp":
        return [Term(1.0, one, _combo((p.k, _norm_sq)))]
    if spec.model == "coupled_exp":
        return [Term(p.mu, one, _combo((spec.a, _dev_sq), (0.5 * spec.a_hat, _tr_sq)))]
    if spec.model == "neo_hooke_CG":
        terms = [Term(0.5 * p.mu, one, _linear(2.0 * np.eye(n)[i])) for i in range(n)]
        terms.append(Term(-p.mu, _linear(np.ones(n)), zero))
        terms.append(Term(-1.5 * p.mu, one, zero))
        return terms
    if spec.model == "becker":
        return [
            Term(2.0 * p.mu, _linear(np.eye(n)[i], -1.0), _linear(np.eye(n)[i])) for i in range(n)
        ]
    if spec.model == "cgmr":
        e = np.eye(3)
        terms = [Term(spec.alpha1, one, _linear(2.0 * e[i])) for i in range(3)]
        terms += [
            Term(spec.alpha2, one, _linear(2.0 * (e[i] + e[j])))
            for i in range(3)
            for j in range(i + 1, 3)
        ]
        terms.append(Term(-1.0, _linear(np.ones(3)), zero))
        terms.append(Term(1.0, one, _tr_sq))
        terms.append(Term(-(3.0 * spec.alpha1 + 3.0 * spec.alpha2 + 1.0), one, zero))
        return terms
    raise InvalidInputError(f"unknown model tag {spec.model!r}")


def as_principal_function(spec: EnergySpec) -> PrincipalFunction:
    return PrincipalFunction(spec.dim, _terms_for(spec), spec.model)


# ---------------------------------------------------------------------------
# tensor-level evaluation


def _log_stretches(F) -> Optional[np.ndarray]:
    """Log singular values of F, or None when det F <= 0."""
    a = as_array(F)
    if np.allclose(a, a.T, rtol=0, atol=1e-15 * (1 + np.abs(a).max())):
        w = spectral_decompose(a).eigenvalues
        if np.all(w > EIG_FLOOR):
            return np.log(w)
    if np.linalg.det(a) <= 0:
        return None
    try:
        return np.log(principal_stretches(a).array)
    except OrientationError:
        return None


def energy_of(spec: EnergySpec, F) -> float:
    x = _log_stretches(F)
    if x is None:
        return math.inf
    if len(x) != spec.dim:
        raise UnsupportedDimensionError(f"state has dim {len(x)}, spec has dim {spec.dim}")
    return as_principal_function(spec).value_log(x)


def energy_eH(F, p: MaterialParams, n: Optional[int] = None) -> float:
    """(mu/k) e^{k ||dev_n log U||^2} + (kappa/(2 khat)) e^{khat (tr log U)^2}; +inf if det F <= 0."""
    a = as_array(F)
    return energy_of(EnergySpec("eH", p, n or a.shape[0]), a)


def energy_H(U, p: MaterialParams, n: Optional[int] = None) -> float:
    a = as_array(U)
    return energy_of(EnergySpec("H", p, n or a.shape[0]), a)


def energy_eH_sharp(V, p: MaterialParams) -> float:
    a = as_array(V)
    if a.shape[0] != 3:
        raise UnsupportedDimensionError("eH_sharp requires dim 3")
    return energy_of(EnergySpec("eH_sharp", p, 3), a)


def energy_vol_exp(J: float, khat: float, m: int = 2) -> float:
    if not J > 0:
        raise InvalidInputError(f"J must be positive, got {J}")
    if m < 2:
        raise InvalidInputError("m must be >= 2")
    e = khat * math.log(J) ** m
    return math.inf if e > EXP_LIMIT else math.exp(e)


def energy_comparison(spec: EnergySpec, state) -> float:
    """Evaluate any model; ``state`` is F (or U), or J for ``vol_exp`` given as a scalar."""
    if spec.model == "vol_exp" and np.ndim(state) == 0:
        return energy_vol_exp(float(state), spec.params.khat, spec.m)
    return energy_of(spec, state)


def reference_energy(p: MaterialParams) -> float:
    """W_eH at U = I."""
    return p.mu / p.k + p.kappa / (2.0 * p.khat)
