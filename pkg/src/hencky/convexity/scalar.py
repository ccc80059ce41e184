"""One-variable convexity lemmas behind the volumetric and shear arguments."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from ..errors import InvalidInputError
from .report import BOUNDARY, FAIL, PASS, CriterionReport, Margin, combine, margin

T_RANGE = (1e-6, 1e6)
N_SCAN = 10_000
FD_STEP = 1e-3
FD_TOL = 1e-7


@dataclass(frozen=True)
class ScalarFunction:
    """A twice differentiable real function with its first two derivatives."""

    f: Callable[[float], float]
    df: Callable[[float], float]
    d2f: Callable[[float], float]
    name: str = ""


def xi_exp(khat: float) -> ScalarFunction:
    return ScalarFunction(
        lambda z: math.exp(khat * z),
        lambda z: khat * math.exp(khat * z),
        lambda z: khat * khat * math.exp(khat * z),
        f"exp({khat} z)",
    )


def xi_identity() -> ScalarFunction:
    return ScalarFunction(lambda z: z, lambda z: 1.0, lambda z: 0.0, "z")


def xi_const(c: float = 1.0) -> ScalarFunction:
    return ScalarFunction(lambda z: c, lambda z: 0.0, lambda z: 0.0, f"{c}")


def h_exp_logsq(khat: float) -> ScalarFunction:
    """t -> e^{khat log^2 t} with exact derivatives."""

    def f(t):
        return math.exp(khat * math.log(t) ** 2)

    def df(t):
        x = math.log(t)
        return 2.0 * khat * x * f(t) / t

    def d2f(t):
        x = math.log(t)
        return 2.0 * khat * f(t) * (2.0 * khat * x * x - x + 1.0) / (t * t)

    return ScalarFunction(f, df, d2f, f"exp({khat} log^2 t)")


def h_logsq() -> ScalarFunction:
    return ScalarFunction(
        lambda t: math.log(t) ** 2,
        lambda t: 2.0 * math.log(t) / t,
        lambda t: 2.0 * (1.0 - math.log(t)) / (t * t),
        "log^2 t",
    )


def h_affine(a: float = 1.0, b: float = 0.0) -> ScalarFunction:
    return ScalarFunction(lambda t: a * t + b, lambda t: a, lambda t: 0.0, f"{a} t + {b}")


def log_grid(lo: float = T_RANGE[0], hi: float = T_RANGE[1], n: int = N_SCAN) -> np.ndarray:
    return np.exp(np.linspace(math.log(lo), math.log(hi), n))


# ---------------------------------------------------------------------------
# t -> e^{khat (log t)^m}


def _phi(khat, m):
    return lambda x: khat * x**m


def _normalized_fd(phi: Callable[[float], float], t: float, delta: float = FD_STEP) -> float:
    """t^2 h''(t) / h(t) for h = e^{phi(log t)}, Richardson-extrapolated central differences.

    Works with exponent differences so that h itself never has to be formed.
    """
    x = math.log(t)
    p0 = phi(x)

    def d2(dl):
        up = math.expm1(phi(x + math.log1p(dl)) - p0)
        dn = math.expm1(phi(x + math.log1p(-dl)) - p0)
        return (up + dn) / (dl * dl)

    return (4.0 * d2(0.5 * delta) - d2(delta)) / 3.0


def volumetric_bracket(khat: float, m: int, x: float) -> float:
    """phi'' + phi'^2 - phi' = t^2 h''/h at log t = x; equals khat m x^{m-2} q(x)."""
    return khat * m * x ** (m - 2) * (khat * m * x**m + (m - 1) - x)


def volumetric_threshold(m: int) -> float:
    """1/m^{m+1}: convexity threshold for even m (and for odd m on t >= 1)."""
    return float(m) ** (-(m + 1))


def volumetric_convex_exact(khat: float, m: int, t_min: float = 0.0) -> bool:
    """Convexity of t -> e^{khat (log t)^m} on [t_min, inf) (t_min in {0, 1})."""
    if m < 2:
        raise InvalidInputError("m must be >= 2")
    if m % 2 == 0 or t_min >= 1.0:
        return khat >= volumetric_threshold(m)
    # odd m: x^{m-2} < 0 for x < 0 while q(0-) = m - 1 > 0
    return False


def check_volumetric_convexity(
    khat: float, m: int, t_range: Tuple[float, float] = T_RANGE, n: int = N_SCAN
) -> CriterionReport:
    """Scan t^2 h''/h for h(t) = e^{khat (log t)^m} on a log grid.

    The value is the Richardson-extrapolated central difference; each point's
    tolerance is FD_TOL times the size of the exact bracket's terms.
    """
    if m < 2:
        raise InvalidInputError("m must be >= 2")
    phi = _phi(khat, m)
    ts = log_grid(t_range[0], t_range[1], n)
    ms: List[Margin] = []
    worst: Optional[Margin] = None
    violations = []
    agree = 0.0
    for t in ts:
        x = math.log(t)
        v = _normalized_fd(phi, t)
        d1 = khat * m * x ** (m - 1)
        d2 = khat * m * (m - 1) * x ** (m - 2)
        mg = Margin("scan", v, FD_TOL * max(1.0, d1 * d1, abs(d2), abs(d1)))
        ex = volumetric_bracket(khat, m, x)
        agree = max(agree, abs(v - ex) / max(1.0, d1 * d1, abs(d2), abs(d1)))
        if mg.status == FAIL:
            violations.append(float(t))
        if worst is None or mg.value < worst.value:
            worst = mg
            t_worst = float(t)
    ms.append(worst)
    detail = {
        "t_min": t_worst,
        "violations": violations,
        "analytic_threshold": volumetric_threshold(m),
        "threshold_met": khat >= volumetric_threshold(m),
        "exact_convex": volumetric_convex_exact(khat, m, t_range[0]),
        "fd_vs_exact": agree,
    }
    return CriterionReport("VolConvex", np.array([khat, m]), ms, 0.0, detail)


# ---------------------------------------------------------------------------
# t -> xi(log^2 t)


@dataclass(frozen=True)
class LogSquareVerdict:
    below_one: str  # verdict on (0, 1)
    above_one: str  # verdict on [1, inf)
    margins: Tuple[Margin, Margin]
    direct: Tuple[str, str]  # same verdicts from the direct second derivative

    @property
    def convex_below_one(self) -> bool:
        return self.below_one != FAIL

    @property
    def convex_above_one(self) -> bool:
        return self.above_one != FAIL

    @property
    def agrees(self) -> bool:
        """Convexity calls of the reduction and the direct scan coincide."""
        return (self.convex_below_one, self.convex_above_one) == tuple(d != FAIL for d in self.direct)


def _logsq_second(xi: ScalarFunction, t: float) -> Tuple[float, float]:
    """(t^2/2) d^2/dt^2 xi(log^2 t) by differences, and a size for its tolerance."""
    x = math.log(t)
    f = lambda y: xi.f(y * y)

    def d2(dl):
        a, b = x + math.log1p(dl), x + math.log1p(-dl)
        return (f(a) - 2.0 * f(x) + f(b)) / (dl * dl)

    v = 0.5 * (4.0 * d2(0.5 * FD_STEP) - d2(FD_STEP)) / 3.0
    size = abs(f(x)) / FD_STEP**2 * 1e-15 + 1e-300
    return v, size


def check_scalar_logsquare_convexity(
    xi: ScalarFunction, t_range: Tuple[float, float] = T_RANGE, n: int = 4001
) -> LogSquareVerdict:
    """Convexity of t -> xi(log^2 t) on (0, 1) and on [1, inf).

    With zeta = log^2 t, t^2/2 times the second derivative is
    2 xi''(zeta) zeta + xi'(zeta)(1 - log t), i.e. C_plus below t = 1 and
    C_minus above it.
    """
    ts = log_grid(t_range[0], t_range[1], n)
    best = {True: None, False: None}
    direct = {True: PASS, False: PASS}
    for t in ts:
        x = math.log(t)
        z = x * x
        s = math.sqrt(z)
        above = t >= 1.0
        sign = -1.0 if above else 1.0
        a, b = 2.0 * xi.d2f(z) * z, xi.df(z) * (1.0 + sign * s)
        m = margin("C-" if above else "C+", a + b, [a, xi.df(z), xi.df(z) * s])
        if best[above] is None or m.value < best[above].value:
            best[above] = m
        if abs(m.value) > 1e-6 * max(abs(a), abs(xi.df(z)) * (1 + s), 1e-300):
            v, size = _logsq_second(xi, t)
            st = FAIL if v < -size else PASS
            direct[above] = combine([direct[above], st])
    lo, hi = best[False], best[True]
    return LogSquareVerdict(lo.status, hi.status, (lo, hi), (direct[False], direct[True]))


# ---------------------------------------------------------------------------
# simple shear


def simple_shear_h(t: float) -> float:
    """h(t) = 2[log(2 + t^2 + t sqrt(4 + t^2)) - log 2]^2."""
    # even in t: the arguments at t and -t multiply to 4
    t = abs(float(t))
    return 2.0 * math.log1p(0.5 * (t * t + t * math.sqrt(4.0 + t * t))) ** 2


@dataclass(frozen=True)
class ConvexityWitness:
    t1: float
    t2: float
    mid: float
    gap: float  # h(mid) - (h(t1) + h(t2))/2 > 0 refutes convexity


def simple_shear_nonconvexity_witness(lo: float = 0.0, hi: float = 10.0, n: int = 201) -> ConvexityWitness:
    ts = np.linspace(lo, hi, n)
    hv = np.array([simple_shear_h(t) for t in ts])
    best = None
    for i in range(n):
        for j in range(i + 2, n, 2):
            mid = (i + j) // 2
            gap = hv[mid] - 0.5 * (hv[i] + hv[j])
            if best is None or gap > best.gap:
                best = ConvexityWitness(float(ts[i]), float(ts[j]), float(ts[mid]), float(gap))
    return best


# ---------------------------------------------------------------------------
# F -> h(det F)


def _cof(F):
    return np.linalg.det(F) * np.linalg.inv(F).T


def hdet_second_variation(h: ScalarFunction, F, xi, eta, rel_step: float = 1e-4) -> Tuple[float, float]:
    """(finite difference, h''(det F) <Cof F, xi (x) eta>^2) for s -> h(det(F + s xi (x) eta))."""
    F = np.asarray(F, dtype=float)
    D = np.outer(xi, eta)
    s = rel_step * max(1.0, float(np.linalg.norm(F)))
    g = lambda u: h.f(float(np.linalg.det(F + u * D)))
    fd = (g(s) - 2.0 * g(0.0) + g(-s)) / (s * s)
    exact = h.d2f(float(np.linalg.det(F))) * float(np.sum(_cof(F) * D)) ** 2
    return fd, exact


def h_det_rank_one_check(h: ScalarFunction, grid: Optional[Sequence[float]] = None) -> CriterionReport:
    """F -> h(det F) is LH-elliptic iff h is convex; the latter is scanned on ``grid``."""
    ts = log_grid(1e-3, 1e3, 2001) if grid is None else np.asarray(grid, dtype=float)
    worst = None
    for t in ts:
        v = h.d2f(float(t))
        size = max(abs(h.f(float(t))), abs(h.df(float(t))) * t) / (t * t)
        m = margin("h''", v, [size])
        if worst is None or m.value < worst.value:
            worst, t_worst = m, float(t)
    rep = CriterionReport("VolConvex", ts, [worst], 0.0, {"t_min": t_worst})
    rep.detail["elliptic"] = rep.verdict != FAIL
    return rep
