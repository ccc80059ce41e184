"""Pointwise rank-one convexity criteria in principal stretches.

Each check evaluates the inequalities of one criterion at a stretch point
and returns a ``CriterionReport``. The energy is passed either as an
``EnergySpec`` or directly as a ``PrincipalFunction`` g(lambda_1, ..).

All margins carry the common factor exp(-scale) of the energy's largest
exponential, so their signs are exact while their magnitudes stay finite
at stretches like e^11.
"""

from __future__ import annotations

import itertools
import math
from typing import Callable, Iterable, List, Optional, Sequence, Union

import numpy as np

from ..energies import EnergySpec, PrincipalFunction, Term, _const, _dev_sq, as_principal_function
from ..errors import InvalidInputError, UnsupportedDimensionError
from ..tensor import PrincipalState
from .report import CriterionReport, Margin, PointDerivs, either, margin

GLike = Union[EnergySpec, PrincipalFunction]

INCOMPRESSIBLE_TOL = 1e-12
N_DIRECTIONS = 1000


def as_g(g: GLike) -> PrincipalFunction:
    return as_principal_function(g) if isinstance(g, EnergySpec) else g


def dev_quadratic(dim: int = 3) -> PrincipalFunction:
    """g = ||dev_n log U||^2, no exponential."""
    return PrincipalFunction(dim, [Term(1.0, _dev_sq, _const(0.0))], "dev_quadratic")


def _state(p) -> PrincipalState:
    return p if isinstance(p, PrincipalState) else PrincipalState(tuple(p))


def _pairs(n):
    return list(itertools.combinations(range(n), 2))


# ---------------------------------------------------------------------------
# building blocks


def _sc(d: PointDerivs) -> List[Margin]:
    return [margin(f"SC{i + 1}", d.g2[i, i], [d.g2mag[i, i]]) for i in range(d.n)]


def _be(d: PointDerivs, i: int, j: int) -> Margin:
    """(lam_i g_i - lam_j g_j)/(lam_i - lam_j), or its coincident limit."""
    tag = f"BE{i + 1}{j + 1}"
    if d.equal[i, j]:
        lim = d.g1[i] / d.lam[i]
        v = d.g2[i, i] - d.g2[i, j] + lim
        return margin(tag, v, [d.g2mag[i, i], d.g2mag[i, j], lim])
    den = d.lam[i] - d.lam[j]
    v = (d.phi1[i] - d.phi1[j]) / den
    return margin(tag, v, [abs(d.phi1[i]) / den, abs(d.phi1[j]) / den])


def _ks_plus(d: PointDerivs, i: int, j: int) -> Margin:
    den = d.lam[i] - d.lam[j]
    q = (d.g1[i] - d.g1[j]) / den
    v = d.sqrt_prod(i, j) + d.g2[i, j] + q
    return margin(
        f"KS+{i + 1}{j + 1}",
        v,
        [d.sqrt_mag(i, j), d.g2mag[i, j], abs(d.g1[i] / den), abs(d.g1[j] / den)],
    )


def _ks_minus(d: PointDerivs, i: int, j: int) -> Margin:
    s = d.lam[i] + d.lam[j]
    v = d.sqrt_prod(i, j) - d.g2[i, j] + (d.g1[i] + d.g1[j]) / s
    return margin(
        f"KS-{i + 1}{j + 1}",
        v,
        [d.sqrt_mag(i, j), d.g2mag[i, j], abs(d.g1[i] / s), abs(d.g1[j] / s)],
    )


# ---------------------------------------------------------------------------


def check_TE(p, g: GLike) -> CriterionReport:
    """Separate convexity: every pure second partial of g is nonnegative."""
    p = _state(p)
    d = PointDerivs.at(as_g(g), p)
    return CriterionReport("SC/TE", p, _sc(d), d.scale, {"g_ii": np.diag(d.g2).copy()})


def check_BE(p, g: GLike) -> CriterionReport:
    p = _state(p)
    d = PointDerivs.at(as_g(g), p)
    ms = [_be(d, i, j) for i, j in _pairs(d.n)]
    return CriterionReport("BE", p, ms, d.scale)


def check_KS_2d(p, g: GLike) -> CriterionReport:
    """Knowles-Sternberg conditions, necessary and sufficient in the plane."""
    p = _state(p)
    if p.dim != 2:
        raise UnsupportedDimensionError("check_KS_2d needs two stretches")
    d = PointDerivs.at(as_g(g), p)
    ms = _sc(d) + [_be(d, 0, 1)]
    if not d.equal[0, 1]:
        ms.append(_ks_plus(d, 0, 1))
    ms.append(_ks_minus(d, 0, 1))
    return CriterionReport("KS2D", p, ms, d.scale, {"g1": d.g1.copy(), "g2": d.g2.copy()})


# ---------------------------------------------------------------------------
# Dacorogna, n = 3


def _m_entry(d: PointDerivs, i: int, j: int, s: int):
    """m_ij for eps_i eps_j = s, with a magnitude bound for the tolerance."""
    if i == j or (d.equal[i, j] and s == 1):
        return d.g2[i, i], d.g2mag[i, i]
    den = d.lam[i] - s * d.lam[j]
    v = s * d.g2[i, j] + (d.g1[i] - s * d.g1[j]) / den
    mag = max(d.g2mag[i, j], abs(d.g1[i] / den), abs(d.g1[j] / den))
    return v, mag


def _eps_label(eps) -> str:
    return "".join("+" if e > 0 else "-" for e in eps)


def check_dacorogna_3d(p, g: GLike) -> CriterionReport:
    p = _state(p)
    if p.dim != 3:
        raise UnsupportedDimensionError("check_dacorogna_3d needs three stretches")
    d = PointDerivs.at(as_g(g), p)
    ms = _sc(d)
    ms += [_be(d, i, j) for i, j in _pairs(3) if not d.equal[i, j]]
    sq = [math.sqrt(max(d.g2[i, i], 0.0)) for i in range(3)]
    sqm = [math.sqrt(d.g2mag[i, i]) for i in range(3)]
    mats = {}
    dets = {}
    for eps in itertools.product((1, -1), repeat=3):
        lab = _eps_label(eps)
        M = np.zeros((3, 3))
        Mmag = np.zeros((3, 3))
        for i in range(3):
            for j in range(i, 3):
                v, mag = _m_entry(d, i, j, eps[i] * eps[j])
                M[i, j] = M[j, i] = v
                Mmag[i, j] = Mmag[j, i] = mag
        mats[lab] = M
        for i, j in _pairs(3):
            ms.append(
                margin(
                    f"S{i + 1}{j + 1}[{lab}]",
                    d.sqrt_prod(i, j) + M[i, j],
                    [d.sqrt_mag(i, j), Mmag[i, j]],
                )
            )
        a_terms = [M[0, 1] * sq[2], M[0, 2] * sq[1], M[1, 2] * sq[0], sq[0] * sq[1] * sq[2]]
        a_mags = [Mmag[0, 1] * sqm[2], Mmag[0, 2] * sqm[1], Mmag[1, 2] * sqm[0], sqm[0] * sqm[1] * sqm[2]]
        first = margin(f"A[{lab}]", sum(a_terms), a_mags)
        det = float(np.linalg.det(M))
        dets[lab] = det
        det_mags = [
            abs(M[0, s[0]] * M[1, s[1]] * M[2, s[2]]) for s in itertools.permutations(range(3))
        ]
        second = margin(f"det[{lab}]", det, det_mags + [Mmag[0, 0] * Mmag[1, 1] * Mmag[2, 2]])
        ms.append(either(f"A|det[{lab}]", first, second))
    return CriterionReport("Dacorogna3D", p, ms, d.scale, {"m": mats, "det_M": dets})


# ---------------------------------------------------------------------------
# Zubov, incompressible n = 3


def check_zubov_incompressible(p, g: GLike) -> CriterionReport:
    p = _state(p)
    if p.dim != 3:
        raise UnsupportedDimensionError("Zubov's criterion needs three stretches")
    lam = p.array
    if abs(float(np.prod(lam)) - 1.0) > INCOMPRESSIBLE_TOL:
        raise InvalidInputError(f"stretches must satisfy l1 l2 l3 = 1, product is {np.prod(lam)!r}")
    d = PointDerivs.at(as_g(g), p)
    others = {0: (1, 2), 1: (0, 2), 2: (0, 1)}
    alpha, gplus, gminus, amag, pmag, mmag = {}, {}, {}, {}, {}, {}
    for k, (i, j) in others.items():
        if d.equal[i, j]:
            a = d.g1[i] + lam[i] * (d.g2[i, i] - d.g2[i, j])
            amag[k] = max(abs(d.g1[i]), lam[i] * d.g2mag[i, i], lam[i] * d.g2mag[i, j])
            gp = d.g2[i, i]
            pmag[k] = d.g2mag[i, i]
        else:
            den = lam[i] - lam[j]
            a = (d.phi1[i] - d.phi1[j]) / den
            amag[k] = (abs(d.phi1[i]) + abs(d.phi1[j])) / abs(den)
            gp = d.g2[i, j] + (d.g1[i] - d.g1[j]) / den
            pmag[k] = max(d.g2mag[i, j], (abs(d.g1[i]) + abs(d.g1[j])) / abs(den))
        s = lam[i] + lam[j]
        gm = -d.g2[i, j] + (d.g1[i] + d.g1[j]) / s
        mmag[k] = max(d.g2mag[i, j], (abs(d.g1[i]) + abs(d.g1[j])) / s)
        alpha[k], gplus[k], gminus[k] = a, gp, gm
    beta = np.diag(d.g2).copy()
    bmag = np.diag(d.g2mag)
    delta, dmag = {}, {}
    for k, (i, j) in others.items():
        t = [beta[i] * lam[i] ** 2, beta[j] * lam[j] ** 2, 2.0 * gminus[k] * lam[i] * lam[j]]
        delta[k] = sum(t)
        dmag[k] = max(bmag[i] * lam[i] ** 2, bmag[j] * lam[j] ** 2, 2.0 * mmag[k] * lam[i] * lam[j])
    eps, emag = {}, {}
    for k, (i, j) in others.items():
        t = [
            beta[k] * lam[k] ** 2,
            gplus[k] * lam[i] * lam[j],
            gminus[i] * lam[k] * lam[j],
            gminus[j] * lam[k] * lam[i],
        ]
        eps[k] = sum(t)
        emag[k] = max(
            bmag[k] * lam[k] ** 2,
            pmag[k] * lam[i] * lam[j],
            mmag[i] * lam[k] * lam[j],
            mmag[j] * lam[k] * lam[i],
        )
    ms: List[Margin] = []
    for k in range(3):
        ms.append(margin(f"alpha{k + 1}", alpha[k], [amag[k]]))
    for k in range(3):
        ms.append(margin(f"delta{k + 1}", delta[k], [dmag[k]]))
    for k, (i, j) in others.items():
        root = math.sqrt(max(delta[i], 0.0) * max(delta[j], 0.0))
        ms.append(
            margin(f"eps{k + 1}+sqrt", eps[k] + root, [emag[k], math.sqrt(dmag[i] * dmag[j])])
        )
    detail = {
        "alpha": np.array([alpha[k] for k in range(3)]),
        "beta": beta,
        "gamma_plus": np.array([gplus[k] for k in range(3)]),
        "gamma_minus": np.array([gminus[k] for k in range(3)]),
        "delta": np.array([delta[k] for k in range(3)]),
        "epsilon": np.array([eps[k] for k in range(3)]),
    }
    return CriterionReport("ZubovIncompressible", p, ms, d.scale, detail)


# ---------------------------------------------------------------------------
# Buliga


def sphere_directions(n: int, count: int = N_DIRECTIONS) -> np.ndarray:
    """Deterministic, evenly spread unit vectors (circle or Fibonacci sphere)."""
    k = np.arange(count) + 0.5
    if n == 2:
        th = 2.0 * math.pi * k / count
        return np.column_stack([np.cos(th), np.sin(th)])
    if n == 3:
        z = 1.0 - 2.0 * k / count
        r = np.sqrt(1.0 - z * z)
        phi = math.pi * (3.0 - math.sqrt(5.0)) * k
        return np.column_stack([r * np.cos(phi), r * np.sin(phi), z])
    raise UnsupportedDimensionError(f"no direction set for n = {n}")


def buliga_matrices(d: PointDerivs):
    """(H, G, Hmag, Gmag) of the Buliga form at one point, scaled."""
    n = d.n
    H = d.g2.copy()
    Hm = d.g2mag.copy()
    G = np.zeros((n, n))
    Gm = np.zeros((n, n))
    lam, g1 = d.lam, d.g1
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            if d.equal[i, j]:
                l = lam[i]
                G[i, j] = (g1[i] + l * (d.g2[i, i] - d.g2[i, j])) / (2.0 * l)
                hb = (l * (d.g2[i, i] - d.g2[i, j]) - g1[i]) / (2.0 * l)
                Gm[i, j] = (abs(g1[i]) + l * (d.g2mag[i, i] + d.g2mag[i, j])) / (2.0 * l)
                hm = Gm[i, j]
            else:
                den = lam[i] ** 2 - lam[j] ** 2
                G[i, j] = (d.phi1[i] - d.phi1[j]) / den
                hb = (lam[j] * g1[i] - lam[i] * g1[j]) / den
                Gm[i, j] = (abs(d.phi1[i]) + abs(d.phi1[j])) / abs(den)
                hm = (lam[j] * abs(g1[i]) + lam[i] * abs(g1[j])) / abs(den)
            H[i, j] += hb
            Hm[i, j] += hm
    return H, G, Hm, Gm


def buliga_form(H, G, a) -> float:
    a = np.asarray(a, dtype=float)
    b = np.abs(a)
    return float(a @ H @ a + b @ G @ b)


def check_buliga(p, g: GLike, directions: Optional[Sequence] = None, witnesses: Iterable = ()) -> CriterionReport:
    """Schur margins plus the minimum of the Buliga form over unit directions.

    ``directions`` defaults to ``sphere_directions``; ``witnesses`` are extra
    a-vectors, normalized before use. A fail from any direction is
    conclusive, a pass only covers the sampled set.
    """
    p = _state(p)
    d = PointDerivs.at(as_g(g), p)
    ms = []
    for i, j in _pairs(d.n):
        tag = f"Schur{i + 1}{j + 1}"
        if d.equal[i, j]:
            # limit of the quotient over (x_i - x_j)^2
            v = d.phi2[i, i] - d.phi2[i, j]
            ms.append(margin(tag, v, [d.phi2[i, i], d.phi2[i, j]]))
            continue
        dx = d.x[i] - d.x[j]
        ms.append(
            margin(
                tag,
                dx * (d.phi1[i] - d.phi1[j]),
                [abs(dx) * abs(d.phi1[i]), abs(dx) * abs(d.phi1[j])],
            )
        )
    H, G, Hm, Gm = buliga_matrices(d)
    dirs = sphere_directions(d.n) if directions is None else np.asarray(directions, dtype=float)
    wit = [np.asarray(w, dtype=float) for w in witnesses]
    if wit:
        dirs = np.vstack([dirs] + [w / np.linalg.norm(w) for w in wit])
    norms = np.linalg.norm(dirs, axis=1, keepdims=True)
    dirs = dirs / norms
    b = np.abs(dirs)
    vals = np.einsum("ki,ij,kj->k", dirs, H, dirs) + np.einsum("ki,ij,kj->k", b, G, b)
    mags = np.einsum("ki,ij,kj->k", b, Hm + Gm, b)
    worst = int(np.argmin(vals))
    ms.append(margin("form", vals[worst], [mags[worst]]))
    detail = {"H": H, "G": G, "worst_direction": dirs[worst], "form_values": vals}
    return CriterionReport("Buliga", p, ms, d.scale, detail, sampled=True)


# ---------------------------------------------------------------------------
# Schur convexity of a plain symmetric function


def _fd_grad(l, x, rel=1e-6):
    x = np.asarray(x, dtype=float)
    g = np.zeros_like(x)
    for i in range(len(x)):
        h = rel * max(1.0, abs(x[i]))
        e = np.zeros_like(x)
        e[i] = h
        g[i] = (l(x + e) - l(x - e)) / (2.0 * h)
    return g


SYMMETRY_TOL = 1e-10
FD_REL_TOL = 1e-6


def check_schur_convexity(
    l: Callable[[np.ndarray], float],
    samples: Sequence,
    grad: Optional[Callable[[np.ndarray], np.ndarray]] = None,
) -> CriterionReport:
    """(x_i - x_j)(d_i l - d_j l) >= 0 at each sample; l must be symmetric.

    Without ``grad`` the partials come from central differences, and the
    margin tolerance widens to FD_REL_TOL accordingly.
    """
    pts = [np.asarray(s, dtype=float) for s in samples]
    ms = []
    for k, x in enumerate(pts):
        v0 = l(x)
        for perm in itertools.permutations(range(len(x))):
            vp = l(x[list(perm)])
            if abs(vp - v0) > SYMMETRY_TOL * max(1.0, abs(v0)):
                raise InvalidInputError(f"function is not symmetric at sample {x.tolist()}")
        gr = grad(x) if grad is not None else _fd_grad(l, x)
        rel = SYMMETRY_TOL if grad is not None else FD_REL_TOL
        for i, j in _pairs(len(x)):
            dx = x[i] - x[j]
            if dx == 0.0:
                continue
            v = dx * (gr[i] - gr[j])
            tol_terms = abs(dx) * (abs(gr[i]) + abs(gr[j]))
            ms.append(Margin(f"Schur{i + 1}{j + 1}@{k}", float(v), rel * tol_terms))
    return CriterionReport("SchurConvex", np.array(pts), ms)
