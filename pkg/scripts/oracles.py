#!/usr/bin/env python3
"""Independent high-precision reference values, computed with mpmath.

Nothing here imports the package. Derivatives come from mpmath's numerical
differentiation at 50 digits and roots from mp.findroot, so the frozen
numbers check the library's closed forms rather than repeat them.

    python3 scripts/oracles.py > tests/frozen.py
"""

import pprint

import mpmath as mp

mp.mp.dps = 50
E = mp.e


# -- principal-stretch energies g(l1, ..., ln) --------------------------------


def dev_sq(x):
    m = sum(x) / len(x)
    return sum((xi - m) ** 2 for xi in x)


def g_eH(mu, kappa, k, khat):
    def g(*lam):
        x = [mp.log(l) for l in lam]
        return mu / k * mp.exp(k * dev_sq(x)) + kappa / (2 * khat) * mp.exp(khat * sum(x) ** 2)
    return g


def g_H(mu, kappa):
    def g(*lam):
        x = [mp.log(l) for l in lam]
        return mu * dev_sq(x) + kappa / 2 * sum(x) ** 2
    return g


def g_dev(k):
    def g(*lam):
        return mp.exp(k * dev_sq([mp.log(l) for l in lam]))
    return g


def g_full(k):
    def g(*lam):
        return mp.exp(k * sum(mp.log(l) ** 2 for l in lam))
    return g


def partials(g, lam):
    """g, grad and Hessian in the stretches."""
    n = len(lam)
    lam = [mp.mpf(l) for l in lam]
    grad = []
    for i in range(n):
        o = [0] * n
        o[i] = 1
        grad.append(mp.diff(g, lam, tuple(o)))
    hess = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            o = [0] * n
            o[i] += 1
            o[j] += 1
            hess[i][j] = mp.diff(g, lam, tuple(o))
    return g(*lam), grad, hess


def exact_stretch(x):
    return mp.e ** mp.mpf(x)


# -- tables ------------------------------------------------------------------


DERIV_CASES = {
    "eH3": (g_eH(1, 2, mp.mpf(1) / 4, mp.mpf(3) / 10), (0.3, -0.2, 0.5)),
    "eH3b": (g_eH(mp.mpf("0.7"), 5, 1, mp.mpf(1) / 6), (-0.4, 0.1, 0.9)),
    "H3": (g_H(1, 2), (0.3, -0.2, 0.5)),
    "dev3": (g_dev(mp.mpf(1) / 4), (1.1, 0.7, -0.1)),
    "dev2": (g_dev(mp.mpf(1) / 4), (0.8, -0.6)),
    "full2": (g_full(1), (0.2, 1.1)),
}


def derivative_table():
    out = {}
    for name, (g, x) in DERIV_CASES.items():
        lam = [exact_stretch(mp.mpf(str(v))) for v in x]
        v, gr, he = partials(g, lam)
        out[name] = {
            "log_stretches": x,
            "value": float(v),
            "grad": [float(t) for t in gr],
            "hess": [[float(t) for t in row] for row in he],
        }
    return out


def energy_simple_shear(gamma, mu, kappa, k, khat):
    F = mp.matrix([[1, gamma, 0], [0, 1, 0], [0, 0, 1]])
    C = F.T * F
    w, _ = mp.eigsy(C)
    lam = [mp.sqrt(w[i]) for i in range(3)]
    return g_eH(mu, kappa, k, khat)(*lam)


def buliga_form_scaled():
    """Form at l = (e^2, e^11), a = (-e^15, e^22) for e^{log^2 l1 + log^2 l2}, over 2 e^125."""
    g = g_full(1)
    lam = [E**2, E**11]
    _, g1, g2 = partials(g, lam)
    d_phi = [lam[i] * g1[i] for i in range(2)]
    den = lam[0] ** 2 - lam[1] ** 2
    Gm = (d_phi[0] - d_phi[1]) / den
    Hb = (lam[1] * g1[0] - lam[0] * g1[1]) / den
    a = [-(E**15), E**22]
    quad = sum(a[i] * g2[i][j] * a[j] for i in range(2) for j in range(2)) + 2 * Hb * a[0] * a[1]
    quad += 2 * Gm * abs(a[0]) * abs(a[1])
    return quad / (2 * E**125)


def dacorogna_diagonal(k):
    """g_ii e^{-k ||dev x||^2} at (e^11, e^7, e^-1) for e^{k ||dev_3 log U||^2}."""
    x = [11, 7, -1]
    lam = [E**v for v in x]
    _, _, he = partials(g_dev(k), lam)
    s = mp.exp(k * dev_sq([mp.mpf(v) for v in x]))
    return [float(he[i][i] / s) for i in range(3)]


def tsts_form(t, q):
    """d/ds <sigma_eH(X + sH), H> at s = 0 for mu = kappa = k = khat = 1."""

    def sigma(X):
        x = X[0, 0] + X[1, 1] + X[2, 2]
        D = X - x / 3 * mp.eye(3)
        d2 = sum(D[i, j] ** 2 for i in range(3) for j in range(3))
        return 2 * mp.exp(d2 - x) * D + mp.exp(x * x - x) * x * mp.eye(3)

    X = mp.matrix([[0, t, 0], [t, 0, 0], [0, 0, 0]])
    H = mp.matrix([[q / mp.mpf(3), 1, 0], [1, q / mp.mpf(3), 0], [0, 0, q / mp.mpf(3)]])

    def f(s):
        S = sigma(X + s * H)
        return sum(S[i, j] * H[i, j] for i in range(3) for j in range(3))

    return mp.diff(f, 0)


def uniaxial(s_over_E, nu, k, khat):
    """(a, x, nu_hat) for sigma = diag(s, 0, 0), E = 1."""
    x = mp.findroot(lambda x: mp.exp(khat * x * x - x) * x - (1 - 2 * nu) * s_over_E, 0.1)
    a = mp.findroot(
        lambda a: mp.exp(mp.mpf(3) / 2 * k * a * a - x) * mp.mpf(3) / 2 * a - (1 + nu) * s_over_E, 0.3
    )
    l11, l22 = a + x / 3, -a / 2 + x / 3
    return float(a), float(x), float(-l22 / l11)


def feasibility_three_parameter(sigma_tilde_y, kappa_over_mu):
    c = 2 * mp.mpf(sigma_tilde_y) ** 2 / 3
    f = lambda k: mp.exp(c * k) - kappa_over_mu / 4 * (16 * k - 3)
    lo = mp.findroot(f, 0.3)
    hi = mp.findroot(f, mp.mpf(1) / c * 10)
    return float(lo), float(hi)


def pure_shear_gamma(s, mu, k):
    return float(mp.findroot(lambda g: mu * g * mp.exp(k * g * g / 2) - s, 1))


def main():
    third = mp.mpf(1) / 3
    vals = {
        "derivs": derivative_table(),
        "W_eH_shear_gamma1": float(energy_simple_shear(1, 1, 2, mp.mpf(1) / 4, mp.mpf(1) / 4)),
        "W_eH_shear_gamma3": float(energy_simple_shear(3, mp.mpf("0.39e6"), mp.mpf("1e6"), mp.mpf("0.243"), 1)),
        "buliga_scaled": float(buliga_form_scaled()),
        "dacorogna_diag_k025": dacorogna_diagonal(mp.mpf(1) / 4),
        "dacorogna_diag_k1": dacorogna_diagonal(mp.mpf(1)),
        "tsts_form_t3_q100": float(tsts_form(3, 100)),
        "uniaxial_nu13_k025_kh16_s05": uniaxial(mp.mpf("0.5"), third, mp.mpf(1) / 4, mp.mpf(1) / 6),
        "uniaxial_nu03_k1_kh1_s2": uniaxial(mp.mpf(2), mp.mpf("0.3"), 1, 1),
        "feasibility_sharp_s01_r83": feasibility_three_parameter(mp.sqrt(mp.mpf("1.5")) * mp.mpf("0.1"), mp.mpf(8) / 3),
        "pure_shear_s3_mu1_k05": pure_shear_gamma(3, 1, mp.mpf("0.5")),
    }
    print('"""Reference values frozen from scripts/oracles.py (mpmath, 50 digits)."""')
    print()
    print("ORACLE = " + pprint.pformat(vals, sort_dicts=False, width=100))


if __name__ == "__main__":
    main()
