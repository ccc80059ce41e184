import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import sym_matrices
from hencky.energies import EnergySpec, MaterialParams, dev_exp, log_full_exp
from hencky.errors import InvalidInputError
from hencky.stress import (
    SHEAR_MODELS,
    biot_becker,
    cauchy_eH,
    cauchy_from_log,
    energy_gradient_fd,
    eos_pressure,
    eos_pressure_slope,
    kirchhoff_becker,
    kirchhoff_eH,
    kirchhoff_from_log,
    linear_cauchy,
    log_strain,
    nominal_stress_slope_1d,
    nominal_stress_uniaxial_1d,
    simple_shear_kinematics,
    simple_shear_sigma12,
    stresses_eH,
    stresses_H,
    vallee_check,
)
from hencky.tensor import deviatoric, lift_2d_to_3d, matrix_exp_sym, polar_decompose

E = math.e
P = MaterialParams(1.0, 2.0, 0.25, 0.3)
FIG9 = MaterialParams(0.39e6, 1e6, 0.243, 1.0)


def _random_logV(rng, radius=2.0):
    A = rng.normal(size=(3, 3))
    X = 0.5 * (A + A.T)
    return X / np.linalg.norm(X) * radius * rng.uniform()


def test_zero_strain_is_stress_free():
    Z = np.zeros((3, 3))
    assert not np.any(kirchhoff_eH(Z, P))
    assert not np.any(cauchy_eH(Z, P))
    assert not np.any(stresses_H(Z, P).kirchhoff)


def test_uniaxial_deviator_form():
    a = 0.7
    X = np.diag([a, -a / 2, -a / 2])
    tau = kirchhoff_eH(X, P)
    assert np.allclose(tau, 2 * P.mu * math.exp(1.5 * P.k * a * a) * X, rtol=1e-14)


def test_pure_dilatation():
    x = 0.6
    for xx in (x, -x):
        sig = cauchy_eH(xx / 3 * np.eye(3), P)
        assert np.allclose(sig, P.kappa * math.exp(P.khat * xx * xx - xx) * xx * np.eye(3), rtol=1e-14)


@given(sym_matrices(3, 2.0))
def test_kirchhoff_cauchy_consistency(X):
    st_ = stresses_eH(X, P)
    assert st_.jacobian == pytest.approx(math.exp(np.trace(X)))
    assert np.allclose(st_.kirchhoff, st_.jacobian * st_.cauchy, rtol=1e-13, atol=1e-13 * np.abs(st_.kirchhoff).max())
    x = np.trace(X)
    assert np.trace(st_.cauchy) == pytest.approx(3 * P.kappa * math.exp(P.khat * x * x - x) * x, rel=1e-12, abs=1e-14)


@given(sym_matrices(3, 3.0))
def test_odd_symmetry(X):
    assert np.array_equal(kirchhoff_eH(-X, P), -kirchhoff_eH(X, P))


def test_dev_and_trace_parts_are_orthogonal():
    rng = np.random.default_rng(3)
    X = _random_logV(rng)
    tau = kirchhoff_eH(X, P)
    D = deviatoric(tau)
    assert np.sum(D * np.eye(3)) == pytest.approx(0.0, abs=1e-13)


@pytest.mark.parametrize("seed", range(20))
def test_gradient_consistency(seed):
    X = _random_logV(np.random.default_rng(seed))
    spec = EnergySpec("eH", P)
    fd = energy_gradient_fd(spec, X)
    tau = kirchhoff_eH(X, P)
    assert np.linalg.norm(fd - tau) <= 1e-6 * max(np.linalg.norm(tau), 1.0)


@pytest.mark.parametrize(
    "spec",
    [EnergySpec("H", P), dev_exp(0.4), log_full_exp(0.3), EnergySpec("eH", P),
     EnergySpec("coupled_exp", P, a=0.3, a_hat=0.7), EnergySpec("vol_exp", P, m=2)],
    ids=lambda s: s.model,
)
def test_spectral_kirchhoff_matches_gradient(spec):
    X = _random_logV(np.random.default_rng(11), 1.5)
    tau = kirchhoff_from_log(spec, X)
    assert np.linalg.norm(energy_gradient_fd(spec, X) - tau) <= 1e-6 * max(1.0, np.linalg.norm(tau))
    assert np.allclose(cauchy_from_log(spec, X) * math.exp(np.trace(X)), tau, rtol=1e-13, atol=1e-14)


def test_spectral_kirchhoff_matches_closed_form():
    X = _random_logV(np.random.default_rng(5))
    assert np.allclose(kirchhoff_from_log(EnergySpec("eH", P), X), kirchhoff_eH(X, P), rtol=1e-13, atol=1e-13)
    assert np.allclose(kirchhoff_from_log(EnergySpec("H", P), X), stresses_H(X, P).kirchhoff, rtol=1e-13, atol=1e-13)


def test_quadratic_limit_of_stress():
    X = _random_logV(np.random.default_rng(7))
    tiny = MaterialParams(1.0, 2.0, 1e-8, 1e-8)
    ref = stresses_H(X, tiny).kirchhoff
    assert np.linalg.norm(kirchhoff_eH(X, tiny) - ref) <= 1e-6 * np.linalg.norm(ref)


@pytest.mark.parametrize("seed", range(10))
def test_vallee_residual(seed):
    rng = np.random.default_rng(100 + seed)
    C = matrix_exp_sym(_random_logV(rng, 0.5))
    assert vallee_check(EnergySpec("eH", P), C) <= 1e-5
    C2 = matrix_exp_sym(_random_logV(rng, 2.0))
    assert vallee_check(EnergySpec("H", P), C2) <= 1e-5


def test_vallee_at_identity():
    assert vallee_check(EnergySpec("eH", P), np.eye(3)) <= 1e-8


def test_stress_grows_along_ray():
    D = np.diag([1.0, -0.5, -0.5])
    vals = [cauchy_eH(t * D, P)[0, 0] for t in (1, 2, 4, 8)]
    assert all(b > 2 * a for a, b in zip(vals, vals[1:]))
    assert vals[-1] > 1e10


def test_log_strain_from_B():
    V = matrix_exp_sym(np.diag([0.3, -0.1, 0.2]))
    assert np.allclose(log_strain(B=V @ V), log_strain(V=V), atol=1e-14)
    with pytest.raises(InvalidInputError):
        log_strain()


def test_becker():
    U = np.diag([E, 1.0, 1 / E])
    assert np.allclose(biot_becker(U, 1.0, 1.0), 2 * np.diag([1.0, 0.0, -1.0]))
    assert not np.any(biot_becker(np.eye(3), 1.0, 1.0))
    # Imbert form: nu = 0 means kappa = 2 mu / 3 and T11 = E log l
    mu = 1.0
    kappa = 2 * mu / 3
    lam = 1.7
    Ub = np.diag([lam, 1.0, 1.0])
    assert biot_becker(Ub, mu, kappa)[0, 0] == pytest.approx(2 * mu * math.log(lam) * (2 / 3) + kappa * math.log(lam))
    assert np.allclose(kirchhoff_becker(np.eye(3), mu, kappa), 0.0)


def test_becker_bound():
    rng = np.random.default_rng(8)
    p = MaterialParams(1.0, 1.5, 1.0, 1.0)
    for _ in range(50):
        X = _random_logV(rng, 0.5)
        V = matrix_exp_sym(X)
        if np.linalg.norm(V - np.eye(3)) >= 1:
            continue
        diff = np.linalg.norm(kirchhoff_becker(V, p.mu, p.kappa) - stresses_H(X, p).kirchhoff)
        assert diff <= np.linalg.norm(V - np.eye(3)) * np.linalg.norm(stresses_H(X, p).kirchhoff) + 1e-14


def test_linear_cauchy():
    g = 0.3
    eps = np.zeros((3, 3))
    eps[0, 1] = eps[1, 0] = g / 2
    assert linear_cauchy(eps, 2.0, 5.0)[0, 1] == pytest.approx(2.0 * g)
    assert np.allclose(linear_cauchy(0.1 * np.eye(3), 2.0, 5.0), 5.0 * 0.3 * np.eye(3))


# simple shear


def test_shear_kinematics_gamma_zero():
    k = simple_shear_kinematics(0.0)
    assert np.allclose(k.U, np.eye(3)) and np.allclose(k.R, np.eye(3))
    assert not np.any(k.logV) and k.lambda1 == 1.0


def test_shear_kinematics_values():
    assert simple_shear_kinematics(1.5).lambda1 == pytest.approx(2.0, rel=1e-15)


@given(st.floats(-5, 5))
def test_shear_kinematics_against_polar(g):
    k = simple_shear_kinematics(g)
    F = np.eye(3)
    F[0, 1] = g
    R, U = polar_decompose(F)
    assert np.allclose(k.U, U, atol=1e-12) and np.allclose(k.R, R, atol=1e-12)
    assert np.allclose(k.V, R @ U @ R.T, atol=1e-12)
    assert np.linalg.det(k.V) == pytest.approx(1.0, abs=1e-12)
    assert abs(np.trace(k.logV)) <= 1e-12
    assert np.allclose(k.R.T @ k.R, np.eye(3), atol=1e-13)
    U2 = lift_2d_to_3d(U[:2, :2])
    assert np.allclose(U2, U, atol=1e-12)


def test_shear_tau_H_closed_form():
    g = 0.8
    k = simple_shear_kinematics(g)
    r = math.sqrt(g * g + 4)
    ref = 2 * P.mu * math.log(k.lambda1) / r * np.array([[g, 2, 0], [2, -g, 0], [0, 0, 0]])
    assert np.allclose(stresses_H(k.logV, P).kirchhoff, ref, atol=1e-14)


def test_shear_sigma12_values():
    assert simple_shear_sigma12(1.5, P, "H") == pytest.approx(1.6 * P.mu * math.log(2), rel=1e-14)
    assert simple_shear_sigma12(1.0, FIG9, "linear") == pytest.approx(0.39e6)
    ref = 2 * (2 * 0.39e6) * math.exp(2 * 0.243 * math.log(2) ** 2) * math.log(2) / 2.5
    assert simple_shear_sigma12(1.5, FIG9, "eH") == pytest.approx(ref, rel=1e-14)
    k = simple_shear_kinematics(1.5)
    assert cauchy_eH(k.logV, FIG9)[0, 1] == pytest.approx(ref, rel=1e-13)


@given(st.floats(-5, 5).filter(lambda g: abs(g) > 1e-6))
def test_shear_ratio_and_sign(g):
    lam1 = simple_shear_kinematics(g).lambda1
    ratio = simple_shear_sigma12(g, P, "eH") / simple_shear_sigma12(g, P, "H")
    assert ratio == pytest.approx(math.exp(2 * P.k * math.log(lam1) ** 2), rel=1e-13)
    for m in SHEAR_MODELS:
        assert math.copysign(1, simple_shear_sigma12(g, P, m)) == math.copysign(1, g)


def test_shear_small_strain_slope():
    for m in SHEAR_MODELS:
        assert simple_shear_sigma12(0.0, P, m) == 0.0
        assert simple_shear_sigma12(1e-7, P, m) / 1e-7 == pytest.approx(P.mu, rel=1e-6)
    with pytest.raises(InvalidInputError):
        simple_shear_sigma12(1.0, P, "ogden")


# hydrostatic / 1D


def test_eos_basics():
    assert eos_pressure(1.0, P, "eH") == 0.0 and eos_pressure(1.0, P, "H") == 0.0
    assert eos_pressure_slope(E, P, "H") == pytest.approx(0.0, abs=1e-15)
    assert eos_pressure_slope(E - 1e-6, P, "H") > 0 > eos_pressure_slope(E + 1e-6, P, "H")
    with pytest.raises(InvalidInputError):
        eos_pressure(0.0, P)


def test_eos_monotone_for_khat_at_least_eighth():
    p = MaterialParams(1.0, 1.0, 1.0, 0.125)
    Js = np.geomspace(1e-3, 1e3, 10_000)
    vals = np.array([eos_pressure(J, p) for J in Js])
    assert np.all(np.diff(vals) > 0)


def test_eos_pressure_matches_cauchy():
    J = 1.4
    x = math.log(J)
    assert eos_pressure(J, P) == pytest.approx(cauchy_eH(x / 3 * np.eye(3), P)[0, 0], rel=1e-14)


def test_nominal_stress():
    assert nominal_stress_uniaxial_1d(1.0, 1.0, 0.3) == 0.0
    lams = np.linspace(1.0, 20.0, 10_000)
    assert min(nominal_stress_slope_1d(l, 1.0, 0.05) for l in lams) < 0
    assert min(nominal_stress_slope_1d(l, 1.0, 0.125) for l in lams) >= 0
    # k -> 0 recovers the classical Hencky nominal stress 2 mu log(l) / l
    for l in (0.5, 2.0, 5.0):
        assert nominal_stress_uniaxial_1d(l, 1.0, 1e-8) == pytest.approx(2 * math.log(l) / l, rel=1e-6)
    with pytest.raises(InvalidInputError):
        nominal_stress_uniaxial_1d(0.0, 1.0, 1.0)
