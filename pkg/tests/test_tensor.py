import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import deformation_gradients, sym_matrices
from hencky.errors import InvalidInputError, NotPositiveDefiniteError, OrientationError
from hencky.tensor import (
    PrincipalState,
    SymTensor,
    dev_norm_sq,
    dev_norm_sq_from_log,
    deviatoric,
    geodesic_invariants,
    lift_2d_to_3d,
    matrix_exp_sym,
    matrix_log_spd,
    matrix_sqrt_spd,
    offdiag,
    polar_decompose,
    principal_stretches,
    spectral_decompose,
    stretches_equal,
)


@given(sym_matrices(3, 3.0))
def test_exp_log_round_trip_3d(X):
    assert np.allclose(matrix_log_spd(matrix_exp_sym(X)), X, atol=1e-10)


@given(sym_matrices(2, 3.0))
def test_exp_log_round_trip_2d(X):
    assert np.allclose(matrix_log_spd(matrix_exp_sym(X)), X, atol=1e-11)


@given(sym_matrices(3, 5.0))
def test_spectral_reconstructs(S):
    d = spectral_decompose(S)
    q = d.frame
    assert np.allclose(q.T @ q, np.eye(3), atol=1e-12)
    assert np.allclose((q * d.eigenvalues) @ q.T, S, atol=1e-11 * (1 + np.abs(S).max()))
    assert np.all(np.diff(d.eigenvalues) >= 0)
    assert np.allclose(d.eigenvalues, np.linalg.eigvalsh(S), atol=1e-11 * (1 + np.abs(S).max()))


def test_repeated_eigenvalues():
    S = np.diag([2.0, 2.0, 5.0])
    d = spectral_decompose(S)
    assert np.allclose(d.eigenvalues, [2, 2, 5])
    assert np.allclose(matrix_log_spd(np.eye(3) * math.e), np.eye(3))


def test_sqrt():
    S = np.array([[4.0, 1.0, 0.0], [1.0, 3.0, 0.5], [0.0, 0.5, 2.0]])
    r = matrix_sqrt_spd(S)
    assert np.allclose(r @ r, S, atol=1e-13)


def test_log_refuses_indefinite():
    with pytest.raises(NotPositiveDefiniteError):
        matrix_log_spd(np.diag([1.0, -1.0, 2.0]))


def test_nonsymmetric_refused():
    with pytest.raises(InvalidInputError):
        matrix_log_spd(np.array([[1.0, 0.2, 0], [0, 1, 0], [0, 0, 1]]))


@given(deformation_gradients())
def test_polar_decomposition(F):
    R, U = polar_decompose(F)
    assert np.allclose(R @ U, F, atol=1e-11)
    assert np.allclose(R.T @ R, np.eye(3), atol=1e-11)
    assert np.linalg.det(R) == pytest.approx(1.0, abs=1e-11)
    assert np.all(np.linalg.eigvalsh(U) > 0)
    p = principal_stretches(F)
    assert np.allclose(np.sort(p.array), np.sort(np.linalg.svd(F, compute_uv=False)), rtol=1e-11)


def test_polar_rejects_reflection():
    with pytest.raises(OrientationError):
        polar_decompose(np.diag([1.0, 1.0, -1.0]))


def test_geodesic_invariants_simple():
    U = np.diag([math.e, 1.0, 1.0])
    inv = geodesic_invariants(U)
    assert inv.K1 == pytest.approx(1.0)
    assert inv.K2 == pytest.approx(math.sqrt(2.0 / 3.0))
    # uniaxial extension sits at the K3 = 1 extreme
    assert inv.K3 == pytest.approx(1.0)


@given(st.lists(st.floats(-4, 4), min_size=3, max_size=3))
def test_dev_norm_from_log_matches_matrix(x):
    assert dev_norm_sq_from_log(x) == pytest.approx(dev_norm_sq(np.diag(x)), abs=1e-12)


def test_deviatoric_traceless():
    A = np.arange(9.0).reshape(3, 3)
    assert np.trace(deviatoric(A)) == pytest.approx(0.0, abs=1e-14)


def test_lift_preserves_det():
    U2 = np.array([[2.0, 0.3], [0.3, 1.0]])
    U3 = lift_2d_to_3d(U2)
    assert U3[2, 2] == pytest.approx(math.sqrt(np.linalg.det(U2)))


def test_symtensor_round_trip():
    S = SymTensor(3, (1, 2, 3, 4, 5, 6))
    assert np.array_equal(S.matrix, S.matrix.T)
    assert SymTensor.from_matrix(S.matrix) == S
    with pytest.raises(InvalidInputError):
        SymTensor(3, (1, 2, 3))


def test_principal_state_validation():
    with pytest.raises(InvalidInputError):
        PrincipalState((1.0, -1.0, 1.0))
    p = PrincipalState.from_log([1.0, 2.0])
    assert p.scaled(10.0).array == pytest.approx(10.0 * p.array)
    assert stretches_equal(1.0, 1.0 + 1e-12)
    assert not stretches_equal(1.0, 1.0 + 1e-6)


def test_offdiag():
    a = offdiag(0.5)
    assert a[0, 1] == a[1, 0] == 0.5 and a.sum() == 1.0
