"""Small symmetric tensor algebra for n in {2, 3}.

Symmetric tensors travel through the library as plain ``(n, n)`` float
arrays. ``SymTensor`` is the validated, immutable carrier used at the
boundaries (CLI parsing, reports); every function here accepts either.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import (
    InvalidInputError,
    NotPositiveDefiniteError,
    OrientationError,
    UnsupportedDimensionError,
)

EIG_FLOOR = 1e-300
JACOBI_TOL = 1e-14
EQUAL_TOL = 1e-9


@dataclass(frozen=True)
class SymTensor:
    """Symmetric n x n tensor stored by its upper triangle (row-major)."""

    dim: int
    entries: tuple

    def __post_init__(self):
        if self.dim not in (2, 3):
            raise UnsupportedDimensionError(f"dim must be 2 or 3, got {self.dim}")
        n_expected = self.dim * (self.dim + 1) // 2
        if len(self.entries) != n_expected:
            raise InvalidInputError(
                f"dim {self.dim} needs {n_expected} entries, got {len(self.entries)}"
            )
        vals = tuple(float(v) for v in self.entries)
        if not all(math.isfinite(v) for v in vals):
            raise InvalidInputError("tensor entries must be finite")
        object.__setattr__(self, "entries", vals)

    @classmethod
    def from_matrix(cls, m) -> "SymTensor":
        a = np.asarray(m, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise InvalidInputError(f"expected a square matrix, got shape {a.shape}")
        if not np.allclose(a, a.T, rtol=1e-12, atol=1e-14 * (1 + np.abs(a).max())):
            raise InvalidInputError("matrix is not symmetric")
        n = a.shape[0]
        iu = np.triu_indices(n)
        return cls(n, tuple(a[iu]))

    @property
    def matrix(self) -> np.ndarray:
        n = self.dim
        a = np.zeros((n, n))
        iu = np.triu_indices(n)
        a[iu] = self.entries
        a.T[iu] = self.entries
        return a

    def __array__(self, dtype=None, copy=None):
        return self.matrix if dtype is None else self.matrix.astype(dtype)


@dataclass(frozen=True)
class SpectralDecomp:
    eigenvalues: np.ndarray  # ascending
    frame: np.ndarray  # columns are eigenvectors


@dataclass(frozen=True)
class PrincipalState:
    """Positive principal stretches with an optional orthonormal frame."""

    stretches: tuple
    frame: Optional[np.ndarray] = field(default=None, compare=False)

    def __post_init__(self):
        lam = tuple(float(v) for v in self.stretches)
        if len(lam) not in (2, 3):
            raise UnsupportedDimensionError("need 2 or 3 principal stretches")
        if not all(math.isfinite(v) and v > 0 for v in lam):
            raise InvalidInputError(f"principal stretches must be positive, got {lam}")
        object.__setattr__(self, "stretches", lam)

    @classmethod
    def from_log(cls, x: Sequence[float]) -> "PrincipalState":
        return cls(tuple(math.exp(v) for v in x))

    @property
    def dim(self) -> int:
        return len(self.stretches)

    @property
    def array(self) -> np.ndarray:
        return np.array(self.stretches)

    @property
    def log_stretches(self) -> np.ndarray:
        return np.log(self.array)

    def coincident(self, i: int, j: int) -> bool:
        return stretches_equal(self.stretches[i], self.stretches[j])

    def scaled(self, a: float) -> "PrincipalState":
        return PrincipalState(tuple(a * v for v in self.stretches), self.frame)


@dataclass(frozen=True)
class GeodesicInvariants:
    K1: float  # amount of dilatation, tr log U
    K2: float  # magnitude of distortion, ||dev_3 log U||
    K3: float  # mode of distortion in [-1, 1]


def stretches_equal(a: float, b: float) -> bool:
    """Coincidence flag consumed by the criteria's lambda_i = lambda_j branches."""
    return abs(a - b) <= EQUAL_TOL * max(1.0, abs(a) + abs(b))


def as_array(S) -> np.ndarray:
    a = np.array(S, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] not in (2, 3):
        raise InvalidInputError(f"expected a 2x2 or 3x3 tensor, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise InvalidInputError("tensor entries must be finite")
    return a


def as_sym(S) -> np.ndarray:
    a = as_array(S)
    scale = 1.0 + np.abs(a).max()
    if np.abs(a - a.T).max() > 1e-12 * scale:
        raise InvalidInputError("tensor is not symmetric")
    return 0.5 * (a + a.T)


def _jacobi(a: np.ndarray):
    """Cyclic Jacobi sweeps; returns (eigenvalues, eigenvectors) unsorted."""
    a = a.copy()
    n = a.shape[0]
    v = np.eye(n)
    norm = np.linalg.norm(a)
    if norm == 0.0:
        return np.zeros(n), v
    for _ in range(64):
        off = math.sqrt(sum(a[p, q] ** 2 for p in range(n) for q in range(n) if p != q))
        if off <= JACOBI_TOL * norm:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                diff = float(a[q, q] - a[p, p])
                if abs(diff) > 1e150 * abs(apq):
                    t = float(apq) / diff
                else:
                    theta = diff / (2.0 * float(apq))
                    t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                rot = np.eye(n)
                rot[p, p] = c
                rot[q, q] = c
                rot[p, q] = s
                rot[q, p] = -s
                a = rot.T @ a @ rot
                a[p, q] = a[q, p] = 0.0
                v = v @ rot
    return np.diag(a).copy(), v


def _eig2(a: np.ndarray):
    """Closed-form symmetric 2x2 eigen-solve."""
    p, r, q = a[0, 0], a[0, 1], a[1, 1]
    mean = 0.5 * (p + q)
    half = 0.5 * (p - q)
    rad = math.hypot(half, r)
    if rad == 0.0:
        return np.array([p, q]), np.eye(2)
    lo, hi = mean - rad, mean + rad
    # rotation angle of the eigenvector belonging to `hi`
    phi = 0.5 * math.atan2(r, half)
    c, s = math.cos(phi), math.sin(phi)
    vecs = np.array([[-s, c], [c, s]])
    return np.array([lo, hi]), vecs


def spectral_decompose(S) -> SpectralDecomp:
    a = as_sym(S)
    if a.shape[0] == 2:
        w, v = _eig2(a)
    else:
        w, v = _jacobi(a)
    order = np.argsort(w, kind="stable")
    w, v = w[order], v[:, order]
    if np.linalg.det(v) < 0:
        v[:, 0] = -v[:, 0]
    return SpectralDecomp(w, v)


def _map_spectrum(S, fn, require_positive=False) -> np.ndarray:
    d = spectral_decompose(S)
    w = d.eigenvalues
    if require_positive and np.any(w <= EIG_FLOOR):
        raise NotPositiveDefiniteError(f"eigenvalues must be > {EIG_FLOOR}, got {w}")
    q = d.frame
    out = (q * fn(w)) @ q.T
    return 0.5 * (out + out.T)


def matrix_log_spd(S) -> np.ndarray:
    return _map_spectrum(S, np.log, require_positive=True)


def matrix_exp_sym(S) -> np.ndarray:
    return _map_spectrum(S, np.exp)


def matrix_sqrt_spd(S) -> np.ndarray:
    return _map_spectrum(S, np.sqrt, require_positive=True)


def deviatoric(S) -> np.ndarray:
    a = as_array(S)
    n = a.shape[0]
    return a - (np.trace(a) / n) * np.eye(n)


def dev_norm_sq(S) -> float:
    d = deviatoric(S)
    return float(np.sum(d * d))


def dev_norm_sq_from_log(x: Sequence[float]) -> float:
    """(1/n) sum_{i<j} (x_i - x_j)^2, the squared deviator norm of diag(x)."""
    x = np.asarray(x, dtype=float)
    n = len(x)
    return float(sum((x[i] - x[j]) ** 2 for i in range(n) for j in range(i + 1, n)) / n)


def dev_norm_sq_from_stretches(p) -> float:
    if not isinstance(p, PrincipalState):
        p = PrincipalState(tuple(p))
    return dev_norm_sq_from_log(p.log_stretches)


def geodesic_invariants(U) -> GeodesicInvariants:
    a = as_sym(U)
    if a.shape[0] != 3:
        raise UnsupportedDimensionError("geodesic invariants are defined for dim 3")
    L = matrix_log_spd(a)
    K1 = float(np.trace(L))
    D = deviatoric(L)
    K2 = float(np.linalg.norm(D))
    if K2 == 0.0:
        return GeodesicInvariants(K1, 0.0, 0.0)
    K3 = 3.0 * math.sqrt(6.0) * float(np.linalg.det(D / K2))
    return GeodesicInvariants(K1, K2, K3)


def principal_stretches(F) -> PrincipalState:
    """Singular values of F (eigenvalues of U) with the frame of U."""
    a = as_array(F)
    if np.linalg.det(a) <= 0:
        raise OrientationError("det F must be positive")
    d = spectral_decompose(a.T @ a)
    if np.any(d.eigenvalues <= EIG_FLOOR):
        raise NotPositiveDefiniteError("F^T F is not positive-definite")
    return PrincipalState(tuple(np.sqrt(d.eigenvalues)), d.frame)


def polar_decompose(F):
    """Right polar decomposition F = R U; returns (R, U)."""
    a = as_array(F)
    if np.linalg.det(a) <= 0:
        raise OrientationError("det F must be positive")
    d = spectral_decompose(a.T @ a)
    w = d.eigenvalues
    if np.any(w <= EIG_FLOOR):
        raise NotPositiveDefiniteError("F^T F is not positive-definite")
    q = d.frame
    lam = np.sqrt(w)
    U = (q * lam) @ q.T
    U = 0.5 * (U + U.T)
    Uinv = (q / lam) @ q.T
    R = a @ Uinv
    return R, U


def lift_2d_to_3d(U2) -> np.ndarray:
    a = as_sym(U2)
    if a.shape[0] != 2:
        raise UnsupportedDimensionError("lift expects a 2x2 tensor")
    w = spectral_decompose(a).eigenvalues
    if np.any(w <= EIG_FLOOR):
        raise NotPositiveDefiniteError("U2 must be positive-definite")
    out = np.zeros((3, 3))
    out[:2, :2] = a
    out[2, 2] = math.sqrt(float(np.prod(w)))
    return out


def offdiag(t: float, n: int = 3, i: int = 0, j: int = 1) -> np.ndarray:
    a = np.zeros((n, n))
    a[i, j] = a[j, i] = t
    return a
