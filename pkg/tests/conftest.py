import numpy as np
from hypothesis import settings
from hypothesis import strategies as st

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

finite = st.floats(-3.0, 3.0, allow_nan=False, allow_infinity=False)


def log_vectors(n, lo=-3.0, hi=3.0):
    return st.lists(st.floats(lo, hi, allow_nan=False), min_size=n, max_size=n).map(np.array)


@st.composite
def sym_matrices(draw, n=3, bound=2.0):
    vals = draw(st.lists(st.floats(-bound, bound, allow_nan=False), min_size=n * (n + 1) // 2,
                         max_size=n * (n + 1) // 2))
    a = np.zeros((n, n))
    iu = np.triu_indices(n)
    a[iu] = vals
    return a + np.triu(a, 1).T


@st.composite
def deformation_gradients(draw, n=3):
    """F = R U with a random rotation and a log-stretch U of moderate size."""
    X = draw(sym_matrices(n, 1.0))
    w, q = np.linalg.eigh(X)
    U = (q * np.exp(w)) @ q.T
    A = draw(sym_matrices(n, 1.0))
    skew = np.triu(A, 1) - np.triu(A, 1).T
    w2, q2 = np.linalg.eig(skew)
    R = np.real((q2 * np.exp(w2)) @ np.linalg.inv(q2))
    return R @ U
