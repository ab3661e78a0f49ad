"""Inner loops of the matrix-free operators.

Every kernel exists twice: a numba ``@njit`` version and a pure-numpy
version with identical semantics. The numba path is used unless numba is
missing or ``JFT_DISABLE_NUMBA`` is set to a truthy value before import.
Both paths stay importable so tests and the benchmark can compare them.

Arrays are float64 and C-contiguous; graph operators are CSR triples
``(indptr, indices, data)`` and signals are ``(N, T)`` matrices.
"""

import os

import numpy as np

_FLAG = os.environ.get("JFT_DISABLE_NUMBA", "").strip().lower()
NUMBA_DISABLED_BY_ENV = _FLAG not in ("", "0", "false", "no")

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and not NUMBA_DISABLED_BY_ENV


# ---------------------------------------------------------------------------
# pure numpy


def csr_matmat_numpy(indptr, indices, data, X):
    n_rows = indptr.shape[0] - 1
    rows = np.repeat(np.arange(n_rows), np.diff(indptr))
    out = np.zeros((n_rows, X.shape[1]))
    np.add.at(out, rows, data[:, None] * X[indices])
    return out


def ring_diff_numpy(X):
    if X.shape[1] == 1:
        return np.zeros_like(X)
    return X - np.roll(X, 1, axis=1)


def local_variation_sq_numpy(indptr, indices, weights, X):
    n_rows = indptr.shape[0] - 1
    rows = np.repeat(np.arange(n_rows), np.diff(indptr))
    diff = X[indices] - X[rows]
    out = np.zeros_like(X)
    np.add.at(out, rows, weights[:, None] * diff * diff)
    temporal = np.roll(X, 1, axis=1) - X
    return out + temporal * temporal


# ---------------------------------------------------------------------------
# numba


if HAVE_NUMBA:

    @njit(cache=True)
    def csr_matmat_numba(indptr, indices, data, X):
        n_rows = indptr.shape[0] - 1
        T = X.shape[1]
        out = np.zeros((n_rows, T))
        for i in range(n_rows):
            for p in range(indptr[i], indptr[i + 1]):
                j = indices[p]
                w = data[p]
                for t in range(T):
                    out[i, t] += w * X[j, t]
        return out

    @njit(cache=True)
    def ring_diff_numba(X):
        N, T = X.shape
        out = np.zeros((N, T))
        if T == 1:
            return out
        for n in range(N):
            for t in range(T):
                out[n, t] = X[n, t] - X[n, t - 1]
        return out

    @njit(cache=True)
    def local_variation_sq_numba(indptr, indices, weights, X):
        N, T = X.shape
        out = np.zeros((N, T))
        for n in range(N):
            for t in range(T):
                acc = 0.0
                for p in range(indptr[n], indptr[n + 1]):
                    d = X[indices[p], t] - X[n, t]
                    acc += weights[p] * d * d
                d = X[n, t - 1] - X[n, t]
                out[n, t] = acc + d * d
        return out

else:  # pragma: no cover
    csr_matmat_numba = csr_matmat_numpy
    ring_diff_numba = ring_diff_numpy
    local_variation_sq_numba = local_variation_sq_numpy


BACKENDS = {
    "numpy": {
        "csr_matmat": csr_matmat_numpy,
        "ring_diff": ring_diff_numpy,
        "local_variation_sq": local_variation_sq_numpy,
    },
    "numba": {
        "csr_matmat": csr_matmat_numba,
        "ring_diff": ring_diff_numba,
        "local_variation_sq": local_variation_sq_numba,
    },
}

DEFAULT_BACKEND = "numba" if USE_NUMBA else "numpy"


def get_kernel(name, backend=None):
    return BACKENDS[backend or DEFAULT_BACKEND][name]


def csr_arrays(M):
    """CSR triple of a scipy sparse matrix with the dtypes the kernels expect."""
    M = M.tocsr()
    M.sort_indices()
    return (
        np.ascontiguousarray(M.indptr, dtype=np.int64),
        np.ascontiguousarray(M.indices, dtype=np.int64),
        np.ascontiguousarray(M.data, dtype=np.float64),
    )


def csr_matmat(indptr, indices, data, X, backend=None):
    """``M @ X`` for CSR ``M``; complex ``X`` is split into real and imaginary parts."""
    kern = get_kernel("csr_matmat", backend)
    if np.iscomplexobj(X):
        re = kern(indptr, indices, data, np.ascontiguousarray(X.real, dtype=np.float64))
        im = kern(indptr, indices, data, np.ascontiguousarray(X.imag, dtype=np.float64))
        return re + 1j * im
    return kern(indptr, indices, data, np.ascontiguousarray(X, dtype=np.float64))


def ring_diff(X, backend=None):
    """Apply the directed-ring Laplacian along time: ``X[:, t] - X[:, t-1]``."""
    kern = get_kernel("ring_diff", backend)
    if np.iscomplexobj(X):
        re = kern(np.ascontiguousarray(X.real, dtype=np.float64))
        im = kern(np.ascontiguousarray(X.imag, dtype=np.float64))
        return re + 1j * im
    return kern(np.ascontiguousarray(X, dtype=np.float64))


def local_variation_sq(indptr, indices, weights, X, backend=None):
    kern = get_kernel("local_variation_sq", backend)
    return kern(indptr, indices, weights, np.ascontiguousarray(X, dtype=np.float64))
