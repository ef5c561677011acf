"""Hot numeric loops, each with a numba and a pure-numpy implementation.

The public names (``eval_series``, ``eval_cells``, ``symbol_table``,
``project``) dispatch to the backend chosen in :mod:`stepode._accel`. Both
implementations stay importable (``*_numpy`` / ``*_numba``) so tests and the
benchmark can compare them directly.

All kernels take the angular step ``w = pi / l`` so harmonic ``k`` has
frequency ``k * w``.
"""

import math

import numpy as np

from ._accel import USE_NUMBA, njit

__all__ = [
    "BACKEND",
    "eval_series",
    "eval_cells",
    "symbol_table",
    "project",
]


# ---------------------------------------------------------------------------
# series evaluation with compensated (Neumaier) accumulation, ascending k


def eval_series_numpy(half_c0, cos_c, sin_c, w, x):
    x = np.asarray(x, dtype=np.float64)
    total = np.full(x.shape, float(half_c0))
    comp = np.zeros(x.shape)
    for k in range(cos_c.shape[0]):
        theta = ((k + 1) * w) * x
        for term in (cos_c[k] * np.cos(theta), sin_c[k] * np.sin(theta)):
            t = total + term
            big = np.abs(total) >= np.abs(term)
            comp += np.where(big, (total - t) + term, (term - t) + total)
            total = t
    return total + comp


@njit
def eval_series_numba(half_c0, cos_c, sin_c, w, x):
    n = x.shape[0]
    out = np.empty(n)
    K = cos_c.shape[0]
    for i in range(n):
        total = half_c0
        comp = 0.0
        for k in range(K):
            theta = ((k + 1) * w) * x[i]
            for j in range(2):
                if j == 0:
                    term = cos_c[k] * math.cos(theta)
                else:
                    term = sin_c[k] * math.sin(theta)
                t = total + term
                if abs(total) >= abs(term):
                    comp += (total - t) + term
                else:
                    comp += (term - t) + total
                total = t
        out[i] = total + comp
    return out


# ---------------------------------------------------------------------------
# piecewise evaluation: point i uses the series of cell idx[i]


def eval_cells_numpy(idx, half, cos_c, sin_c, w, x):
    x = np.asarray(x, dtype=np.float64)
    total = half[idx].astype(np.float64)
    comp = np.zeros(x.shape)
    C = cos_c[idx]
    D = sin_c[idx]
    for k in range(cos_c.shape[1]):
        theta = ((k + 1) * w) * x
        for term in (C[:, k] * np.cos(theta), D[:, k] * np.sin(theta)):
            t = total + term
            big = np.abs(total) >= np.abs(term)
            comp += np.where(big, (total - t) + term, (term - t) + total)
            total = t
    return total + comp


@njit
def eval_cells_numba(idx, half, cos_c, sin_c, w, x):
    n = x.shape[0]
    out = np.empty(n)
    K = cos_c.shape[1]
    for i in range(n):
        c = idx[i]
        total = half[c]
        comp = 0.0
        for k in range(K):
            theta = ((k + 1) * w) * x[i]
            for j in range(2):
                if j == 0:
                    term = cos_c[c, k] * math.cos(theta)
                else:
                    term = sin_c[c, k] * math.sin(theta)
                t = total + term
                if abs(total) >= abs(term):
                    comp += (total - t) + term
                else:
                    comp += (term - t) + total
                total = t
        out[i] = total + comp
    return out


# ---------------------------------------------------------------------------
# harmonic symbols: sigma (even indices), omega (odd indices) and the
# magnitude of the summed terms, for every row of coefficients and k = 1..K


def symbol_table_numpy(A, K, w):
    A = np.asarray(A, dtype=np.float64)
    rows, order1 = A.shape
    t = np.arange(1, K + 1) * w
    sigma = np.zeros((rows, K))
    omega = np.zeros((rows, K))
    scale = np.zeros((rows, K))
    p = np.ones(K)
    for n in range(order1):
        sign = -1.0 if (n // 2) % 2 else 1.0
        term = (sign * A[:, n])[:, None] * p[None, :]
        if n % 2 == 0:
            sigma += term
        else:
            omega += term
        scale += np.abs(A[:, n])[:, None] * p[None, :]
        p = p * t
    return sigma, omega, scale


@njit
def symbol_table_numba(A, K, w):
    rows, order1 = A.shape
    sigma = np.zeros((rows, K))
    omega = np.zeros((rows, K))
    scale = np.zeros((rows, K))
    for r in range(rows):
        for k in range(K):
            t = (k + 1) * w
            p = 1.0
            for n in range(order1):
                sign = -1.0 if (n // 2) % 2 else 1.0
                term = (sign * A[r, n]) * p
                if n % 2 == 0:
                    sigma[r, k] += term
                else:
                    omega[r, k] += term
                scale[r, k] += abs(A[r, n]) * p
                p = p * t
    return sigma, omega, scale


# ---------------------------------------------------------------------------
# quadrature projection onto 1, cos(k w x), sin(k w x)


def project_numpy(g, x, weights, K, w):
    gw = np.asarray(g, dtype=np.float64) * weights
    mean = gw.sum()
    theta = np.outer(np.arange(1, K + 1) * w, x)
    return mean, np.cos(theta) @ gw, np.sin(theta) @ gw


@njit
def project_numba(g, x, weights, K, w):
    n = x.shape[0]
    c = np.zeros(K)
    d = np.zeros(K)
    mean = 0.0
    for i in range(n):
        gw = g[i] * weights[i]
        mean += gw
        for k in range(K):
            theta = ((k + 1) * w) * x[i]
            c[k] += math.cos(theta) * gw
            d[k] += math.sin(theta) * gw
    return mean, c, d


BACKEND = "numba" if USE_NUMBA else "numpy"

if USE_NUMBA:
    _eval_series, _eval_cells = eval_series_numba, eval_cells_numba
    _symbol_table, _project = symbol_table_numba, project_numba
else:
    _eval_series, _eval_cells = eval_series_numpy, eval_cells_numpy
    _symbol_table, _project = symbol_table_numpy, project_numpy


def _f64(a):
    return np.ascontiguousarray(a, dtype=np.float64)


def eval_series(half_c0, cos_c, sin_c, w, x):
    x = np.asarray(x, dtype=np.float64)
    out = _eval_series(float(half_c0), _f64(cos_c), _f64(sin_c), float(w), _f64(x.ravel()))
    return out.reshape(x.shape)


def eval_cells(idx, half, cos_c, sin_c, w, x):
    x = np.asarray(x, dtype=np.float64)
    idx = np.ascontiguousarray(np.asarray(idx).ravel(), dtype=np.int64)
    out = _eval_cells(idx, _f64(half), _f64(cos_c), _f64(sin_c), float(w), _f64(x.ravel()))
    return out.reshape(x.shape)


def symbol_table(A, K, w):
    return _symbol_table(_f64(np.atleast_2d(A)), int(K), float(w))


def project(g, x, weights, K, w):
    mean, c, d = _project(_f64(g), _f64(x), _f64(weights), int(K), float(w))
    return float(mean), np.asarray(c), np.asarray(d)
