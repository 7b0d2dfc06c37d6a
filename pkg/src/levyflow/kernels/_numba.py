"""Numba-compiled stepping kernels: per-sample loops, parallel over samples.

Each sample writes only its own output slot, so results are bitwise
independent of the thread count.
"""

import math

import numpy as np
from numba import njit, prange


@njit(cache=True, inline="always")
def _drift_into(kind, params, x, out):
    d = x.shape[0]
    if kind == 0:
        for i in range(d):
            out[i] = 0.0
    elif kind == 1:
        for i in range(d):
            acc = 0.0
            for j in range(d):
                acc += params[i * d + j] * x[j]
            out[i] = acc
    else:
        a = params[0]
        for i in range(d):
            out[i] = a * math.tanh(x[i])


@njit(cache=True, inline="always")
def _matvec_into(kind, params, x, z, out):
    d = x.shape[0]
    if kind == 0:
        for i in range(d):
            out[i] = z[i]
    elif kind == 1:
        for i in range(d):
            acc = 0.0
            for j in range(d):
                acc += params[i * d + j] * z[j]
            out[i] = acc
    else:
        a = params[0]
        for i in range(d):
            out[i] = (1.0 + a * math.tanh(x[i])) * z[i]


@njit(cache=True)
def _rk4_inplace(kind, params, x, T, substep, k1, k2, k3, k4, tmp):
    if T == 0.0 or kind == 0:
        return
    n = max(1, int(math.ceil(abs(T) / substep)))
    h = T / n
    d = x.shape[0]
    for _ in range(n):
        _drift_into(kind, params, x, k1)
        for i in range(d):
            tmp[i] = x[i] + 0.5 * h * k1[i]
        _drift_into(kind, params, tmp, k2)
        for i in range(d):
            tmp[i] = x[i] + 0.5 * h * k2[i]
        _drift_into(kind, params, tmp, k3)
        for i in range(d):
            tmp[i] = x[i] + h * k3[i]
        _drift_into(kind, params, tmp, k4)
        for i in range(d):
            x[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])


@njit(cache=True, parallel=True)
def direct_terminal(x0, incr, hs, drift_kind, drift_params, mat_kind, mat_params,
                    overflow):
    n_samples, n_steps, dim = incr.shape
    term = np.empty((n_samples, dim))
    excluded = np.zeros(n_samples, dtype=np.bool_)
    for n in prange(n_samples):
        x = np.empty(dim)
        bvec = np.empty(dim)
        az = np.empty(dim)
        for i in range(dim):
            x[i] = x0[i]
        ok = True
        for j in range(n_steps):
            _drift_into(drift_kind, drift_params, x, bvec)
            _matvec_into(mat_kind, mat_params, x, incr[n, j], az)
            for i in range(dim):
                x[i] += bvec[i] * hs[j] + az[i]
            for i in range(dim):
                if not math.isfinite(x[i]) or abs(x[i]) > overflow:
                    ok = False
            if not ok:
                break
        excluded[n] = not ok
        for i in range(dim):
            term[n, i] = x[i]
    return term, excluded


@njit(cache=True, parallel=True)
def reduced_terminal(x_start, incr, s_grid, flow_mode, chi_mats, kappa_mats,
                     drift_kind, drift_params, flow_substep, mat_kind, mat_params,
                     overflow):
    n_samples, n_steps, dim = incr.shape
    term = np.empty((n_samples, dim))
    excluded = np.zeros(n_samples, dtype=np.bool_)
    for n in prange(n_samples):
        x = np.empty(dim)
        y = np.empty(dim)
        w = np.empty(dim)
        az = np.empty(dim)
        k1 = np.empty(dim)
        k2 = np.empty(dim)
        k3 = np.empty(dim)
        k4 = np.empty(dim)
        tmp = np.empty(dim)
        for i in range(dim):
            x[i] = x_start[i]
        ok = True
        for j in range(n_steps):
            s = s_grid[j]
            if flow_mode == 0:
                for i in range(dim):
                    acc = 0.0
                    for l in range(dim):
                        acc += chi_mats[j, i, l] * x[l]
                    y[i] = acc
            else:
                for i in range(dim):
                    y[i] = x[i]
                _rk4_inplace(drift_kind, drift_params, y, s, flow_substep,
                             k1, k2, k3, k4, tmp)
            _matvec_into(mat_kind, mat_params, y, incr[n, j], az)
            for i in range(dim):
                w[i] = y[i] + az[i]
            if flow_mode == 0:
                for i in range(dim):
                    acc = 0.0
                    for l in range(dim):
                        acc += kappa_mats[j, i, l] * w[l]
                    x[i] = acc
            else:
                for i in range(dim):
                    x[i] = w[i]
                _rk4_inplace(drift_kind, drift_params, x, -s, flow_substep,
                             k1, k2, k3, k4, tmp)
            for i in range(dim):
                if not math.isfinite(x[i]) or abs(x[i]) > overflow:
                    ok = False
            if not ok:
                break
        excluded[n] = not ok
        for i in range(dim):
            term[n, i] = x[i]
    return term, excluded
