"""Pure-numpy stepping kernels, vectorized over samples."""

import numpy as np


def _drift(kind, params, x):
    if kind == 0:
        return np.zeros_like(x)
    if kind == 1:
        d = x.shape[-1]
        B = params.reshape(d, d)
        return x @ B.T
    a = params[0]
    return a * np.tanh(x)


def _apply_matrix(kind, params, x, z):
    if kind == 0:
        return z.copy()
    if kind == 1:
        d = x.shape[-1]
        M = params.reshape(d, d)
        return z @ M.T
    a = params[0]
    return (1.0 + a * np.tanh(x)) * z


def _rk4_flow(kind, params, x, T, substep):
    if T == 0.0 or kind == 0:
        return x.copy()
    n = max(1, int(np.ceil(abs(T) / substep)))
    h = T / n
    y = x.copy()
    for _ in range(n):
        k1 = _drift(kind, params, y)
        k2 = _drift(kind, params, y + 0.5 * h * k1)
        k3 = _drift(kind, params, y + 0.5 * h * k2)
        k4 = _drift(kind, params, y + h * k3)
        y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return y


def _mark_bad(x, overflow, active, excluded):
    bad = ~np.all(np.isfinite(x) & (np.abs(x) <= overflow), axis=1)
    fresh = bad & active
    excluded[fresh] = True
    active[fresh] = False
    return fresh


def direct_terminal(x0, incr, hs, drift_kind, drift_params, mat_kind, mat_params,
                    overflow):
    n_samples, n_steps, dim = incr.shape
    x = np.broadcast_to(x0, (n_samples, dim)).copy()
    active = np.ones(n_samples, dtype=bool)
    excluded = np.zeros(n_samples, dtype=bool)
    for j in range(n_steps):
        if not np.any(active):
            break
        xa = x[active]
        step = (_drift(drift_kind, drift_params, xa) * hs[j]
                + _apply_matrix(mat_kind, mat_params, xa, incr[active, j]))
        x[active] = xa + step
        _mark_bad(x, overflow, active, excluded)
    return x, excluded


def reduced_terminal(x_start, incr, s_grid, flow_mode, chi_mats, kappa_mats,
                     drift_kind, drift_params, flow_substep, mat_kind, mat_params,
                     overflow):
    n_samples, n_steps, dim = incr.shape
    x = np.broadcast_to(x_start, (n_samples, dim)).copy()
    active = np.ones(n_samples, dtype=bool)
    excluded = np.zeros(n_samples, dtype=bool)
    for j in range(n_steps):
        if not np.any(active):
            break
        xa = x[active]
        s = s_grid[j]
        if flow_mode == 0:
            y = xa @ chi_mats[j].T
        else:
            y = _rk4_flow(drift_kind, drift_params, xa, s, flow_substep)
        w = y + _apply_matrix(mat_kind, mat_params, y, incr[active, j])
        if flow_mode == 0:
            x[active] = w @ kappa_mats[j].T
        else:
            x[active] = _rk4_flow(drift_kind, drift_params, w, -s, flow_substep)
        _mark_bad(x, overflow, active, excluded)
    return x, excluded
