"""Backend dispatch for the hot stepping kernels.

Two interchangeable implementations exist: numba-compiled per-sample loops
(default) and a vectorized pure-numpy fallback.  Selection:

    LEVYFLOW_BACKEND=numpy   force the numpy path
    LEVYFLOW_BACKEND=numba   force numba (raises if numba is unavailable)

unset: numba when importable, numpy otherwise.  Both paths consume the same
pre-generated increment arrays, so ensembles agree statistically; within a
backend results are bitwise reproducible.
"""

import os

import numpy as np

from . import _numpy as _np_impl

_requested = os.environ.get("LEVYFLOW_BACKEND", "").strip().lower()

if _requested == "numpy":
    BACKEND = "numpy"
elif _requested == "numba":
    from . import _numba as _nb_impl  # raises if numba missing
    BACKEND = "numba"
elif _requested == "":
    try:
        from . import _numba as _nb_impl
        BACKEND = "numba"
    except ImportError:  # pragma: no cover
        BACKEND = "numpy"
else:
    raise ValueError(f"unknown LEVYFLOW_BACKEND {_requested!r} (use 'numba' or 'numpy')")

# drift/matrix dispatch codes shared by both implementations
DRIFT_ZERO, DRIFT_LINEAR, DRIFT_TANH = 0, 1, 2
MAT_IDENTITY, MAT_CONSTANT, MAT_TANH_DIAG = 0, 1, 2
FLOW_AFFINE, FLOW_GENERIC = 0, 1


def _impl(backend=None):
    b = backend or BACKEND
    if b == "numpy":
        return _np_impl
    return _nb_impl


def direct_terminal(x0, incr, hs, drift_kind, drift_params, mat_kind, mat_params,
                    overflow, backend=None):
    """Step x <- x + b(x) h + A(x) dz through all increments; returns terminal
    states and the excluded-sample mask (non-finite or above `overflow`)."""
    return _impl(backend).direct_terminal(
        np.ascontiguousarray(x0, dtype=np.float64),
        np.ascontiguousarray(incr, dtype=np.float64),
        np.ascontiguousarray(hs, dtype=np.float64),
        int(drift_kind), np.ascontiguousarray(drift_params, dtype=np.float64),
        int(mat_kind), np.ascontiguousarray(mat_params, dtype=np.float64),
        float(overflow))


def reduced_terminal(x_start, incr, s_grid, flow_mode, chi_mats, kappa_mats,
                     drift_kind, drift_params, flow_substep, mat_kind, mat_params,
                     overflow, backend=None):
    """Step the drift-free transformed state x <- x + V_s(x, dz) over the time
    grid s_grid (ending at 0).  Affine mode uses precomputed flow matrices;
    generic mode integrates the flow with fixed-step RK4 inside the kernel."""
    return _impl(backend).reduced_terminal(
        np.ascontiguousarray(x_start, dtype=np.float64),
        np.ascontiguousarray(incr, dtype=np.float64),
        np.ascontiguousarray(s_grid, dtype=np.float64),
        int(flow_mode),
        np.ascontiguousarray(chi_mats, dtype=np.float64),
        np.ascontiguousarray(kappa_mats, dtype=np.float64),
        int(drift_kind), np.ascontiguousarray(drift_params, dtype=np.float64),
        float(flow_substep),
        int(mat_kind), np.ascontiguousarray(mat_params, dtype=np.float64),
        float(overflow))
