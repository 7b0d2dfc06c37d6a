"""Drift removal by characteristic flows for jump SDEs with cylindrical
symmetric stable noise.

The package builds the reduced (drift-free, time-inhomogeneous) coefficients
of such SDEs, the principal approximation of their transition densities, and
the simulation/quadrature machinery to verify both numerically.
"""

__version__ = "0.1.0"

from .levy import (  # noqa: F401
    NoiseSpec,
    ScalingReport,
    StableComponent,
    TabulatedComponent,
    check_weak_scaling,
    residual_exponent,
)
