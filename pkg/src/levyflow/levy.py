"""Cylindrical symmetric jump noise: per-axis components, their symbols,
Pruitt functions, weak-scaling diagnostics, increment sampling and densities.

The driving process has independent scalar symmetric components.  The
workhorse component is the symmetric stable one with jump density
``scale * |v|**(-alpha-1)``; everything about it is available in closed form.
A quadrature-backed component accepts a general symmetric jump density plus a
declared power tail, for diagnostics on non-stable noise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gamma as _gamma, gammaln

from .errors import DomainError
from .quad import (
    cosine_transform,
    fit_loglog_slope,
    log_edges,
    oscillatory_edges,
    panel_nodes,
    trapezoid_weights,
)

__all__ = [
    "StableComponent",
    "TabulatedComponent",
    "NoiseSpec",
    "ScalingReport",
    "stable_symbol_constant",
    "standard_stable_density",
    "standard_stable_sample",
    "standard_stable_tail",
    "standard_stable_quantile",
    "check_weak_scaling",
    "residual_exponent",
]

# inversion switches to the tail series beyond this standardized abscissa
_SERIES_SWITCH = 35.0


def stable_symbol_constant(alpha: float) -> float:
    """Constant k(alpha) with symbol(xi) = scale * k(alpha) * |xi|**alpha
    for the jump density scale * |v|**(-alpha-1).

    k(alpha) = 2 * Gamma(2-alpha) * cos(pi alpha / 2) / (alpha (1-alpha)),
    continued by its limit pi at alpha = 1.
    """
    if not 0.0 < alpha < 2.0:
        raise DomainError(f"stability index must lie in (0, 2), got {alpha}")
    if abs(alpha - 1.0) < 1e-9:
        # expand around alpha = 1 to avoid the 0/0; linear term vanishes
        return math.pi
    return 2.0 * _gamma(2.0 - alpha) * math.cos(math.pi * alpha / 2.0) / (alpha * (1.0 - alpha))


@dataclass(frozen=True)
class StableComponent:
    """Symmetric stable component with jump density ``scale/|v|**(alpha+1)``.

    ``normalized`` picks the scale making the symbol exactly |xi|**alpha.
    """

    alpha: float
    scale: float = 1.0

    def __post_init__(self):
        if not 0.0 < self.alpha < 2.0:
            raise DomainError(f"stability index must lie in (0, 2), got {self.alpha}")
        if self.scale <= 0.0:
            raise DomainError(f"scale must be positive, got {self.scale}")

    @classmethod
    def normalized(cls, alpha: float) -> "StableComponent":
        return cls(alpha, 1.0 / stable_symbol_constant(alpha))

    # -- closed forms ------------------------------------------------------

    def symbol(self, xi):
        """Characteristic exponent."""
        return self.scale * stable_symbol_constant(self.alpha) * np.abs(xi) ** self.alpha

    def pruitt(self, r):
        """Small-scale activity function 4c/(a(2-a)) r**-a, decreasing in r."""
        r = np.asarray(r, dtype=float)
        if np.any(r <= 0.0):
            raise DomainError("pruitt function requires r > 0")
        out = 4.0 * self.scale / (self.alpha * (2.0 - self.alpha)) * r ** (-self.alpha)
        return out if out.shape else float(out)

    def jump_density(self, v):
        v = np.abs(np.asarray(v, dtype=float))
        return self.scale * v ** (-1.0 - self.alpha)

    @property
    def scaling_indices(self) -> tuple[float, float]:
        return (self.alpha, self.alpha)

    def increment_scale(self, dt: float) -> float:
        """Scale s such that an increment over dt is s times a standard draw."""
        if dt <= 0.0:
            raise DomainError(f"time step must be positive, got {dt}")
        return (dt * self.scale * stable_symbol_constant(self.alpha)) ** (1.0 / self.alpha)

    def sample(self, dt: float, size, rng: np.random.Generator):
        """Exact increment over time dt via the trigonometric transform of a
        uniform/exponential pair."""
        return self.increment_scale(dt) * standard_stable_sample(self.alpha, size, rng)

    def density(self, t: float, x):
        """Distribution density of the component at time t > 0."""
        if t <= 0.0:
            raise DomainError(f"time must be positive, got {t}")
        s = self.increment_scale(t)
        return standard_stable_density(self.alpha, np.asarray(x, dtype=float) / s) / s

    def tail_mass(self, t: float, x: float) -> float:
        """P(|increment over t| > x)."""
        s = self.increment_scale(t)
        return standard_stable_tail(self.alpha, x / s)

    def grid_halfwidth(self, t: float, tail_prob: float) -> float:
        """Half-width of a symmetric box catching all but tail_prob of mass."""
        return self.increment_scale(t) * standard_stable_quantile(self.alpha, tail_prob)

    def to_dict(self) -> dict:
        return {"alpha": self.alpha, "scale": self.scale}


class TabulatedComponent:
    """Symmetric component given by a jump density on (0, cutoff] plus a pure
    power tail beyond the cutoff.  Symbol and Pruitt function are computed by
    quadrature; sampling and exact densities are not available.
    """

    def __init__(self, density, tail_index: float, cutoff: float = 100.0,
                 tail_coef: float | None = None,
                 scaling_indices: tuple[float, float] | None = None):
        if not 0.0 < tail_index < 2.0:
            raise DomainError("tail index must lie in (0, 2)")
        if cutoff <= 0.0:
            raise DomainError("cutoff must be positive")
        self._density = density
        self.tail_index = float(tail_index)
        self.cutoff = float(cutoff)
        if tail_coef is None:
            tail_coef = float(density(np.array([cutoff]))[0]) * cutoff ** (1.0 + tail_index)
        self.tail_coef = float(tail_coef)
        self._indices = scaling_indices or (tail_index, tail_index)

    @property
    def scaling_indices(self) -> tuple[float, float]:
        return self._indices

    def jump_density(self, v):
        v = np.abs(np.asarray(v, dtype=float))
        inner = v <= self.cutoff
        out = np.empty_like(v)
        if np.any(inner):
            out[inner] = self._density(v[inner])
        out[~inner] = self.tail_coef * v[~inner] ** (-1.0 - self.tail_index)
        return out

    def symbol(self, xi):
        xi = np.atleast_1d(np.asarray(xi, dtype=float))
        axi = np.abs(xi)
        a = self.tail_index
        # finite part on (0, cutoff] by log-panel quadrature
        nodes, weights = panel_nodes(log_edges(1e-10, self.cutoff, per_decade=8), 16)
        dens = self._density(nodes)
        one_minus_cos = 1.0 - np.cos(np.outer(axi, nodes))
        finite = 2.0 * one_minus_cos @ (weights * dens)
        # exact power tail: subtract the finite-range piece of the closed form
        tail_nodes = one_minus_cos @ (weights * nodes ** (-1.0 - a))
        closed = 0.5 * stable_symbol_constant(a) * axi ** a
        tail = 2.0 * self.tail_coef * (closed - tail_nodes)
        out = finite + tail
        out[axi == 0.0] = 0.0
        return out if out.shape != (1,) else float(out[0])

    def pruitt(self, r):
        r = np.atleast_1d(np.asarray(r, dtype=float))
        if np.any(r <= 0.0):
            raise DomainError("pruitt function requires r > 0")
        a = self.tail_index
        out = np.empty_like(r)
        for j, rj in enumerate(r):
            # quadratic part below rj, flat part above, power tail closed form
            hi = min(rj, self.cutoff)
            nodes, weights = panel_nodes(log_edges(1e-10 * hi, hi, per_decade=8), 16)
            quadratic = float(np.sum(weights * nodes ** 2 * self._density(nodes))) / rj ** 2
            if rj < self.cutoff:
                nodes, weights = panel_nodes(log_edges(rj, self.cutoff, per_decade=8), 16)
                flat = float(np.sum(weights * self._density(nodes)))
                tail = self.tail_coef * self.cutoff ** (-a) / a
            else:
                nodes, weights = panel_nodes(log_edges(self.cutoff, rj, per_decade=8), 16)
                quadratic += self.tail_coef * float(np.sum(weights * nodes ** (1.0 - a))) / rj ** 2
                flat = 0.0
                tail = self.tail_coef * rj ** (-a) / a
            out[j] = 2.0 * (quadratic + flat + tail)
        return out if out.shape != (1,) else float(out[0])

    def to_dict(self) -> dict:
        raise DomainError("tabulated components do not serialize to model configs")


# -- standard stable machinery (unit symbol |xi|**alpha) -----------------------


def standard_stable_sample(alpha: float, size, rng: np.random.Generator):
    """Draw from the symmetric stable law with characteristic function
    exp(-|xi|**alpha), by the trigonometric transform of U ~ Unif(-pi/2, pi/2)
    and an independent standard exponential W."""
    u = rng.uniform(-0.5 * np.pi, 0.5 * np.pi, size)
    w = rng.standard_exponential(size)
    return _cms_transform(alpha, u, w)


def _cms_transform(alpha: float, u, w):
    # single formula; the (1-alpha)/alpha factor degenerates correctly at alpha=1
    su = np.sin(alpha * u)
    cu = np.cos(u)
    out = su / cu ** (1.0 / alpha)
    if abs(alpha - 1.0) > 1e-12:
        out = out * (np.cos((1.0 - alpha) * u) / w) ** ((1.0 - alpha) / alpha)
    return out


def _tail_series_terms(alpha: float, kmax: int = 200):
    """Coefficients of the large-argument expansion of the standard stable
    density; zero terms are dropped and Gamma ratios kept in log space."""
    k = np.arange(1, kmax + 1)
    sign = (-1.0) ** (k + 1)
    sin_part = np.sin(k * np.pi * alpha / 2.0)
    log_mag = gammaln(k * alpha + 1.0) - gammaln(k + 1.0)
    keep = (np.abs(sin_part) > 1e-15) & (log_mag < 600.0)
    coef = sign[keep] * np.exp(log_mag[keep]) * sin_part[keep] / np.pi
    return k[keep], coef


def _eval_tail_series(alpha: float, y: np.ndarray, power_shift: float,
                      extra_factor=None) -> np.ndarray:
    """Sum_k coef_k * y**(-k*alpha - power_shift), truncated at the smallest
    term (the expansion is asymptotic for alpha >= 1)."""
    k, coef = _tail_series_terms(alpha)
    out = np.zeros_like(y)
    prev = np.full_like(y, np.inf)
    active = np.ones_like(y, dtype=bool)
    for kk, ck in zip(k, coef):
        if extra_factor is not None:
            ck = ck * extra_factor(kk)
        term = ck * y ** (-kk * alpha - power_shift)
        mag = np.abs(term)
        stop = mag > prev
        active &= ~stop
        out[active] += term[active]
        done = mag < 1e-18 * np.maximum(np.abs(out), 1e-300)
        active &= ~done
        if not np.any(active):
            break
        prev = mag
    return out


def standard_stable_density(alpha: float, y) -> np.ndarray:
    """Density of the standard symmetric stable law (symbol |xi|**alpha).

    Cosine-transform quadrature in the core, tail series beyond; the frequency
    cutoff is chosen so the discarded integrand is below 1e-16.
    """
    y = np.abs(np.atleast_1d(np.asarray(y, dtype=float)))
    out = np.empty_like(y)
    core = y <= _SERIES_SWITCH
    if np.any(core):
        cutoff = (37.0) ** (1.0 / alpha)
        vals = cosine_transform(lambda u: np.exp(-(u ** alpha)), cutoff, y[core])
        out[core] = np.maximum(vals, 0.0)
    if np.any(~core):
        out[~core] = np.maximum(_eval_tail_series(alpha, y[~core], 1.0), 0.0)
    return out


def standard_stable_tail(alpha: float, y) -> float | np.ndarray:
    """P(X > y) for y > 0 under the standard symmetric stable law."""
    y = np.atleast_1d(np.asarray(y, dtype=float))
    out = np.empty_like(y)
    core = y <= _SERIES_SWITCH
    if np.any(core):
        # 1/2 - F(y) via the sine transform of the characteristic function
        cutoff = (37.0) ** (1.0 / alpha)
        ys = y[core]
        nodes, weights = panel_nodes(oscillatory_edges(cutoff, float(np.max(ys))), 12)
        fw = np.exp(-(nodes ** alpha)) / nodes * weights
        integral = np.sin(np.outer(ys, nodes)) @ fw
        out[core] = 0.5 - integral / np.pi
    if np.any(~core):
        out[~core] = _eval_tail_series(alpha, y[~core], 0.0,
                                       extra_factor=lambda kk: 1.0 / (kk * alpha))
    out = np.clip(out, 0.0, 0.5)
    return out if out.shape != (1,) else float(out[0])


def standard_stable_quantile(alpha: float, tail_prob: float) -> float:
    """y with P(X > y) = tail_prob, for tail_prob < 0.25, by bisection."""
    if not 0.0 < tail_prob < 0.25:
        raise DomainError("quantile helper expects a small tail probability")
    lo, hi = 1.0, 4.0
    while standard_stable_tail(alpha, hi) > tail_prob:
        lo, hi = hi, hi * 4.0
        if hi > 1e300:
            raise DomainError("tail probability unreachable")
    for _ in range(200):
        mid = math.sqrt(lo * hi)
        if standard_stable_tail(alpha, mid) > tail_prob:
            lo = mid
        else:
            hi = mid
        if hi / lo < 1.0 + 1e-12:
            break
    return math.sqrt(lo * hi)


# -- assembled noise -----------------------------------------------------------


@dataclass(frozen=True)
class NoiseSpec:
    """Ordered collection of independent symmetric per-axis components.

    Immutable and safely shareable; sampling takes a caller-supplied
    generator so parallel use can rely on independent streams.
    """

    components: tuple

    def __init__(self, components):
        object.__setattr__(self, "components", tuple(components))
        if self.dim < 1:
            raise DomainError("need at least one component")

    @property
    def dim(self) -> int:
        return len(self.components)

    @property
    def regime(self) -> str:
        """'A' when all components are identical, 'B' otherwise."""
        first = self.components[0]
        same = all(
            isinstance(c, StableComponent) and isinstance(first, StableComponent)
            and c.alpha == first.alpha and c.scale == first.scale
            or c is first
            for c in self.components
        )
        return "A" if same else "B"

    @property
    def alpha(self) -> float:
        """Global lower scaling index: min over components."""
        return min(c.scaling_indices[0] for c in self.components)

    @property
    def beta(self) -> float:
        """Global upper scaling index: max over components."""
        return max(c.scaling_indices[1] for c in self.components)

    @property
    def is_stable(self) -> bool:
        return all(isinstance(c, StableComponent) for c in self.components)

    def _component(self, i: int):
        if not 0 <= i < self.dim:
            raise DomainError(f"component index {i} out of range for dim {self.dim}")
        return self.components[i]

    def symbol(self, i: int, xi):
        return self._component(i).symbol(xi)

    def pruitt(self, i: int, r):
        return self._component(i).pruitt(r)

    def sample_increment(self, i: int, dt: float, rng: np.random.Generator, size=None):
        comp = self._component(i)
        if not isinstance(comp, StableComponent):
            raise DomainError("exact increment sampling requires stable components")
        return comp.sample(dt, size, rng)

    def sample_increments(self, dt: float, size: int, rng: np.random.Generator) -> np.ndarray:
        """(size, dim) array of independent per-axis increments over dt."""
        out = np.empty((size, self.dim))
        for i in range(self.dim):
            out[:, i] = self.sample_increment(i, dt, rng, size)
        return out

    def component_density(self, i: int, t: float, x) -> np.ndarray:
        comp = self._component(i)
        if isinstance(comp, StableComponent):
            return comp.density(t, x)
        return self._quadrature_density(comp, t, x)

    def _quadrature_density(self, comp: TabulatedComponent, t: float, x) -> np.ndarray:
        if t <= 0.0:
            raise DomainError(f"time must be positive, got {t}")
        # cutoff where exp(-t * symbol) drops below 1e-14
        hi = 1.0
        while t * comp.symbol(hi) < 32.0:
            hi *= 2.0
            if hi > 1e12:
                break
        return np.maximum(
            cosine_transform(lambda u: np.exp(-t * np.atleast_1d(comp.symbol(u))), hi,
                             np.asarray(x, dtype=float)),
            0.0,
        )

    def product_density(self, t: float, w) -> float:
        """Joint density of the increment over t at the point w (dim-vector)."""
        if t <= 0.0:
            raise DomainError(f"time must be positive, got {t}")
        w = np.asarray(w, dtype=float)
        if w.shape[-1] != self.dim:
            raise DomainError(f"expected a vector of length {self.dim}")
        out = np.ones(w.shape[:-1], dtype=float)
        for i in range(self.dim):
            out = out * self.component_density(i, t, w[..., i])
        return float(out) if out.shape == () else out

    def density_table(self, i: int, t: float, mass_tol: float = 1e-3,
                      core_points: int = 801, tail_points: int = 120):
        """Composite grid (dense core plus geometric tails) and density values
        catching all but ``mass_tol`` of the component mass; returns
        (grid, values, deficit)."""
        comp = self._component(i)
        if not isinstance(comp, StableComponent):
            raise DomainError("density tables require stable components")
        s = comp.increment_scale(t)
        half = comp.grid_halfwidth(t, mass_tol / 4.0)
        core = 10.0 * s
        grid = np.linspace(-core, core, core_points)
        if half > core:
            tail = np.geomspace(core, half, tail_points)[1:]
            grid = np.concatenate([-tail[::-1], grid, tail])
        vals = comp.density(t, grid)
        deficit = 2.0 * comp.tail_mass(t, grid[-1])
        return grid, vals, deficit

    def to_dict(self) -> dict:
        return {"components": [c.to_dict() for c in self.components]}

    @classmethod
    def from_dict(cls, data) -> "NoiseSpec":
        comps = []
        for entry in data["components"]:
            if entry.get("normalized"):
                comps.append(StableComponent.normalized(entry["alpha"]))
            else:
                comps.append(StableComponent(entry["alpha"], entry.get("scale", 1.0)))
        return cls(comps)


# -- weak scaling certification ------------------------------------------------


@dataclass(frozen=True)
class ScalingReport:
    """Grid certificate for two-sided power bounds on the Pruitt function
    (and the mirrored bounds on the symbol)."""

    alpha: float
    beta: float
    C1: float
    C2: float
    C1_star: float
    C2_star: float
    lower_trend: float
    upper_trend: float
    fitted_lower_index: float
    fitted_upper_index: float
    passed: bool

    def to_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "beta": self.beta,
            "C1": self.C1,
            "C2": self.C2,
            "C1_star": self.C1_star,
            "C2_star": self.C2_star,
            "lower_trend": self.lower_trend,
            "upper_trend": self.upper_trend,
            "fitted_lower_index": self.fitted_lower_index,
            "fitted_upper_index": self.fitted_upper_index,
            "passed": bool(self.passed),
        }


_TREND_TOL = 0.02


def check_weak_scaling(spec: NoiseSpec, i: int, alpha: float, beta: float,
                       r_grid=None, lambda_grid=None) -> ScalingReport:
    """Certify the two-sided scaling bounds

        C1 lam**(-alpha) h(r) <= h(lam r) <= C2 lam**(-beta) h(r)

    on an (r, lam) grid in (0, 1], together with the mirrored bounds on the
    symbol for |xi| >= 1, lam >= 1.  The certificate is grid-based, not a
    proof: worst-case constants are reported, and the check fails when the
    per-lambda envelope constants trend towards 0 or infinity as lam -> 0.
    """
    if not 0.0 < alpha <= beta <= 2.0:
        raise DomainError("need 0 < alpha <= beta <= 2")
    r_grid = np.geomspace(1e-2, 1.0, 50) if r_grid is None else np.asarray(r_grid, float)
    lambda_grid = np.geomspace(1e-2, 1.0, 50) if lambda_grid is None else np.asarray(lambda_grid, float)
    if r_grid.size == 0 or lambda_grid.size == 0:
        raise DomainError("scaling grids must be nonempty")
    if np.any(r_grid <= 0) or np.any(r_grid > 1) or np.any(lambda_grid <= 0) or np.any(lambda_grid > 1):
        raise DomainError("scaling grids must lie in (0, 1]")

    comp = spec._component(i)
    h_r = np.atleast_1d(comp.pruitt(r_grid))
    ratios = np.empty((lambda_grid.size, r_grid.size))
    for j, lam in enumerate(lambda_grid):
        ratios[j] = np.atleast_1d(comp.pruitt(lam * r_grid)) / h_r

    lower_env = ratios.min(axis=1) * lambda_grid ** alpha   # best C1 per lambda
    upper_env = ratios.max(axis=1) * lambda_grid ** beta    # worst C2 per lambda
    C1 = float(lower_env.min())
    C2 = float(upper_env.max())

    sub = lambda_grid < 1.0
    if np.count_nonzero(sub) >= 3:
        lower_trend, _ = fit_loglog_slope(lambda_grid[sub], lower_env[sub])
        upper_trend, _ = fit_loglog_slope(lambda_grid[sub], upper_env[sub])
    else:
        lower_trend = upper_trend = 0.0

    # mirrored symbol bounds on |xi| >= 1, lam >= 1
    xi_grid = np.geomspace(1.0, 100.0, 30)
    lam_up = np.geomspace(1.0, 100.0, 30)
    psi = np.atleast_1d(comp.symbol(xi_grid))
    sratios = np.empty((lam_up.size, xi_grid.size))
    for j, lam in enumerate(lam_up):
        sratios[j] = np.atleast_1d(comp.symbol(lam * xi_grid)) / psi
    C1_star = float((sratios * lam_up[:, None] ** (-alpha)).min())
    C2_star = float((sratios * lam_up[:, None] ** (-beta)).max())

    passed = (
        C1 <= 1.0 + 1e-12
        and C2 >= 1.0 - 1e-12
        and lower_trend <= _TREND_TOL
        and upper_trend >= -_TREND_TOL
    )
    return ScalingReport(
        alpha=alpha,
        beta=beta,
        C1=C1,
        C2=C2,
        C1_star=C1_star,
        C2_star=C2_star,
        lower_trend=float(lower_trend),
        upper_trend=float(upper_trend),
        fitted_lower_index=float(alpha - lower_trend),
        fitted_upper_index=float(beta - upper_trend),
        passed=bool(passed),
    )


# -- residual exponent ---------------------------------------------------------


def residual_exponent(regime: str, alpha: float, beta: float,
                      eta1: float, eta2: float, d: int) -> float:
    """Exponent governing the L1 error of the principal transition density,
    as the minimum of four index expressions; positive whenever the index
    constraints hold.

    Regime 'A' (identical components) and 'B' (mixed components) use
    different four-term minima; regime 'B' additionally requires the index
    balance conditions beta/alpha < 1 + min(eta1, eta2) and
    1/alpha - 1/beta < min(eta1, eta2).
    """
    if regime not in ("A", "B"):
        raise DomainError(f"regime must be 'A' or 'B', got {regime!r}")
    if not 0.0 < alpha <= beta < 2.0:
        raise DomainError(f"need 0 < alpha <= beta < 2, got alpha={alpha}, beta={beta}")
    if not (0.0 < eta1 <= 1.0 and 0.0 < eta2 <= 1.0):
        raise DomainError("Holder exponents must lie in (0, 1]")
    if d < 1:
        raise DomainError("dimension must be at least 1")
    if eta2 <= max(0.0, beta - 1.0):
        raise DomainError(
            f"drift-derivative Holder index too small: need eta2 > max(0, beta-1) "
            f"= {max(0.0, beta - 1.0)}, got {eta2}")
    eta = min(eta1, eta2)
    if regime == "A":
        third_num = eta / (beta * (1.0 + eta))
        terms = (
            eta * alpha / (2.0 * (d + 3) * beta),
            eta * alpha / (2.0 * (d + 3)),
            third_num / (2.0 + 2.0 / alpha + third_num),
            eta2 / (eta2 + beta * (1.0 + (d + 1) / alpha)),
        )
    else:
        if beta / alpha >= 1.0 + eta:
            raise DomainError(
                f"index balance violated: beta/alpha = {beta / alpha:.6g} must be "
                f"< 1 + min(eta1, eta2) = {1.0 + eta:.6g}")
        if 1.0 / alpha - 1.0 / beta >= eta:
            raise DomainError(
                f"index balance violated: 1/alpha - 1/beta = "
                f"{1.0 / alpha - 1.0 / beta:.6g} must be < min(eta1, eta2) = {eta:.6g}")
        third_num = 1.0 / beta - 1.0 / ((1.0 + eta) * alpha)
        terms = (
            ((1.0 + eta) / beta - 1.0 / alpha) / (2.0 * (d + 3) / alpha),
            (eta - (1.0 / alpha - 1.0 / beta)) / (2.0 * (d + 3) / alpha),
            third_num / (2.0 + 2.0 / alpha + third_num),
            (1.0 + eta2 - beta / alpha) / (1.0 + eta2 + beta * (1.0 + d / alpha)),
        )
    value = min(terms)
    if value <= 0.0:
        raise DomainError("residual exponent must be positive; check index constraints")
    return float(value)


def write_density_csv(path, grid: np.ndarray, values: np.ndarray) -> None:
    """Emit a 1d density table with header ``x,density``."""
    arr = np.column_stack([grid, values])
    np.savetxt(path, arr, delimiter=",", header="x,density", comments="")


def density_integral(grid: np.ndarray, values: np.ndarray) -> float:
    return float(np.sum(trapezoid_weights(grid) * values))
