"""Modulars, Luxembourg norms, and the explicit kernel test functions.

The modular of ``f`` against a growth function ``phi`` and a measure is
``int phi(|f|) dmu``; the Luxembourg norm is the infimum of ``lam > 0``
with modular of ``f/lam`` at most 1, computed by bisection on ``lam``
(monotone, since phi is nondecreasing).  For a pure power ``phi = t^p``
the norm has the closed form ``modular(f)^(1/p)``, offered as an optional
fast path; the default route stays the bisection so the two can be played
against each other in tests.

Hardy-type norms take a supremum of line modulars over a geometric grid of
heights, Bergman-type norms integrate over the half-plane against
``y^alpha``.  Both report the modular form and the Luxembourg form.

Test functions are the rational kernels

* ``HardyKernel``:   ``phi^{-1}(1/y0) * y0^2 / (w - conj(z0))^2``
* ``BergmanKernel``: ``phi^{-1}(1/y0^(2+a)) * y0^(4+2a) / (w - conj(z0))^(4+2a)``

plus Poisson extensions of step functions and scaled box indicators.
Holomorphy is by construction; nothing here certifies it numerically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .growth import GrowthFunction, Power
from .integrals import (
    DEFAULT_SPEC,
    QuadratureSpec,
    integrate_box,
    integrate_halfplane,
    integrate_line,
    tanh_sinh,
)
from .maximal import PoissonExtension, StepFunction1D
from .measure import (
    AtomicMeasure,
    CarlesonBox,
    DensityMeasure,
    RestrictedMeasure,
    UpperHalfPlaneMeasure,
    WeightedVolume,
)

__all__ = [
    "HardyKernel",
    "BergmanKernel",
    "PoissonOfStep",
    "IndicatorScaled",
    "TestFunction",
    "step_modular_line",
    "line_modular",
    "modular_halfplane",
    "luxembourg",
    "luxembourg_step_line",
    "HardyNormResult",
    "hardy_norm",
    "BergmanNormResult",
    "bergman_norm",
    "pointwise_bound_check",
    "default_height_grid",
]


class NormBracketError(RuntimeError):
    """The Luxembourg bisection could not bracket a finite norm."""


# ---------------------------------------------------------------------------
# Test functions
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class HardyKernel:
    """``phi^{-1}(1/y0) * y0^2 / (w - conj(z0))^2`` for ``z0 = x0 + i y0``.

    Its magnitude at ``z0`` itself is ``phi^{-1}(1/y0) / 4``.
    """

    z0: complex
    phi: GrowthFunction

    def __post_init__(self) -> None:
        if self.z0.imag <= 0:
            raise ValueError("kernel base point must lie in the upper half-plane")
        object.__setattr__(self, "_amp", float(self.phi.inverse(1.0 / self.z0.imag)))

    @property
    def amplitude(self) -> float:
        return self._amp

    @property
    def natural_scale(self) -> float:
        return self.z0.imag

    @property
    def natural_center(self) -> float:
        return self.z0.real

    def abs_value(self, x, y) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        y0 = self.z0.imag
        d2 = (x - self.z0.real) ** 2 + (y + y0) ** 2
        return self._amp * y0 ** 2 / d2


@dataclass(frozen=True, eq=False)
class BergmanKernel:
    """``phi^{-1}(1/y0^(2+alpha)) * y0^(4+2alpha) / (w - conj(z0))^(4+2alpha)``."""

    z0: complex
    phi: GrowthFunction
    alpha: float = 0.0

    def __post_init__(self) -> None:
        if self.z0.imag <= 0:
            raise ValueError("kernel base point must lie in the upper half-plane")
        if self.alpha <= -1:
            raise ValueError("weight exponent must exceed -1")
        y0 = self.z0.imag
        amp = float(self.phi.inverse(1.0 / y0 ** (2.0 + self.alpha)))
        object.__setattr__(self, "_amp", amp)

    @property
    def amplitude(self) -> float:
        return self._amp

    @property
    def natural_scale(self) -> float:
        return self.z0.imag

    @property
    def natural_center(self) -> float:
        return self.z0.real

    def abs_value(self, x, y) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        y0 = self.z0.imag
        e = 4.0 + 2.0 * self.alpha
        d2 = (x - self.z0.real) ** 2 + (y + y0) ** 2
        return self._amp * y0 ** e * d2 ** (-0.5 * e)


@dataclass(frozen=True, eq=False)
class PoissonOfStep:
    """|Poisson extension| of a step function on the line."""

    g: StepFunction1D

    def __post_init__(self) -> None:
        object.__setattr__(self, "_ext", PoissonExtension(self.g))

    @property
    def extension(self) -> PoissonExtension:
        return self._ext

    def abs_value(self, x, y) -> np.ndarray:
        return np.abs(self._ext(x, y))


@dataclass(frozen=True)
class IndicatorScaled:
    """``lam`` on a Carleson box, zero elsewhere."""

    lam: float
    box: CarlesonBox

    def abs_value(self, x, y) -> np.ndarray:
        return abs(self.lam) * self.box.contains(x, y).astype(float)


TestFunction = object  # any of the kinds above; duck-typed on .abs_value


# ---------------------------------------------------------------------------
# Modulars
# ---------------------------------------------------------------------------

def step_modular_line(f: StepFunction1D, phi: GrowthFunction, scale: float = 1.0) -> float:
    """Exact ``int phi(|f|/scale) dx`` for a step function on the line."""
    widths = np.diff(f.edges)
    vals = np.abs(f.values) / scale
    return float(np.sum(phi(vals) * widths))


def line_modular(
    f_abs: Callable[[np.ndarray], np.ndarray],
    phi: GrowthFunction,
    spec: QuadratureSpec = DEFAULT_SPEC,
    scale: float = 1.0,
    x_center: float = 0.0,
    x_scale: float = 1.0,
) -> float:
    """``int phi(|f(x)| / scale) dx`` by quadrature over the line."""
    res = integrate_line(
        lambda x: phi(np.abs(f_abs(x)) / scale), spec, x_center, x_scale
    )
    return res.value


def _density_modular(
    f_abs: Callable[[np.ndarray, np.ndarray], np.ndarray],
    phi: GrowthFunction,
    profile: Callable[[np.ndarray], np.ndarray],
    spec: QuadratureSpec,
    scale: float,
    hint_center: float = 0.0,
    hint_scale: float = 1.0,
) -> float:
    """Modular against ``rho(y) dx dy`` with the divergence probe at y = 0.

    Same increment rule as the box masses: a second cutoff-halving
    increment at least half the first (and non-negligible) flags the
    modular divergent and returns ``inf``.
    """
    g = lambda x, y: phi(f_abs(x, y) / scale)

    def segment(lo: float, hi: float) -> float:
        return integrate_halfplane(
            g, 0.0, spec, y_lo=lo, y_hi=hi, weight=profile,
            x_center=hint_center, scale=hint_scale,
        ).value

    c = spec.y_min
    base = segment(c, 1.0) + segment(1.0, math.inf)
    d1 = segment(c / 2, c)
    d2 = segment(c / 4, c / 2)
    floor = 1e-12
    spec_rule = d1 > 0.1 * max(base, floor) and d2 > 0.1 * max(base + d1, floor)
    ratio_rule = d2 >= 0.5 * d1 and d2 > 1e-3 * max(base, floor)
    if spec_rule or ratio_rule:
        return math.inf
    return segment(0.0, 1.0) + segment(1.0, math.inf)


def modular_halfplane(
    f,
    phi: GrowthFunction,
    mu: UpperHalfPlaneMeasure,
    spec: QuadratureSpec = DEFAULT_SPEC,
    scale: float = 1.0,
) -> float:
    """``int phi(|f| / scale) dmu`` over the half-plane; ``inf`` marks a
    detected divergence for density measures.

    ``f`` is a test function (anything with ``abs_value``) or a bare
    ``|f|(x, y)`` callable.  Scaled box indicators short-circuit to the
    exact value ``phi(lam/scale) * mu(box)``.
    """
    if scale <= 0:
        raise ValueError("scale must be positive")
    if isinstance(f, IndicatorScaled):
        from .measure import box_mass
        return float(phi(abs(f.lam) / scale)) * box_mass(mu, f.box, spec)
    hint_scale = float(getattr(f, "natural_scale", 1.0))
    hint_center = float(getattr(f, "natural_center", 0.0))
    f_abs = f.abs_value if hasattr(f, "abs_value") else f
    if isinstance(mu, AtomicMeasure):
        xs, ys, ms = mu.arrays()
        if xs.size == 0:
            return 0.0
        return float(np.sum(ms * phi(f_abs(xs, ys) / scale)))
    if isinstance(mu, WeightedVolume):
        res = integrate_halfplane(
            lambda x, y: phi(f_abs(x, y) / scale), mu.alpha, spec,
            x_center=hint_center, scale=hint_scale,
        )
        return res.value
    if isinstance(mu, DensityMeasure):
        return _density_modular(
            f_abs, phi, mu.profile, spec, scale, hint_center, hint_scale
        )
    if isinstance(mu, RestrictedMeasure):
        return _restricted_modular(f_abs, phi, mu, spec, scale)
    raise TypeError(f"unknown measure kind {type(mu).__name__}")


def _restricted_modular(
    f_abs: Callable[[np.ndarray, np.ndarray], np.ndarray],
    phi: GrowthFunction,
    mu: RestrictedMeasure,
    spec: QuadratureSpec,
    scale: float,
) -> float:
    reg = mu.region
    base = mu.base
    if isinstance(base, AtomicMeasure):
        xs, ys, ms = base.arrays()
        if xs.size == 0:
            return 0.0
        keep = reg.contains(xs, ys)
        if not np.any(keep):
            return 0.0
        return float(np.sum(ms[keep] * phi(f_abs(xs[keep], ys[keep]) / scale)))
    if isinstance(base, WeightedVolume):
        res = integrate_box(
            lambda x, y: phi(f_abs(x, y) / scale),
            base.alpha, reg.a, reg.b, reg.length, spec,
        )
        return res.value
    if isinstance(base, DensityMeasure):
        def slab(ys_: np.ndarray) -> np.ndarray:
            out = np.empty_like(np.atleast_1d(ys_), dtype=float)
            engine = lambda g, a, b: tanh_sinh(g, a, b, spec.abs_tol, spec.rel_tol)
            for i, y in enumerate(np.atleast_1d(ys_)):
                line = engine(
                    lambda xs: phi(f_abs(xs, np.full_like(xs, float(y))) / scale),
                    reg.a, reg.b,
                )
                out[i] = line.value * float(base.profile(np.asarray([y]))[0])
            return out

        return tanh_sinh(slab, 0.0, reg.length, spec.abs_tol, spec.rel_tol).value
    raise TypeError("restricted measures must wrap a primitive measure")


# ---------------------------------------------------------------------------
# Luxembourg norms
# ---------------------------------------------------------------------------

def luxembourg(
    modular_at: Callable[[float], float],
    tol: float = 1e-10,
    lam_lo: float = 1e-12,
    lam_hi: float = 1e12,
    fast_phi: Optional[GrowthFunction] = None,
    max_iter: int = 200,
) -> float:
    """``inf { lam > 0 : modular_at(lam) <= 1 }`` by bisection in log-lam.

    ``modular_at(lam)`` must be nonincreasing in ``lam``.  When ``fast_phi``
    is a pure power the closed form ``modular_at(1)^(1/p)`` is returned
    instead (exact for every measure); by default the bisection runs.
    """
    if fast_phi is not None and isinstance(fast_phi, Power):
        m1 = modular_at(1.0)
        if m1 == 0.0:
            return 0.0
        if math.isinf(m1):
            return math.inf
        return m1 ** (1.0 / fast_phi.p)
    if modular_at(lam_lo) <= 1.0:
        return 0.0
    hi_val = modular_at(lam_hi)
    if hi_val > 1.0 or math.isinf(hi_val):
        raise NormBracketError(
            f"modular still {hi_val} at lam = {lam_hi:g}; norm not representable"
        )
    lo, hi = lam_lo, lam_hi
    for _ in range(max_iter):
        mid = math.sqrt(lo * hi)
        m = modular_at(mid)
        if m > 1.0:
            lo = mid
        else:
            hi = mid
            if abs(m - 1.0) <= tol:
                break
        if hi / lo < 1.0 + 1e-14:
            break
    return hi


def luxembourg_step_line(
    f: StepFunction1D, phi: GrowthFunction, tol: float = 1e-10,
    fast_power: bool = False,
) -> float:
    """Luxembourg norm of a line step function (exact cell modulars)."""
    if not np.any(f.values):
        return 0.0
    return luxembourg(
        lambda lam: step_modular_line(f, phi, scale=lam),
        tol=tol,
        fast_phi=phi if fast_power else None,
    )


def default_height_grid(lo: float = 1e-4, hi: float = 1e4, per_decade: int = 8) -> np.ndarray:
    n = int(round(per_decade * math.log10(hi / lo))) + 1
    return np.geomspace(lo, hi, n)


@dataclass(frozen=True)
class HardyNormResult:
    modular_sup: float
    luxembourg_sup: float
    y_at_modular_max: float
    heights: tuple

    @property
    def modular(self) -> float:
        return self.modular_sup


def hardy_norm(
    f,
    phi: GrowthFunction,
    heights: Optional[np.ndarray] = None,
    spec: QuadratureSpec = DEFAULT_SPEC,
    fast_power: bool = True,
) -> HardyNormResult:
    """Sup over a geometric height grid of line modulars (modular form) and
    of line Luxembourg norms (norm form).  The grid sup is a lower bound of
    the exact sup over all heights; the tested kernel families are
    monotone or unimodal in height, which keeps it tight."""
    x_scale = float(getattr(f, "natural_scale", 1.0))
    x_center = float(getattr(f, "natural_center", 0.0))
    f_abs = f.abs_value if hasattr(f, "abs_value") else f
    ys = default_height_grid() if heights is None else np.asarray(heights, dtype=float)
    modulars = np.empty(ys.size)
    luxes = np.empty(ys.size)
    take_fast = fast_power and isinstance(phi, Power)
    for i, y in enumerate(ys):
        slice_abs = lambda x, y=y: f_abs(x, np.full_like(np.asarray(x, float), y))
        width = x_scale + y  # kernel slices flatten out at height y
        modulars[i] = line_modular(slice_abs, phi, spec, x_center=x_center, x_scale=width)
        if take_fast:
            luxes[i] = modulars[i] ** (1.0 / phi.p)
        else:
            luxes[i] = luxembourg(
                lambda lam: line_modular(
                    slice_abs, phi, spec, scale=lam, x_center=x_center, x_scale=width
                )
            )
    i = int(np.argmax(modulars))
    return HardyNormResult(
        modular_sup=float(np.max(modulars)),
        luxembourg_sup=float(np.max(luxes)),
        y_at_modular_max=float(ys[i]),
        heights=tuple(ys),
    )


@dataclass(frozen=True)
class BergmanNormResult:
    modular: float
    luxembourg: float
    alpha: float


def bergman_norm(
    f,
    phi: GrowthFunction,
    alpha: float,
    spec: QuadratureSpec = DEFAULT_SPEC,
    fast_power: bool = True,
) -> BergmanNormResult:
    """Half-plane modular against ``y^alpha`` and its Luxembourg norm."""
    mu = WeightedVolume(alpha)
    mod = modular_halfplane(f, phi, mu, spec)
    if fast_power and isinstance(phi, Power):
        lux = mod ** (1.0 / phi.p) if mod > 0 else 0.0
    else:
        lux = luxembourg(
            lambda lam: modular_halfplane(f, phi, mu, spec, scale=lam)
        )
    return BergmanNormResult(modular=mod, luxembourg=lux, alpha=alpha)


@dataclass(frozen=True)
class PointwiseBoundReport:
    ratios: tuple
    max_ratio: float
    probes: tuple


def pointwise_bound_check(
    f_abs: Callable[[np.ndarray, np.ndarray], np.ndarray],
    phi: GrowthFunction,
    alpha: float,
    probes: Sequence[tuple[float, float]],
    lux_norm: float,
) -> PointwiseBoundReport:
    """Ratios ``|f(z)| / (phi^{-1}(1/y^(2+alpha)) * ||f||)`` at the probes;
    the maximum is the empirical constant of the pointwise growth bound."""
    if lux_norm <= 0:
        raise ValueError("needs a positive Luxembourg norm")
    ratios = []
    for x, y in probes:
        bound = float(phi.inverse(1.0 / y ** (2.0 + alpha))) * lux_norm
        val = float(f_abs(np.asarray([x]), np.asarray([y]))[0])
        ratios.append(val / bound if bound > 0 else math.inf)
    return PointwiseBoundReport(tuple(ratios), max(ratios) if ratios else 0.0, tuple(probes))
