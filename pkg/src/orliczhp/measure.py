"""Positive measures on the upper half-plane in computable forms, Carleson
boxes, and the box-testing sweep.

A Carleson box over an interval ``I = [a, b)`` is the half-open square
``Q_I = {x in I, 0 < y < |I|}``.  Measures come in four kinds:

* ``AtomicMeasure``     -- finitely many point masses strictly inside C_+,
* ``WeightedVolume``    -- ``y^alpha dx dy`` with alpha > -1,
* ``DensityMeasure``    -- ``rho(y) dx dy`` for a height-only density,
* ``RestrictedMeasure`` -- a base measure cut to a box region.

Box masses are exact sums for atoms, closed form ``|I|^(2+alpha)/(1+alpha)``
for weighted volume, and quadrature with a divergence probe for densities.
The probe halves the height cutoff twice and inspects the mass increments:
an increment that fails to decay geometrically (second increment at least
half the first, and non-negligible) marks the mass divergent, as does
outright growth above ten percent per halving.  The ratio rule is what
catches log-log divergences whose per-halving growth is arbitrarily small.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Union

import numpy as np

from .growth import GrowthFunction, _growing_at_edge
from .integrals import QuadratureSpec, DEFAULT_SPEC, tanh_sinh

__all__ = [
    "CarlesonBox",
    "AtomicMeasure",
    "WeightedVolume",
    "DensityMeasure",
    "RestrictedMeasure",
    "UpperHalfPlaneMeasure",
    "BoxFamily",
    "BoxSweep",
    "box_mass",
    "carleson_box_constant",
    "total_mass",
    "PixelGrid",
    "pixel_masses",
]


@dataclass(frozen=True)
class CarlesonBox:
    """Interval ``[a, b)`` on the line with its square above it."""

    center_x: float
    length: float

    def __post_init__(self) -> None:
        if self.length <= 0:
            raise ValueError("box length must be positive")

    @property
    def a(self) -> float:
        return self.center_x - 0.5 * self.length

    @property
    def b(self) -> float:
        return self.center_x + 0.5 * self.length

    @property
    def area(self) -> float:
        return self.length * self.length

    def contains(self, x, y) -> np.ndarray:
        x = np.asarray(x)
        y = np.asarray(y)
        return (x >= self.a) & (x < self.b) & (y > 0) & (y < self.length)


@dataclass(frozen=True)
class AtomicMeasure:
    """Point masses at ``(x_k, y_k)`` with ``y_k > 0`` and nonnegative mass."""

    xs: tuple
    ys: tuple
    masses: tuple

    def __post_init__(self) -> None:
        xs = np.asarray(self.xs, dtype=float)
        ys = np.asarray(self.ys, dtype=float)
        ms = np.asarray(self.masses, dtype=float)
        if not (xs.shape == ys.shape == ms.shape) or xs.ndim != 1:
            raise ValueError("atom arrays must be matching 1-d sequences")
        if xs.size and np.any(ys <= 0):
            raise ValueError("atoms must lie strictly inside the upper half-plane")
        if xs.size and np.any(ms < 0):
            raise ValueError("masses must be nonnegative")
        object.__setattr__(self, "xs", tuple(xs))
        object.__setattr__(self, "ys", tuple(ys))
        object.__setattr__(self, "masses", tuple(ms))

    def arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        return (np.asarray(self.xs), np.asarray(self.ys), np.asarray(self.masses))

    @staticmethod
    def empty() -> "AtomicMeasure":
        return AtomicMeasure((), (), ())


@dataclass(frozen=True)
class WeightedVolume:
    """The measure ``y^alpha dx dy``, alpha > -1."""

    alpha: float = 0.0

    def __post_init__(self) -> None:
        if self.alpha <= -1:
            raise ValueError("weight exponent must exceed -1")


@dataclass(frozen=True)
class DensityMeasure:
    """``rho(y) dx dy`` for a nonnegative height-only density.

    The density grammar of the config layer only produces height profiles;
    horizontal structure enters through :class:`RestrictedMeasure`.
    """

    profile: Callable[[np.ndarray], np.ndarray]
    label: str = "density"

    def __post_init__(self) -> None:
        probe = self.profile(np.geomspace(1e-3, 1e2, 11))
        if np.any(np.asarray(probe) < 0):
            raise ValueError("density must be nonnegative on sample probes")


@dataclass(frozen=True)
class RestrictedMeasure:
    base: "UpperHalfPlaneMeasure"
    region: CarlesonBox


UpperHalfPlaneMeasure = Union[AtomicMeasure, WeightedVolume, DensityMeasure, RestrictedMeasure]


def is_x_independent(mu: UpperHalfPlaneMeasure) -> bool:
    return isinstance(mu, (WeightedVolume, DensityMeasure))


# ---------------------------------------------------------------------------
# Box masses
# ---------------------------------------------------------------------------

def _profile_mass(
    profile: Callable[[np.ndarray], np.ndarray],
    y_hi: float,
    spec: QuadratureSpec,
    y_lo: float = 0.0,
) -> float:
    """Height integral of a density with the two-halving divergence probe.

    Returns ``inf`` when the increments ``int_{c/2}^{c} rho`` fail to decay.
    """
    if y_hi <= y_lo:
        return 0.0
    if y_lo > 0.0:
        return tanh_sinh(profile, y_lo, y_hi, spec.abs_tol, spec.rel_tol).value
    c = min(spec.y_min, 0.25 * y_hi)
    base = tanh_sinh(profile, c, y_hi, spec.abs_tol, spec.rel_tol).value
    d1 = tanh_sinh(profile, c / 2, c, spec.abs_tol, spec.rel_tol).value
    d2 = tanh_sinh(profile, c / 4, c / 2, spec.abs_tol, spec.rel_tol).value
    floor = 1e-12
    spec_rule = d1 > 0.1 * max(base, floor) and d2 > 0.1 * max(base + d1, floor)
    ratio_rule = d2 >= 0.5 * d1 and d2 > 1e-3 * max(base, floor)
    if spec_rule or ratio_rule:
        return math.inf
    full = tanh_sinh(profile, 0.0, y_hi, spec.abs_tol, spec.rel_tol)
    return full.value


def box_mass(
    mu: UpperHalfPlaneMeasure,
    box: CarlesonBox,
    spec: QuadratureSpec = DEFAULT_SPEC,
) -> float:
    """Mass of the Carleson box; ``inf`` flags a divergent density mass."""
    if isinstance(mu, AtomicMeasure):
        xs, ys, ms = mu.arrays()
        if xs.size == 0:
            return 0.0
        return float(ms[box.contains(xs, ys)].sum())
    if isinstance(mu, WeightedVolume):
        return box.length ** (2.0 + mu.alpha) / (1.0 + mu.alpha)
    if isinstance(mu, DensityMeasure):
        return box.length * _profile_mass(mu.profile, box.length, spec)
    if isinstance(mu, RestrictedMeasure):
        return _restricted_box_mass(mu, box, spec)
    raise TypeError(f"unknown measure kind {type(mu).__name__}")


def _restricted_box_mass(
    mu: RestrictedMeasure, box: CarlesonBox, spec: QuadratureSpec
) -> float:
    reg = mu.region
    lo = max(box.a, reg.a)
    hi = min(box.b, reg.b)
    h = min(box.length, reg.length)
    if hi <= lo or h <= 0:
        return 0.0
    base = mu.base
    if isinstance(base, AtomicMeasure):
        xs, ys, ms = base.arrays()
        if xs.size == 0:
            return 0.0
        keep = (xs >= lo) & (xs < hi) & (ys > 0) & (ys < h)
        return float(ms[keep].sum())
    if isinstance(base, WeightedVolume):
        a = base.alpha
        return (hi - lo) * h ** (1.0 + a) / (1.0 + a)
    if isinstance(base, DensityMeasure):
        return (hi - lo) * _profile_mass(base.profile, h, spec)
    raise TypeError("restricted measures must wrap a primitive measure")


def total_mass(mu: UpperHalfPlaneMeasure) -> float:
    """Total mass when finitely supported / restricted; ``inf`` otherwise."""
    if isinstance(mu, AtomicMeasure):
        return float(np.sum(mu.arrays()[2])) if len(mu.masses) else 0.0
    if isinstance(mu, RestrictedMeasure):
        return _restricted_box_mass(
            mu, CarlesonBox(mu.region.center_x, mu.region.length), DEFAULT_SPEC
        )
    return math.inf


# ---------------------------------------------------------------------------
# Families and the box-testing sweep
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BoxFamily:
    """Dyadic lengths ``2^j`` with translated copies covering ``[-X, X]``.

    Steps are a fixed fraction of the length (at most one half, so that
    neighbouring boxes overlap); boxes longer than the window contribute a
    single centred copy.  The sweep over this family is a lower bound for
    the supremum over all intervals.
    """

    j_min: int = -10
    j_max: int = 10
    extent: float = 16.0
    step_fraction: float = 0.25
    extra: tuple = ()

    def __post_init__(self) -> None:
        if self.j_min > self.j_max:
            raise ValueError("need j_min <= j_max")
        if not (0 < self.step_fraction <= 0.5):
            raise ValueError("translation step must be at most half a length")

    def lengths(self) -> np.ndarray:
        return 2.0 ** np.arange(self.j_min, self.j_max + 1, dtype=float)

    def centers_at(self, length: float) -> np.ndarray:
        if length >= 2.0 * self.extent:
            return np.array([0.0])
        step = length * self.step_fraction
        k = int(math.floor(2.0 * self.extent / step))
        return -self.extent + step * np.arange(k + 1)


def adapted_box_family(mu: UpperHalfPlaneMeasure, base: BoxFamily = BoxFamily()) -> BoxFamily:
    """Extend a family so it sees past an atomic measure's height range.

    The growth-trend verdict needs scales below the lowest atom (where box
    values drop to zero) to distinguish a steep but finite peak from
    genuine unboundedness; measures with mass at every height are returned
    with the base family unchanged.
    """
    atoms = None
    if isinstance(mu, AtomicMeasure):
        atoms = mu
    elif isinstance(mu, RestrictedMeasure) and isinstance(mu.base, AtomicMeasure):
        atoms = mu.base
    if atoms is None or len(atoms.masses) == 0:
        return base
    xs, ys, ms = atoms.arrays()
    live = ms > 0
    if not np.any(live):
        return base
    j_min = min(base.j_min, int(math.floor(math.log2(float(ys[live].min())))) - 1)
    extent = max(base.extent, float(np.abs(xs[live]).max()) + float(ys[live].max()))
    j_max = max(base.j_max, int(math.ceil(math.log2(2.0 * extent))) + 1)
    return BoxFamily(j_min, j_max, extent, base.step_fraction, base.extra)


@dataclass(frozen=True)
class BoxSweep:
    constant: float
    witness: Optional[CarlesonBox]
    divergent_mass: bool
    trend: str                      # bounded | growing_small_scale | growing_large_scale
    per_scale: tuple                # (length, max value) pairs
    note: str = "family sup (lower bound for the supremum over all intervals)"

    @property
    def finite(self) -> bool:
        return not self.divergent_mass and self.trend == "bounded"


def _atomic_scale_masses(
    xs: np.ndarray, ms: np.ndarray, ys: np.ndarray,
    length: float, centers: np.ndarray,
) -> np.ndarray:
    keep = ys < length
    if not np.any(keep):
        return np.zeros_like(centers)
    xs_k = xs[keep]
    ms_k = ms[keep]
    o = np.argsort(xs_k, kind="stable")
    xs_s = xs_k[o]
    cum = np.concatenate([[0.0], np.cumsum(ms_k[o])])
    lo = np.searchsorted(xs_s, centers - 0.5 * length, side="left")
    hi = np.searchsorted(xs_s, centers + 0.5 * length, side="left")
    return cum[hi] - cum[lo]


def carleson_box_constant(
    mu: UpperHalfPlaneMeasure,
    phi: GrowthFunction,
    s: float,
    family: BoxFamily = BoxFamily(),
    spec: QuadratureSpec = DEFAULT_SPEC,
) -> BoxSweep:
    """Family supremum of ``mu(Q_I) * phi(1/|I|^s)`` with its witness box.

    Aside from divergent box masses, an unbounded testing constant shows up
    as growth of the per-scale maxima toward a scale edge; both cases mark
    the sweep not finite.  Ties break toward the smallest length, then the
    leftmost center, so the witness is deterministic.
    """
    if s <= 0:
        raise ValueError("scale exponent s must be positive")
    best = -math.inf
    witness: Optional[CarlesonBox] = None
    per_scale: list[tuple[float, float]] = []
    divergent = False

    if isinstance(mu, AtomicMeasure):
        xs, ys, ms = mu.arrays()

    for length in family.lengths():
        weight = phi(1.0 / length ** s)
        centers = family.centers_at(length)
        if is_x_independent(mu):
            masses = np.array([box_mass(mu, CarlesonBox(0.0, length), spec)])
            centers = np.array([0.0])
        elif isinstance(mu, AtomicMeasure):
            masses = _atomic_scale_masses(xs, ms, ys, length, centers)
        else:
            masses = np.array(
                [box_mass(mu, CarlesonBox(c, length), spec) for c in centers]
            )
        if np.any(np.isinf(masses)):
            divergent = True
            witness = CarlesonBox(float(centers[int(np.argmax(np.isinf(masses)))]), length)
            per_scale.append((float(length), math.inf))
            break
        vals = masses * weight
        i = int(np.argmax(vals))
        per_scale.append((float(length), float(vals[i])))
        if vals[i] > best:
            best = float(vals[i])
            witness = CarlesonBox(float(centers[i]), float(length))

    for extra in family.extra:
        m = box_mass(mu, extra, spec)
        if math.isinf(m):
            divergent = True
            witness = extra
            break
        v = m * phi(1.0 / extra.length ** s)
        if v > best:
            best = v
            witness = extra

    if divergent:
        return BoxSweep(math.inf, witness, True, "bounded", tuple(per_scale))

    lengths = np.array([p[0] for p in per_scale])
    maxima = np.array([p[1] for p in per_scale])
    # A zero value at the extreme scale already bounds that edge (e.g. all
    # atoms sit above the smallest boxes), so growth is only meaningful when
    # the values reach the edge of the family.
    trend = "bounded"
    if maxima.size and maxima[0] > 0 and _growing_at_edge(lengths, maxima, right=False):
        trend = "growing_small_scale"
    elif maxima.size and maxima[-1] > 0 and _growing_at_edge(lengths, maxima, right=True):
        trend = "growing_large_scale"
    return BoxSweep(max(best, 0.0), witness, False, trend, tuple(per_scale))


# ---------------------------------------------------------------------------
# Pixelization (shared by the weak-type and level-set testers)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PixelGrid:
    """Uniform pixel decomposition of ``[x_lo, x_hi] x (0, y_hi]``."""

    x_lo: float = -16.0
    x_hi: float = 16.0
    y_hi: float = 16.0
    nx: int = 512
    ny: int = 512

    def centers(self) -> tuple[np.ndarray, np.ndarray]:
        xs = np.linspace(self.x_lo, self.x_hi, self.nx + 1)
        ys = np.linspace(0.0, self.y_hi, self.ny + 1)
        return 0.5 * (xs[:-1] + xs[1:]), 0.5 * (ys[:-1] + ys[1:])

    def edges(self) -> tuple[np.ndarray, np.ndarray]:
        return (
            np.linspace(self.x_lo, self.x_hi, self.nx + 1),
            np.linspace(0.0, self.y_hi, self.ny + 1),
        )


def pixel_masses(mu: UpperHalfPlaneMeasure, grid: PixelGrid) -> np.ndarray:
    """Per-pixel masses, exact for atoms and weighted volume, midpoint for
    densities; shape (nx, ny)."""
    xe, ye = grid.edges()
    dx = xe[1] - xe[0]
    if isinstance(mu, AtomicMeasure):
        xs, ys, ms = mu.arrays()
        out, _, _ = np.histogram2d(xs, ys, bins=[xe, ye], weights=ms)
        return out
    if isinstance(mu, WeightedVolume):
        a = mu.alpha
        col = (ye[1:] ** (1.0 + a) - ye[:-1] ** (1.0 + a)) / (1.0 + a)
        return np.tile(col * dx, (grid.nx, 1))
    if isinstance(mu, DensityMeasure):
        yc = 0.5 * (ye[:-1] + ye[1:])
        col = mu.profile(yc) * (ye[1:] - ye[:-1])
        return np.tile(col * dx, (grid.nx, 1))
    if isinstance(mu, RestrictedMeasure):
        if isinstance(mu.base, AtomicMeasure):
            xs, ys, ms = mu.base.arrays()
            keep = mu.region.contains(xs, ys)
            inside = AtomicMeasure(tuple(xs[keep]), tuple(ys[keep]), tuple(ms[keep]))
            return pixel_masses(inside, grid)
        base = pixel_masses(mu.base, grid)
        reg = mu.region
        fx = np.clip(
            (np.minimum(xe[1:], reg.b) - np.maximum(xe[:-1], reg.a)) / dx, 0.0, 1.0
        )
        dy = ye[1:] - ye[:-1]
        fy = np.clip((np.minimum(ye[1:], reg.length) - ye[:-1]) / dy, 0.0, 1.0)
        return base * fx[:, None] * fy[None, :]
    raise TypeError(f"unknown measure kind {type(mu).__name__}")
