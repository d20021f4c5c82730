"""Maximal operators over step functions: Hardy-Littlewood and shifted
dyadic maximal functions on the line, their weighted analogues over
Carleson boxes in the half-plane, level-set decompositions, the
nontangential maximal function, and the Poisson extension.

Step functions are the universal test class here because every supremum
and level set is exactly computable for them: the average of a step
function over an interval is a ratio of piecewise-linear functions of the
endpoints, so the supremum over arbitrary intervals is attained with
endpoints in the breakpoint set plus the evaluation point itself.

The two shifted dyadic grids are ``2^j([0,1) + m + (-1)^j beta)`` for
``beta in {0, 1/3}``; together they dominate the full maximal function up
to the factor 6 exercised in the tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

__all__ = [
    "StepFunction1D",
    "StepFunction2D",
    "DyadicGrid",
    "hl_maximal",
    "dyadic_maximal",
    "dyadic_level_intervals",
    "weighted_box_average",
    "weighted_dyadic_maximal",
    "weighted_dyadic_maximal_batch",
    "weighted_maximal_over_boxes",
    "translated_box_table",
    "level_sets",
    "nontangential_maximal",
    "PoissonExtension",
]


@dataclass(frozen=True, eq=False)
class StepFunction1D:
    """Cell constants on ``[edges[0], edges[-1])``, zero outside."""

    edges: np.ndarray
    values: np.ndarray

    def __post_init__(self) -> None:
        edges = np.asarray(self.edges, dtype=float)
        values = np.asarray(self.values, dtype=float)
        if edges.ndim != 1 or values.shape != (edges.size - 1,):
            raise ValueError("need n+1 edges for n cell values")
        if np.any(np.diff(edges) <= 0):
            raise ValueError("edges must increase")
        if not np.all(np.isfinite(values)):
            raise ValueError("cell values must be finite")
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "values", values)

    @property
    def window(self) -> tuple[float, float]:
        return float(self.edges[0]), float(self.edges[-1])

    def __call__(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        idx = np.searchsorted(self.edges, x, side="right") - 1
        inside = (idx >= 0) & (idx < self.values.size) & (x < self.edges[-1])
        out = np.zeros_like(x, dtype=float)
        out[inside] = self.values[idx[inside]]
        return out

    def abs_prefix(self) -> np.ndarray:
        """F with F[i] = integral of |f| over (-inf, edges[i]]."""
        widths = np.diff(self.edges)
        return np.concatenate([[0.0], np.cumsum(np.abs(self.values) * widths)])

    def abs_integral(self) -> float:
        return float(self.abs_prefix()[-1])

    def scaled(self, c: float) -> "StepFunction1D":
        return StepFunction1D(self.edges, c * self.values)


def _interp_prefix(f: StepFunction1D):
    prefix = f.abs_prefix()
    edges = f.edges

    def F(t: np.ndarray) -> np.ndarray:
        return np.interp(t, edges, prefix)

    return F


def hl_maximal(f: StepFunction1D, x: float) -> float:
    """Exact Hardy-Littlewood maximal value ``sup_I avg_I |f|`` over all
    intervals containing ``x``; candidate endpoints are the cell edges
    plus ``x`` itself, which is exhaustive for step functions."""
    F = _interp_prefix(f)
    edges = f.edges
    left = np.concatenate([edges[edges <= x], [x]])
    right = np.concatenate([[x], edges[edges >= x]])
    Fa = F(left)
    Fb = F(right)
    width = right[None, :] - left[:, None]
    with np.errstate(divide="ignore", invalid="ignore"):
        avg = (Fb[None, :] - Fa[:, None]) / width
    avg = np.where(width > 0, avg, -np.inf)
    return float(max(np.max(avg), 0.0))


@dataclass(frozen=True)
class DyadicGrid:
    """Shifted dyadic system with shift pattern ``(-1)^j * beta``."""

    beta: float = 0.0
    j_min: int = -6
    j_max: int = 8

    def __post_init__(self) -> None:
        if self.beta not in (0.0, 1.0 / 3.0):
            raise ValueError("shift must be 0 or 1/3")
        if self.j_min > self.j_max:
            raise ValueError("need j_min <= j_max")

    def interval_containing(self, j: int, x) -> tuple[np.ndarray, np.ndarray]:
        scale = 2.0 ** j
        off = self.beta if j % 2 == 0 else -self.beta
        m = np.floor(np.asarray(x, dtype=float) / scale - off)
        a = scale * (m + off)
        return a, a + scale

    def intervals_at(self, j: int, x_lo: float, x_hi: float) -> tuple[np.ndarray, np.ndarray]:
        """All grid intervals at scale j meeting [x_lo, x_hi]."""
        scale = 2.0 ** j
        off = self.beta if j % 2 == 0 else -self.beta
        m_lo = math.floor(x_lo / scale - off)
        m_hi = math.floor(x_hi / scale - off)
        m = np.arange(m_lo, m_hi + 1)
        a = scale * (m + off)
        return a, a + scale


def dyadic_maximal(f: StepFunction1D, grid: DyadicGrid, x) -> np.ndarray:
    """Dyadic maximal function over the grid's scale range, vectorized in x."""
    F = _interp_prefix(f)
    x = np.asarray(x, dtype=float)
    best = np.zeros_like(x)
    for j in range(grid.j_min, grid.j_max + 1):
        a, b = grid.interval_containing(j, x)
        avg = (F(b) - F(a)) / (b - a)
        best = np.maximum(best, avg)
    return best


def dyadic_level_intervals(
    f: StepFunction1D, grid: DyadicGrid, lam: float
) -> list[tuple[float, float]]:
    """Maximal grid intervals with average of |f| above ``lam``.

    Their union is exactly ``{dyadic maximal > lam}`` for the same scale
    range, so level-set measures of the dyadic maximal are cell-exact.
    """
    if lam <= 0:
        raise ValueError("level must be positive")
    F = _interp_prefix(f)
    x_lo, x_hi = f.window
    taken: list[tuple[float, float]] = []

    def descend(j: int, a: float, b: float) -> None:
        if (F(b) - F(a)) / (b - a) > lam:
            taken.append((a, b))
            return
        if j == grid.j_min:
            return
        for aa, bb in zip(*grid.intervals_at(j - 1, a, b - 1e-12)):
            if bb <= a or aa >= b:
                continue
            descend(j - 1, aa, bb)

    # top-scale intervals covering the support window
    seen = set()
    for a, b in zip(*grid.intervals_at(grid.j_max, x_lo, x_hi)):
        if (a, b) not in seen:
            seen.add((a, b))
            descend(grid.j_max, float(a), float(b))
    return sorted(taken)


# ---------------------------------------------------------------------------
# Weighted half-plane operators
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class StepFunction2D:
    """Cell constants on ``[x0, x1) x (0, y1)``; zero outside."""

    x_edges: np.ndarray
    y_edges: np.ndarray
    values: np.ndarray  # shape (nx, ny)

    def __post_init__(self) -> None:
        xe = np.asarray(self.x_edges, dtype=float)
        ye = np.asarray(self.y_edges, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if v.shape != (xe.size - 1, ye.size - 1):
            raise ValueError("value grid must match edge counts")
        if np.any(np.diff(xe) <= 0) or np.any(np.diff(ye) <= 0):
            raise ValueError("edges must increase")
        if ye[0] < 0:
            raise ValueError("height edges must start at or above 0")
        object.__setattr__(self, "x_edges", xe)
        object.__setattr__(self, "y_edges", ye)
        object.__setattr__(self, "values", v)

    def __call__(self, x, y) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        ix = np.searchsorted(self.x_edges, x, side="right") - 1
        iy = np.searchsorted(self.y_edges, y, side="right") - 1
        inside = (
            (ix >= 0) & (ix < self.values.shape[0]) & (x < self.x_edges[-1])
            & (iy >= 0) & (iy < self.values.shape[1]) & (y < self.y_edges[-1])
        )
        out = np.zeros(np.broadcast(x, y).shape, dtype=float)
        ixc = np.clip(ix, 0, self.values.shape[0] - 1)
        iyc = np.clip(iy, 0, self.values.shape[1] - 1)
        vals = self.values[ixc, iyc]
        out[inside] = np.broadcast_to(vals, out.shape)[inside]
        return out


def _x_overlap(xe: np.ndarray, a: float, b: float) -> np.ndarray:
    return np.clip(np.minimum(xe[1:], b) - np.maximum(xe[:-1], a), 0.0, None)


def _y_overlap_weighted(ye: np.ndarray, y0: float, y1: float, alpha: float) -> np.ndarray:
    lo = np.maximum(ye[:-1], y0)
    hi = np.minimum(ye[1:], y1)
    hi = np.maximum(hi, lo)
    return (hi ** (1.0 + alpha) - lo ** (1.0 + alpha)) / (1.0 + alpha)


def weighted_box_average(
    f: StepFunction2D, alpha: float, a: float, b: float
) -> float:
    """Average of |f| over the box ``[a, b) x (0, b-a)`` against the
    ``y^alpha`` volume, cell-exact."""
    length = b - a
    wx = _x_overlap(f.x_edges, a, b)
    wy = _y_overlap_weighted(f.y_edges, 0.0, length, alpha)
    integral = float(wx @ np.abs(f.values) @ wy)
    vol = length ** (2.0 + alpha) / (1.0 + alpha)
    return integral / vol


def weighted_dyadic_maximal(
    f: StepFunction2D,
    alpha: float,
    z: tuple[float, float],
    j_min: int = -6,
    j_max: int = 8,
) -> float:
    """Supremum of weighted box averages over standard dyadic intervals
    whose box contains ``z = (x, y)``."""
    x, y = z
    grid = DyadicGrid(0.0, j_min, j_max)
    best = 0.0
    j_start = max(j_min, math.ceil(math.log2(y)) if y > 0 else j_min)
    for j in range(j_start, j_max + 1):
        if 2.0 ** j <= y:
            continue
        a, b = grid.interval_containing(j, x)
        best = max(best, weighted_box_average(f, alpha, float(a), float(b)))
    return best


def _scale_prefix(f: StepFunction2D, alpha: float, length: float):
    """Prefix integral in x of ``int_0^length |f| y^alpha dy``; evaluating
    its increments gives every box integral at this scale in one interp."""
    wy = _y_overlap_weighted(f.y_edges, 0.0, length, alpha)
    per_cell = (np.abs(f.values) @ wy) * np.diff(f.x_edges)
    prefix = np.concatenate([[0.0], np.cumsum(per_cell)])
    return f.x_edges, prefix


def translated_box_table(
    f: StepFunction2D,
    alpha: float,
    j_min: int,
    j_max: int,
    extent: float,
    step_fraction: float = 0.25,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Averages of |f| over a translated family of boxes standing in for
    all intervals; returns (a, length, average) arrays."""
    a_list, len_list, avg_list = [], [], []
    for j in range(j_min, j_max + 1):
        length = 2.0 ** j
        step = length * step_fraction
        n = int(math.floor(2.0 * extent / step))
        starts = -extent + step * np.arange(n + 1)
        edges, prefix = _scale_prefix(f, alpha, length)
        integrals = np.interp(starts + length, edges, prefix) - np.interp(starts, edges, prefix)
        vol = length ** (2.0 + alpha) / (1.0 + alpha)
        a_list.append(starts)
        len_list.append(np.full_like(starts, length))
        avg_list.append(integrals / vol)
    return np.concatenate(a_list), np.concatenate(len_list), np.concatenate(avg_list)


def weighted_dyadic_maximal_batch(
    f: StepFunction2D,
    alpha: float,
    xs: np.ndarray,
    ys: np.ndarray,
    j_min: int = -6,
    j_max: int = 8,
) -> np.ndarray:
    """Weighted dyadic maximal function at many probe points at once."""
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    best = np.zeros_like(xs)
    for j in range(j_min, j_max + 1):
        length = 2.0 ** j
        edges, prefix = _scale_prefix(f, alpha, length)
        a = length * np.floor(xs / length)
        vals = np.interp(a + length, edges, prefix) - np.interp(a, edges, prefix)
        vol = length ** (2.0 + alpha) / (1.0 + alpha)
        best = np.maximum(best, np.where(ys < length, vals / vol, 0.0))
    return best


def weighted_maximal_over_boxes(
    table: tuple[np.ndarray, np.ndarray, np.ndarray],
    z: tuple[np.ndarray, np.ndarray],
) -> np.ndarray:
    """Maximal function over a precomputed box table, vectorized over probes."""
    a, length, avg = table
    x, y = np.asarray(z[0], float), np.asarray(z[1], float)
    contains = (
        (x[:, None] >= a[None, :])
        & (x[:, None] < (a + length)[None, :])
        & (y[:, None] < length[None, :])
    )
    vals = np.where(contains, avg[None, :], 0.0)
    return vals.max(axis=1)


def level_sets(
    f: StepFunction2D,
    alpha: float,
    lam: float,
    j_min: int = -6,
    j_max: int = 8,
) -> list[tuple[float, float]]:
    """Disjoint maximal standard dyadic intervals whose box average of |f|
    exceeds ``lam``; the union of their boxes is the dyadic level set over
    this scale range."""
    if lam <= 0:
        raise ValueError("level must be positive")
    grid = DyadicGrid(0.0, j_min, j_max)
    x_lo, x_hi = float(f.x_edges[0]), float(f.x_edges[-1])
    taken: list[tuple[float, float]] = []

    def descend(j: int, a: float, b: float) -> None:
        if weighted_box_average(f, alpha, a, b) > lam:
            taken.append((a, b))
            return
        if j == j_min:
            return
        mid = 0.5 * (a + b)
        descend(j - 1, a, mid)
        descend(j - 1, mid, b)

    for a, b in zip(*grid.intervals_at(j_max, x_lo, x_hi)):
        descend(j_max, float(a), float(b))
    return sorted(taken)


# ---------------------------------------------------------------------------
# Nontangential maximal function and Poisson extension
# ---------------------------------------------------------------------------

def nontangential_maximal(
    f_abs: Callable[[np.ndarray, np.ndarray], np.ndarray],
    x,
    y_range: tuple[float, float] = (1e-3, 1e3),
    per_decade: int = 64,
    n_aperture: int = 33,
) -> np.ndarray:
    """Supremum of |f| over the truncated cone ``|t - x| < y`` sampled
    geometrically in y and uniformly across the aperture; a lower bound of
    the true supremum.  Vectorized over probe points."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    y_lo, y_hi = y_range
    n_y = max(2, int(round(per_decade * math.log10(y_hi / y_lo))) + 1)
    ys = np.geomspace(y_lo, y_hi, n_y)
    u = np.linspace(-1.0, 1.0, n_aperture) * (1.0 - 1e-9)
    # sample t = x + y*u over (probe, y, aperture)
    t = x[:, None, None] + ys[None, :, None] * u[None, None, :]
    yy = np.broadcast_to(ys[None, :, None], t.shape)
    vals = f_abs(t, yy)
    return np.max(np.asarray(vals), axis=(1, 2))


@dataclass(frozen=True, eq=False)
class PoissonExtension:
    """Harmonic extension of a step function by the Poisson kernel
    ``(1/pi) * y / (t^2 + y^2)``, evaluated in closed form per cell."""

    g: StepFunction1D

    def __call__(self, x, y) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        out = np.zeros(np.broadcast(x, y).shape, dtype=float)
        edges = self.g.edges
        for i, v in enumerate(self.g.values):
            if v == 0.0:
                continue
            out = out + (v / math.pi) * (
                np.arctan((x - edges[i]) / y) - np.arctan((x - edges[i + 1]) / y)
            )
        return out

    def abs(self) -> Callable[[np.ndarray, np.ndarray], np.ndarray]:
        return lambda x, y: np.abs(self(x, y))
