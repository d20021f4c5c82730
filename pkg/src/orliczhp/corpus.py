"""Seeded random test corpora: step functions on the line and on the
half-plane window, and atomic measure clouds.

Everything takes a ``numpy.random.Generator`` so a run is reproducible
from the 64-bit seed recorded in reports.
"""

from __future__ import annotations

import numpy as np

from .maximal import StepFunction1D, StepFunction2D
from .measure import AtomicMeasure

__all__ = ["random_step_1d", "random_step_2d", "random_atoms"]


def random_step_1d(
    rng: np.random.Generator,
    n_cells: int = 64,
    half_width: float = 8.0,
    zero_fraction: float = 0.35,
    scale: float = 1.0,
) -> StepFunction1D:
    """Compactly supported random step function; a fraction of cells is
    zeroed so level sets have nontrivial geometry."""
    edges = np.linspace(-half_width, half_width, n_cells + 1)
    values = rng.normal(0.0, scale, n_cells)
    values[rng.random(n_cells) < zero_fraction] = 0.0
    return StepFunction1D(edges, values)


def random_step_2d(
    rng: np.random.Generator,
    nx: int = 32,
    ny: int = 32,
    half_width: float = 4.0,
    height: float = 4.0,
    zero_fraction: float = 0.5,
    scale: float = 1.0,
) -> StepFunction2D:
    x_edges = np.linspace(-half_width, half_width, nx + 1)
    y_edges = np.linspace(0.0, height, ny + 1)
    values = rng.normal(0.0, scale, (nx, ny))
    values[rng.random((nx, ny)) < zero_fraction] = 0.0
    return StepFunction2D(x_edges, y_edges, values)


def random_atoms(
    rng: np.random.Generator,
    n_atoms: int = 12,
    x_span: float = 8.0,
    y_decades: tuple[float, float] = (-3.0, 1.5),
    mass_scale: float = 1.0,
) -> AtomicMeasure:
    """Atom cloud with log-uniform heights, so small Carleson boxes see
    mass as well as large ones."""
    xs = rng.uniform(-x_span, x_span, n_atoms)
    ys = 10.0 ** rng.uniform(y_decades[0], y_decades[1], n_atoms)
    masses = mass_scale * rng.exponential(1.0, n_atoms)
    return AtomicMeasure(tuple(xs), tuple(ys), tuple(masses))
