"""Uniform 1D grids and grid-aligned scalar fields.

Two alignments matter here: point values live on nodes x_j, cell averages
live on cells [x_j, x_{j+1}).  Everything downstream (interpolation,
flux updates, switching indicators) is written against these two layouts.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "Alignment",
    "Grid1D",
    "Field",
    "SupportWindow",
    "TimeSpec",
    "build_grid",
    "init_point_values",
    "init_cell_averages",
]

# 5-point Gauss-Legendre on [-1, 1]; exact for polynomials up to degree 9.
_GL_X, _GL_W = np.polynomial.legendre.leggauss(5)


class Alignment(enum.Enum):
    NODE = "node"
    CELL = "cell"


@dataclass(frozen=True)
class Grid1D:
    """Uniform grid on [a, b] with m cells and m+1 nodes."""

    a: float
    b: float
    m: int

    def __post_init__(self) -> None:
        if not (math.isfinite(self.a) and math.isfinite(self.b)):
            raise ValueError("grid endpoints must be finite")
        if self.b <= self.a:
            raise ValueError(f"need a < b, got a={self.a}, b={self.b}")
        if self.m < 3:
            raise ValueError(f"need at least 3 cells (stencil width), got m={self.m}")

    @property
    def dx(self) -> float:
        return (self.b - self.a) / self.m

    @property
    def n_nodes(self) -> int:
        return self.m + 1

    @property
    def n_cells(self) -> int:
        return self.m

    @property
    def nodes(self) -> np.ndarray:
        """Node coordinates x_j = a + j*dx, j = 0..m."""
        return self.a + self.dx * np.arange(self.m + 1)

    @property
    def centers(self) -> np.ndarray:
        """Cell midpoints x_j + dx/2."""
        return self.a + self.dx * (np.arange(self.m) + 0.5)

    def size(self, alignment: Alignment) -> int:
        return self.n_nodes if alignment is Alignment.NODE else self.n_cells

    def coords(self, alignment: Alignment) -> np.ndarray:
        return self.nodes if alignment is Alignment.NODE else self.centers


def build_grid(a: float, b: float, m: int) -> Grid1D:
    """Construct a uniform grid on [a, b] with m cells.

    Raises
    ------
    ValueError
        If b <= a or m < 3.
    """
    return Grid1D(float(a), float(b), int(m))


@dataclass(frozen=True)
class Field:
    """Scalar field attached to a grid, node- or cell-aligned.

    Values are copied on construction and frozen; updates produce new
    Field instances, so snapshots can be shared safely.
    """

    grid: Grid1D
    alignment: Alignment
    values: np.ndarray

    def __post_init__(self) -> None:
        vals = np.asarray(self.values, dtype=float).copy()
        if vals.ndim != 1:
            raise ValueError(f"field values must be 1-D, got shape {vals.shape}")
        expected = self.grid.size(self.alignment)
        if vals.shape[0] != expected:
            raise ValueError(
                f"{self.alignment.value}-aligned field needs {expected} values, "
                f"got {vals.shape[0]}"
            )
        if not np.all(np.isfinite(vals)):
            raise ValueError("field values must be finite")
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)

    @property
    def coords(self) -> np.ndarray:
        return self.grid.coords(self.alignment)

    def with_values(self, values: np.ndarray) -> "Field":
        return Field(self.grid, self.alignment, values)


@dataclass(frozen=True)
class SupportWindow:
    """Closed node-index range [j_min, j_max] known to contain the support."""

    j_min: int
    j_max: int

    def __post_init__(self) -> None:
        if self.j_min > self.j_max:
            raise ValueError(f"empty window: [{self.j_min}, {self.j_max}]")

    def clip(self, n: int) -> "SupportWindow":
        return SupportWindow(max(self.j_min, 0), min(self.j_max, n - 1))

    @property
    def node_slice(self) -> slice:
        return slice(self.j_min, self.j_max + 1)

    def __contains__(self, j: int) -> bool:
        return self.j_min <= j <= self.j_max


@dataclass(frozen=True)
class TimeSpec:
    """Step size and horizon; n_steps*dt must land on T to within one dt."""

    dt: float
    T: float
    n_steps: int = field(init=False)

    def __post_init__(self) -> None:
        if not (self.dt > 0 and math.isfinite(self.dt)):
            raise ValueError(f"need dt > 0, got {self.dt}")
        if not (self.T > 0 and math.isfinite(self.T)):
            raise ValueError(f"need T > 0, got {self.T}")
        n = int(round(self.T / self.dt))
        if n < 1 or abs(n * self.dt - self.T) > self.dt:
            raise ValueError(
                f"dt={self.dt} does not tile T={self.T} (n_steps*dt off by more than dt)"
            )
        object.__setattr__(self, "n_steps", n)


def _eval_on(fn, x: np.ndarray) -> np.ndarray:
    """Evaluate fn on an array, tolerating scalar-only callables."""
    try:
        out = np.asarray(fn(x), dtype=float)
        if out.shape == x.shape:
            return out
    except (TypeError, ValueError):
        pass
    return np.array([float(fn(xi)) for xi in x])


def init_point_values(grid: Grid1D, ic) -> Field:
    """Sample an initial condition at the nodes.

    Parameters
    ----------
    grid : Grid1D
    ic : callable
        Initial profile; vectorized or scalar.

    Returns
    -------
    Field
        Node-aligned field with values ic(x_j).
    """
    vals = _eval_on(ic, grid.nodes)
    if not np.all(np.isfinite(vals)):
        raise ValueError("initial condition produced non-finite node values")
    return Field(grid, Alignment.NODE, vals)


def init_cell_averages(grid: Grid1D, ic, antiderivative=None) -> Field:
    """Cell averages of an initial condition.

    Uses the exact antiderivative when one is supplied (or attached to
    ``ic`` as ``ic.antiderivative``); otherwise a fixed 5-point
    Gauss-Legendre rule per cell, which is exact for polynomials of
    degree <= 9.

    Returns
    -------
    Field
        Cell-aligned field of averages.
    """
    if antiderivative is None:
        antiderivative = getattr(ic, "antiderivative", None)
    nodes = grid.nodes
    if antiderivative is not None:
        prim = _eval_on(antiderivative, nodes)
        vals = np.diff(prim) / grid.dx
    else:
        half = 0.5 * grid.dx
        pts = grid.centers[:, None] + half * _GL_X[None, :]
        fv = _eval_on(ic, pts.ravel()).reshape(pts.shape)
        vals = fv @ _GL_W * 0.5
    if not np.all(np.isfinite(vals)):
        raise ValueError("initial condition produced non-finite cell averages")
    return Field(grid, Alignment.CELL, vals)
