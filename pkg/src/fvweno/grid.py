"""
Uniform Cartesian grids, ghost-cell handling, restriction and discrete norms.

A field stores cell averages of the four conserved quantities
(rho, rho*u, rho*v, E) on an nx-by-ny grid extended by a layer of
ghost cells on every side.  Interior cells are addressed with logical
indices (0..nx-1, 0..ny-1); the ghost region is only ever written by
:func:`fill_ghost`.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dataclass_field
from enum import Enum

import numpy as np

NUM_COMPONENTS = 4


class BoundaryCondition(Enum):
    """Closure used to populate ghost cells along one axis."""

    PERIODIC = "periodic"
    EXTRAPOLATE = "extrapolate"


@dataclass(frozen=True)
class GridSpec:
    """Geometry of a uniform Cartesian grid.

    ``dx``/``dy`` are derived from the bounds in a single division so
    that every consumer sees bitwise identical mesh widths.
    """

    nx: int
    ny: int
    x_min: float = 0.0
    x_max: float = 1.0
    y_min: float = 0.0
    y_max: float = 1.0
    ghost: int = 4

    def __post_init__(self):
        if self.nx < 1 or self.ny < 1:
            raise ValueError(f"cell counts must be positive, got nx={self.nx}, ny={self.ny}")
        if not (self.x_max > self.x_min and self.y_max > self.y_min):
            raise ValueError("domain bounds are inverted or empty")
        if self.ghost < 0:
            raise ValueError(f"ghost width must be non-negative, got {self.ghost}")

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / self.nx

    @property
    def dy(self) -> float:
        return (self.y_max - self.y_min) / self.ny

    def x_centers(self) -> np.ndarray:
        return self.x_min + (np.arange(self.nx) + 0.5) * self.dx

    def y_centers(self) -> np.ndarray:
        return self.y_min + (np.arange(self.ny) + 0.5) * self.dy

    def x_interfaces(self) -> np.ndarray:
        return self.x_min + np.arange(self.nx + 1) * self.dx

    def y_interfaces(self) -> np.ndarray:
        return self.y_min + np.arange(self.ny + 1) * self.dy

    def with_resolution(self, nx: int, ny: int) -> "GridSpec":
        return GridSpec(nx, ny, self.x_min, self.x_max, self.y_min, self.y_max, self.ghost)


@dataclass
class CellField:
    """Cell-averaged conserved quantities plus ghost layers.

    ``data`` has shape ``(4, nx + 2*ghost, ny + 2*ghost)``, components
    first.  ``time`` is the simulation time the averages belong to.
    """

    spec: GridSpec
    data: np.ndarray
    time: float = 0.0

    @property
    def interior(self) -> np.ndarray:
        g = self.spec.ghost
        return self.data[:, g:g + self.spec.nx, g:g + self.spec.ny]

    def copy(self) -> "CellField":
        return CellField(self.spec, self.data.copy(), self.time)


def create_field(spec: GridSpec, init) -> CellField:
    """Create a field from interior cell averages.

    ``init`` is either an array of shape ``(4, nx, ny)`` holding cell
    averages, or a callable ``init(spec) -> (4, nx, ny)``.  Ghost cells
    are NaN-marked until :func:`fill_ghost` runs.
    """
    averages = init(spec) if callable(init) else np.asarray(init, dtype=np.float64)
    if averages.shape != (NUM_COMPONENTS, spec.nx, spec.ny):
        raise ValueError(
            f"initializer shape {averages.shape} does not match (4, {spec.nx}, {spec.ny})"
        )
    g = spec.ghost
    data = np.full((NUM_COMPONENTS, spec.nx + 2 * g, spec.ny + 2 * g), np.nan)
    data[:, g:g + spec.nx, g:g + spec.ny] = averages
    return CellField(spec, data, 0.0)


def fill_ghost(field: CellField, bc_x: BoundaryCondition, bc_y: BoundaryCondition) -> CellField:
    """Populate all ghost cells of ``field`` in place and return it.

    The x-closure is applied first over the interior rows, then the
    y-closure over the full extended x-range, which fills the corner
    blocks consistently for the periodic and extrapolation closures.
    """
    g = field.spec.ghost
    if g == 0:
        return field
    nx, ny = field.spec.nx, field.spec.ny
    d = field.data
    if bc_x is BoundaryCondition.PERIODIC:
        if nx < g:
            raise ValueError(f"periodic wrap needs nx >= ghost ({nx} < {g})")
        d[:, :g, g:g + ny] = d[:, nx:nx + g, g:g + ny]
        d[:, nx + g:, g:g + ny] = d[:, g:2 * g, g:g + ny]
    else:
        d[:, :g, g:g + ny] = d[:, g:g + 1, g:g + ny]
        d[:, nx + g:, g:g + ny] = d[:, nx + g - 1:nx + g, g:g + ny]
    if bc_y is BoundaryCondition.PERIODIC:
        if ny < g:
            raise ValueError(f"periodic wrap needs ny >= ghost ({ny} < {g})")
        d[:, :, :g] = d[:, :, ny:ny + g]
        d[:, :, ny + g:] = d[:, :, g:2 * g]
    else:
        d[:, :, :g] = d[:, :, g:g + 1]
        d[:, :, ny + g:] = d[:, :, ny + g - 1:ny + g]
    return field


def restrict(fine: CellField, factor: int) -> CellField:
    """Coarsen by an integer factor, averaging factor^2 fine cells exactly.

    The coarse cell average is the arithmetic mean of the covered fine
    averages, which is the exact average-of-averages relation on a
    uniform grid.
    """
    if factor < 1:
        raise ValueError(f"refinement factor must be positive, got {factor}")
    spec = fine.spec
    if spec.nx % factor or spec.ny % factor:
        raise ValueError(f"grid {spec.nx}x{spec.ny} not divisible by factor {factor}")
    nxc, nyc = spec.nx // factor, spec.ny // factor
    blocks = fine.interior.reshape(NUM_COMPONENTS, nxc, factor, nyc, factor)
    coarse_avg = blocks.mean(axis=(2, 4))
    coarse = create_field(spec.with_resolution(nxc, nyc), coarse_avg)
    coarse.time = fine.time
    return coarse


def pairwise_sum(values: np.ndarray) -> float:
    """Sum with a fixed adjacent-pair reduction tree.

    The tree shape depends only on the element count, so the result is
    bitwise reproducible regardless of how callers might partition
    surrounding work.
    """
    a = np.asarray(values, dtype=np.float64).ravel()
    while a.size > 1:
        half = a.size // 2
        paired = a[0:2 * half:2] + a[1:2 * half:2]
        if a.size % 2:
            paired = np.concatenate([paired, a[-1:]])
        a = paired
    return float(a[0]) if a.size else 0.0


def l1_error(a: CellField, b: CellField, component: int = 0) -> float:
    """Discrete L1 distance dx*dy*sum(|a - b|) over the interior cells."""
    if a.spec != b.spec:
        raise ValueError(f"grid mismatch: {a.spec} vs {b.spec}")
    diff = np.abs(a.interior[component] - b.interior[component])
    return a.spec.dx * a.spec.dy * pairwise_sum(diff)


def gauss_legendre_cell_rule(npts: int = 4):
    """Nodes (relative to the cell center, in units of h) and weights
    (summing to 1) of the Gauss-Legendre rule used for cell averaging."""
    nodes, weights = np.polynomial.legendre.leggauss(npts)
    return nodes / 2.0, weights / 2.0


def cell_average_field(spec: GridSpec, pointwise, npts: int = 4) -> np.ndarray:
    """Tensor-product Gauss-Legendre cell averages of pointwise data.

    ``pointwise(X, Y)`` must return an array ``(4, ...)`` of conserved
    values at the given coordinates.  Four points per axis integrate
    degree-7 polynomials exactly, comfortably above the order of any
    scheme in this package.
    """
    xi, w = gauss_legendre_cell_rule(npts)
    xc = spec.x_centers()
    yc = spec.y_centers()
    avg = np.zeros((NUM_COMPONENTS, spec.nx, spec.ny))
    for a in range(npts):
        X = (xc + xi[a] * spec.dx)[:, None]
        for b in range(npts):
            Y = (yc + xi[b] * spec.dy)[None, :]
            avg += (w[a] * w[b]) * pointwise(X, Y)
    return avg
