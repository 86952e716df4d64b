"""Uniform rectangular meshes with continuous Q^k numbering on the Lobatto grid."""

from dataclasses import dataclass, field
from enum import IntFlag
from functools import cached_property

import numpy as np

from .polynomials import LagrangeBasis1D
from .quadrature import gauss_lobatto_rule


class BoundaryTag(IntFlag):
    INTERIOR = 0
    LEFT = 1
    RIGHT = 2
    BOTTOM = 4
    TOP = 8


@dataclass(frozen=True)
class CellGeometry:
    center: tuple
    half_widths: tuple

    def to_physical(self, s, t):
        return (self.center[0] + self.half_widths[0] * np.asarray(s),
                self.center[1] + self.half_widths[1] * np.asarray(t))

    def to_reference(self, x, y):
        return ((np.asarray(x) - self.center[0]) / self.half_widths[0],
                (np.asarray(y) - self.center[1]) / self.half_widths[1])


@dataclass(frozen=True, eq=False)
class Mesh:
    """Uniform nx-by-ny partition of a rectangle carrying the Q^k Lobatto grid.

    Grid points are numbered lexicographically with x fastest; cells likewise.
    """

    domain: tuple
    nx: int
    ny: int
    k: int
    x: np.ndarray = field(repr=False)
    y: np.ndarray = field(repr=False)

    @property
    def hx(self):
        return (self.domain[1] - self.domain[0]) / (2 * self.nx)

    @property
    def hy(self):
        return (self.domain[3] - self.domain[2]) / (2 * self.ny)

    @property
    def fd_spacing(self):
        """Average spacing of the Lobatto grid, (x_hi - x_lo)/(k nx) and likewise in y."""
        return (2 * self.hx / self.k, 2 * self.hy / self.k)

    @property
    def grid_shape(self):
        """(points in y, points in x)."""
        return (len(self.y), len(self.x))

    @property
    def n_points(self):
        return len(self.x) * len(self.y)

    @property
    def n_cells(self):
        return self.nx * self.ny

    @cached_property
    def points(self):
        X, Y = np.meshgrid(self.x, self.y, indexing="xy")
        return np.column_stack([X.ravel(), Y.ravel()])

    @cached_property
    def reference_nodes(self):
        return gauss_lobatto_rule(self.k + 1).nodes

    @cached_property
    def basis(self):
        return LagrangeBasis1D.from_nodes(self.reference_nodes)

    @cached_property
    def cell_dof_table(self):
        """(n_cells, (k+1)^2) global indices, local ordering s fastest."""
        k, nxp = self.k, len(self.x)
        ci, cj = np.meshgrid(np.arange(self.nx), np.arange(self.ny), indexing="xy")
        a, b = np.meshgrid(np.arange(k + 1), np.arange(k + 1), indexing="xy")
        rows = cj.ravel()[:, None] * k + b.ravel()[None, :]
        cols = ci.ravel()[:, None] * k + a.ravel()[None, :]
        table = rows * nxp + cols
        table.setflags(write=False)
        return table

    @cached_property
    def cell_centers(self):
        """(n_cells, 2) cell centres in cell order."""
        xc = self.domain[0] + (2 * np.arange(self.nx) + 1) * self.hx
        yc = self.domain[2] + (2 * np.arange(self.ny) + 1) * self.hy
        X, Y = np.meshgrid(xc, yc, indexing="xy")
        return np.column_stack([X.ravel(), Y.ravel()])

    def cell(self, index):
        xc, yc = self.cell_centers[index]
        return CellGeometry((xc, yc), (self.hx, self.hy))

    def cell_dofs(self, index):
        if not 0 <= index < self.n_cells:
            raise IndexError(f"cell index {index} out of range")
        return self.cell_dof_table[index]

    @cached_property
    def boundary_tags(self):
        nyp, nxp = self.grid_shape
        i, j = np.meshgrid(np.arange(nxp), np.arange(nyp), indexing="xy")
        tags = np.zeros((nyp, nxp), dtype=int)
        tags[i == 0] |= BoundaryTag.LEFT
        tags[i == nxp - 1] |= BoundaryTag.RIGHT
        tags[j == 0] |= BoundaryTag.BOTTOM
        tags[j == nyp - 1] |= BoundaryTag.TOP
        return tags.ravel()

    @property
    def boundary_dofs(self):
        return np.flatnonzero(self.boundary_tags)

    @property
    def interior_dofs(self):
        return np.flatnonzero(self.boundary_tags == 0)

    def locate(self, x, y):
        """Owning cell indices of points; points on shared edges go to the lower index."""
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        x_lo, x_hi, y_lo, y_hi = self.domain
        if np.any((x < x_lo) | (x > x_hi) | (y < y_lo) | (y > y_hi)):
            raise ValueError("point outside the mesh domain")
        ci = np.clip(np.ceil((x - x_lo) / (2 * self.hx)).astype(int) - 1, 0, self.nx - 1)
        cj = np.clip(np.ceil((y - y_lo) / (2 * self.hy)).astype(int) - 1, 0, self.ny - 1)
        return cj * self.nx + ci


def _axis_coordinates(lo, hi, n, ref):
    k = len(ref) - 1
    h = (hi - lo) / (2 * n)
    coords = np.empty(k * n + 1)
    for c in range(n):
        center = lo + (2 * c + 1) * h
        # the left neighbour already owns the shared point
        start = 0 if c == 0 else 1
        coords[c * k + start:(c + 1) * k + 1] = center + h * ref[start:]
    coords[0], coords[-1] = lo, hi
    return coords


def build_mesh(domain, nx, ny, k):
    x_lo, x_hi, y_lo, y_hi = map(float, domain)
    if k < 2:
        raise ValueError(f"polynomial degree must be at least 2, got k={k}")
    if nx < 1 or ny < 1:
        raise ValueError("need at least one cell per direction")
    if not (x_hi > x_lo and y_hi > y_lo):
        raise ValueError(f"degenerate domain {domain}")
    ref = gauss_lobatto_rule(k + 1).nodes
    x = _axis_coordinates(x_lo, x_hi, nx, ref)
    y = _axis_coordinates(y_lo, y_hi, ny, ref)
    x.setflags(write=False)
    y.setflags(write=False)
    return Mesh((x_lo, x_hi, y_lo, y_hi), nx, ny, k, x, y)


def classify_boundary(mesh):
    return [BoundaryTag(int(t)) for t in mesh.boundary_tags]
