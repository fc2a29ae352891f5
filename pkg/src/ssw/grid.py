"""Uniform structured mesh, ghost layers and boundary conditions.

Fields are stored component-first with shape ``(6, ny + 2*ghost, nx + 2*ghost)``;
a 1D mesh has ``ny = 1`` and no ghost layers in y. Unknowns are collocated
at cell centres ``x_i = xa + (i + 1/2) dx``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np


class BC(str, Enum):
    PERIODIC = "periodic"
    NEUMANN = "neumann"


@dataclass(frozen=True)
class BoundaryCondition:
    """Boundary kind per side: ``(left, right)`` in x and ``(bottom, top)`` in y."""

    x: tuple = (BC.PERIODIC, BC.PERIODIC)
    y: tuple = (BC.PERIODIC, BC.PERIODIC)

    def __post_init__(self):
        for pair in (self.x, self.y):
            if (BC(pair[0]) is BC.PERIODIC) != (BC(pair[1]) is BC.PERIODIC):
                raise ValueError("periodic boundaries must be paired on opposing sides")

    @classmethod
    def uniform(cls, kind) -> "BoundaryCondition":
        kind = BC(kind)
        return cls((kind, kind), (kind, kind))


@dataclass(frozen=True)
class Mesh:
    xa: float
    xb: float
    nx: int
    ghost: int = 2
    ya: float = 0.0
    yb: float = 1.0
    ny: int = 1
    dim: int = field(default=1)

    def __post_init__(self):
        if self.nx < 1 or self.ny < 1:
            raise ValueError("cell counts must be positive")
        if not self.xb > self.xa or not self.yb > self.ya:
            raise ValueError("empty domain")
        if self.dim not in (1, 2):
            raise ValueError("dim must be 1 or 2")
        if self.dim == 1 and self.ny != 1:
            raise ValueError("1D mesh must have ny == 1")

    @property
    def dx(self) -> float:
        return (self.xb - self.xa) / self.nx

    @property
    def dy(self) -> float:
        return (self.yb - self.ya) / self.ny

    @property
    def gx(self) -> int:
        return self.ghost

    @property
    def gy(self) -> int:
        return self.ghost if self.dim == 2 else 0

    @property
    def shape(self) -> tuple:
        """Storage shape of one component including ghosts."""
        return (self.ny + 2 * self.gy, self.nx + 2 * self.gx)

    @property
    def interior(self) -> tuple:
        return (slice(self.gy, self.gy + self.ny), slice(self.gx, self.gx + self.nx))

    def x_centers(self) -> np.ndarray:
        return self.xa + (np.arange(self.nx) + 0.5) * self.dx

    def y_centers(self) -> np.ndarray:
        if self.dim == 1:
            return np.array([0.5 * (self.ya + self.yb)])
        return self.ya + (np.arange(self.ny) + 0.5) * self.dy

    def meshgrid(self):
        """Cell-centre coordinates ``(X, Y)`` of shape ``(ny, nx)``."""
        return np.meshgrid(self.x_centers(), self.y_centers())

    def cell_area(self) -> float:
        return self.dx * self.dy if self.dim == 2 else self.dx


class GridField:
    """Conserved-variable array with ghost layers attached to a mesh."""

    def __init__(self, mesh: Mesh, data: np.ndarray | None = None):
        self.mesh = mesh
        if data is None:
            data = np.zeros((6,) + mesh.shape)
        if data.shape != (6,) + mesh.shape:
            raise ValueError(f"expected shape {(6,) + mesh.shape}, got {data.shape}")
        self.data = data

    @classmethod
    def from_interior(cls, mesh: Mesh, interior: np.ndarray) -> "GridField":
        f = cls(mesh)
        f.interior = interior
        return f

    @property
    def interior(self) -> np.ndarray:
        return self.data[(slice(None),) + self.mesh.interior]

    @interior.setter
    def interior(self, value):
        self.data[(slice(None),) + self.mesh.interior] = value

    def copy(self) -> "GridField":
        return GridField(self.mesh, self.data.copy())


def _fill_axis(a: np.ndarray, axis: int, g: int, n: int, kinds) -> None:
    if g == 0:
        return
    left, right = (BC(k) for k in kinds)

    def sl(lo, hi):
        idx = [slice(None)] * a.ndim
        idx[axis] = slice(lo, hi)
        return tuple(idx)

    if left is BC.PERIODIC:
        a[sl(0, g)] = a[sl(n, n + g)]
        a[sl(n + g, n + 2 * g)] = a[sl(g, 2 * g)]
        return
    # zero-gradient: replicate the nearest interior cell into every ghost layer
    a[sl(0, g)] = a[sl(g, g + 1)]
    a[sl(n + g, n + 2 * g)] = a[sl(n + g - 1, n + g)]


def fill_ghosts_array(a: np.ndarray, mesh: Mesh, bc: BoundaryCondition) -> np.ndarray:
    """Fill ghost layers of a ``(..., ny+2gy, nx+2gx)`` array in place."""
    # x first on interior rows, then y over full rows so corners wrap twice
    _fill_axis(a, a.ndim - 1, mesh.gx, mesh.nx, bc.x)
    if mesh.dim == 2:
        _fill_axis(a, a.ndim - 2, mesh.gy, mesh.ny, bc.y)
    return a


def fill_ghosts(f: GridField, bc: BoundaryCondition) -> GridField:
    fill_ghosts_array(f.data, f.mesh, bc)
    return f


_CD = {
    2: ((-1, -0.5), (1, 0.5)),
    4: ((-2, 1.0 / 12.0), (-1, -8.0 / 12.0), (1, 8.0 / 12.0), (2, -1.0 / 12.0)),
}


def central_diff(a: np.ndarray, order: int, spacing: float, ghost: int, axis: int = -1) -> np.ndarray:
    """Central difference along ``axis`` at the interior points.

    ``a`` includes ``ghost`` layers on each side of ``axis``; the result has
    those layers stripped along ``axis`` only.
    """
    if order not in _CD:
        raise ValueError(f"central difference order must be 2 or 4, got {order}")
    a = np.moveaxis(np.asarray(a, dtype=float), axis, -1)
    n = a.shape[-1] - 2 * ghost
    if ghost < order // 2:
        raise ValueError("not enough ghost layers for the central difference")
    out = np.zeros(a.shape[:-1] + (n,))
    for off, c in _CD[order]:
        out += c * a[..., ghost + off: ghost + off + n]
    return np.moveaxis(out / spacing, -1, axis)


def central_diff_h(row: np.ndarray, order: int, spacing: float, ghost: int = None) -> np.ndarray:
    """Derivative of a 1D row with ghosts (default ``ghost = order // 2``)."""
    g = order // 2 if ghost is None else ghost
    return central_diff(row, order, spacing, g)
