"""Error norms, convergence tables, entropy series and output writers."""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .grid import Mesh
from .state import H, cons_to_prim, specific_entropy_w

PRIMITIVE_NAMES = ("h", "v1", "v2", "P11", "P12", "P22")


@dataclass
class ConvergenceRow:
    N: int
    l1_error: float
    order: Optional[float] = None


@dataclass
class EntropySeries:
    t: np.ndarray
    total: np.ndarray

    def __post_init__(self):
        self.t = np.asarray(self.t, dtype=float)
        self.total = np.asarray(self.total, dtype=float)
        if self.t.shape != self.total.shape:
            raise ValueError("time and entropy arrays differ in length")
        if np.any(np.diff(self.t) <= 0):
            raise ValueError("entropy series times must be strictly increasing")

    def max_increase(self, relative: bool = True) -> float:
        """Largest step-to-step growth (relative to ``|total|`` by default)."""
        if len(self.total) < 2:
            return 0.0
        d = np.diff(self.total)
        if relative:
            d = d / np.maximum(np.abs(self.total[:-1]), 1e-300)
        return float(max(d.max(), 0.0))

    def is_non_increasing(self, rel_slack: float = 1e-10) -> bool:
        return self.max_increase() <= rel_slack


def l1_error(values: np.ndarray, exact: np.ndarray, mesh: Mesh) -> float:
    """``sum |u_i - u_exact(x_i)| dx (dy)`` for one component on cell centres."""
    diff = np.abs(np.asarray(values, dtype=float) - np.asarray(exact, dtype=float))
    return float(np.sum(diff)) * mesh.cell_area()


def convergence_order(rows: Sequence[ConvergenceRow]) -> list:
    """Fill ``order = log(e_prev/e) / log(N/N_prev)`` from the second row on."""
    out = []
    prev = None
    for row in rows:
        order = None
        if prev is not None:
            if row.l1_error == prev.l1_error:
                order = 0.0
            else:
                order = math.log(prev.l1_error / row.l1_error) / math.log(row.N / prev.N)
        out.append(ConvergenceRow(row.N, row.l1_error, order))
        prev = row
    return out


def format_table(rows: Sequence[ConvergenceRow]) -> str:
    lines = [f"{'N':>6}  {'L1 error':>12}  {'order':>6}"]
    for r in rows:
        order = "--" if r.order is None else f"{r.order:.2f}"
        lines.append(f"{r.N:>6}  {r.l1_error:>12.3e}  {order:>6}")
    return "\n".join(lines)


def total_entropy(u: np.ndarray, mesh: Mesh) -> float:
    """``sum eta dx dy`` over interior conserved states ``u`` (6, ny, nx)."""
    w = cons_to_prim(u)
    eta = -w[H] * specific_entropy_w(w)
    return float(np.sum(eta)) * mesh.cell_area()


def output_stem(case: str, scheme: str, n: int, time: Optional[float] = None) -> str:
    stem = f"{case}_{scheme}_{n}"
    if time is not None:
        stem += f"_t{time:g}"
    return stem


def _open(path: Path, mode: str):
    try:
        return path.open(mode, newline="")
    except OSError as exc:
        raise OSError(f"cannot open {path}: {exc}") from exc


def write_field_csv(path, mesh: Mesh, w: np.ndarray) -> Path:
    """Primitive field ``w`` (6, ny, nx) as CSV rows ``x[,y],h,v1,v2,P11,P12,P22``."""
    path = Path(path)
    X, Y = mesh.meshgrid()
    header = ["x"] + (["y"] if mesh.dim == 2 else []) + list(PRIMITIVE_NAMES)
    with _open(path, "w") as fh:
        out = csv.writer(fh)
        out.writerow(header)
        for j in range(mesh.ny):
            for i in range(mesh.nx):
                coords = [X[j, i]] + ([Y[j, i]] if mesh.dim == 2 else [])
                out.writerow([f"{c:.17g}" for c in coords] + [f"{w[c, j, i]:.17g}" for c in range(6)])
    return path


def read_field_csv(path):
    """Return ``(coords, w)``: coordinate columns ``(ncoord, n)`` and ``w`` (6, n)."""
    path = Path(path)
    with _open(path, "r") as fh:
        rows = list(csv.reader(fh))
    header = rows[0]
    data = np.array([[float(v) for v in r] for r in rows[1:] if r], dtype=float)
    ncoord = len(header) - 6
    return data[:, :ncoord].T, data[:, ncoord:].T


def write_series_csv(path, series: EntropySeries, mass: Optional[Sequence[float]] = None) -> Path:
    path = Path(path)
    with _open(path, "w") as fh:
        out = csv.writer(fh)
        out.writerow(["t", "entropy"] + (["mass"] if mass is not None else []))
        for i in range(len(series.t)):
            row = [f"{series.t[i]:.17g}", f"{series.total[i]:.17g}"]
            if mass is not None:
                row.append(f"{mass[i]:.17g}")
            out.writerow(row)
    return path


def write_vtk(path, mesh: Mesh, w: np.ndarray, title: str = "ssw") -> Path:
    """Legacy ASCII VTK structured-points file with one scalar per primitive."""
    path = Path(path)
    nx, ny = mesh.nx, mesh.ny
    dy = mesh.dy if mesh.dim == 2 else 1.0
    y0 = mesh.y_centers()[0]
    with _open(path, "w") as fh:
        fh.write("# vtk DataFile Version 3.0\n")
        fh.write(f"{title}\nASCII\nDATASET STRUCTURED_POINTS\n")
        fh.write(f"DIMENSIONS {nx} {ny} 1\n")
        fh.write(f"ORIGIN {mesh.x_centers()[0]:.17g} {y0:.17g} 0\n")
        fh.write(f"SPACING {mesh.dx:.17g} {dy:.17g} 1\n")
        fh.write(f"POINT_DATA {nx * ny}\n")
        for c, name in enumerate(PRIMITIVE_NAMES):
            fh.write(f"SCALARS {name} double 1\nLOOKUP_TABLE default\n")
            # x varies fastest, matching the (ny, nx) C ordering
            for val in np.asarray(w[c]).ravel():
                fh.write(f"{val:.17g}\n")
    return path


def read_vtk_scalars(path) -> dict:
    """Minimal reader for files written by :func:`write_vtk`."""
    path = Path(path)
    with _open(path, "r") as fh:
        lines = fh.read().split("\n")
    dims = None
    fields = {}
    i = 0
    while i < len(lines):
        parts = lines[i].split()
        if parts and parts[0] == "DIMENSIONS":
            dims = tuple(int(p) for p in parts[1:])
        if parts and parts[0] == "SCALARS":
            n = dims[0] * dims[1] * dims[2]
            vals = np.array([float(x) for x in lines[i + 2: i + 2 + n]])
            fields[parts[1]] = vals.reshape(dims[1], dims[0])
            i += 2 + n
            continue
        i += 1
    return fields
