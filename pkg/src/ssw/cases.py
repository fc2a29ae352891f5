"""Library of test problems: initial data, parameters, forcing and exact solutions."""
from __future__ import annotations

import csv
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Callable, Optional

import numpy as np

from .grid import BC, BoundaryCondition, Mesh
from .state import ModelParams, check_admissible

PERIODIC = BoundaryCondition.uniform(BC.PERIODIC)
NEUMANN = BoundaryCondition.uniform(BC.NEUMANN)


@dataclass(frozen=True)
class CaseSpec:
    name: str
    dim: int
    domain: tuple  # (xa, xb) or (xa, xb, ya, yb)
    n: int
    end_time: float
    ic: Callable  # (X, Y) -> primitive (6, ...)
    params: ModelParams = field(default_factory=ModelParams)
    bc: BoundaryCondition = PERIODIC
    ny: int = 1
    forcing: Optional[Callable] = None  # (X, Y, t, params) -> (6, ...)
    bottom: Optional[Callable] = None  # (X, Y) -> b
    bottom_grad: Optional[Callable] = None  # (X, Y) -> (db/dx, db/dy)
    exact: Optional[Callable] = None  # (X, Y, t, params) -> primitive
    reference: Optional[Path] = None
    has_source: bool = False

    def mesh(self, nx: Optional[int] = None, ny: Optional[int] = None, ghost: int = 2) -> Mesh:
        nx = self.n if nx is None else nx
        if self.dim == 1:
            xa, xb = self.domain[:2]
            return Mesh(xa, xb, nx, ghost=ghost)
        xa, xb, ya, yb = self.domain
        ny = (self.ny if nx == self.n else nx) if ny is None else ny
        return Mesh(xa, xb, nx, ghost=ghost, ya=ya, yb=yb, ny=ny, dim=2)

    def initial_primitive(self, X, Y) -> np.ndarray:
        w = np.asarray(self.ic(X, Y), dtype=float)
        check_admissible(w)
        return w

    def bottom_gradient(self, X, Y):
        if self.bottom_grad is None:
            z = np.zeros_like(X)
            return z, z
        bx, by = self.bottom_grad(X, Y)
        return np.broadcast_to(bx, X.shape), np.broadcast_to(by, X.shape)

    def with_params(self, **kw) -> "CaseSpec":
        return replace(self, params=replace(self.params, **kw))


def _const_state(X, values):
    return np.array([np.full(np.shape(X), v, dtype=float) for v in values])


def _riemann(X, left, right, x0=0.0):
    left_mask = X < x0
    return np.where(left_mask, _const_state(X, left), _const_state(X, right))


# manufactured solutions ------------------------------------------------------

def _exact_1d(X, Y, t, p=None):
    w = _const_state(X, (0, 1, 0, 1, 0, 1))
    w[0] = 2 + np.sin(2 * np.pi * (X - t))
    return w


def _forcing_1d(X, Y, t, p: ModelParams):
    g = p.g
    arg = 2 * np.pi * (X - t)
    q = 2 * np.pi * np.cos(arg) * (1 + 2 * g + g * np.sin(arg))
    out = np.zeros((6,) + np.shape(X))
    out[1] = q
    out[3] = q
    return out


def case_accuracy_1d() -> CaseSpec:
    return CaseSpec(
        name="accuracy_1d", dim=1, domain=(-0.5, 0.5), n=100, end_time=0.5,
        ic=lambda X, Y: _exact_1d(X, Y, 0.0), forcing=_forcing_1d, exact=_exact_1d,
    )


def _exact_2d(X, Y, t, p=None):
    s = np.sin(2 * np.pi * (X + Y - t))
    w = _const_state(X, (0, 0.5, 0.5, 1, 0, 1))
    w[0] = 2 + s
    return w


def _forcing_2d(X, Y, t, p: ModelParams):
    g = p.g
    arg = 2 * np.pi * (X + Y - t)
    a = np.pi * np.cos(arg) * (1 + 2 * g + g * np.sin(arg))
    return np.array([0 * a, 2 * a, 2 * a, a, a, a])


def case_accuracy_2d() -> CaseSpec:
    return CaseSpec(
        name="accuracy_2d", dim=2, domain=(-0.5, 0.5, -0.5, 0.5), n=40, ny=40, end_time=0.5,
        ic=lambda X, Y: _exact_2d(X, Y, 0.0), forcing=_forcing_2d, exact=_exact_2d,
    )


# Riemann problems ------------------------------------------------------------

DAM_BREAK_LEFT = (0.02, 0.0, 0.0, 4e-2, 0.0, 4e-2)
DAM_BREAK_RIGHT = (0.01, 0.0, 0.0, 4e-2, 0.0, 4e-2)
FIVE_WAVE_LEFT = (0.01, 0.1, 0.2, 4e-2, 1e-8, 4e-2)
FIVE_WAVE_RIGHT = (0.02, 0.1, -0.2, 4e-2, 1e-8, 4e-2)
SHEAR_LEFT = (0.01, 0.0, 0.2, 1e-4, 0.0, 1e-4)
SHEAR_RIGHT = (0.01, 0.0, -0.2, 1e-4, 0.0, 1e-4)
SHOCK_LEFT = (0.02, 0.0, 0.0, 0.1, 0.0, 0.1)
SHOCK_RIGHT = (0.03, -7.010706099, 0.0, 16.616666666666658, 0.0, 0.1)


def _riemann_case(name, left, right, end_time, params=None) -> CaseSpec:
    return CaseSpec(
        name=name, dim=1, domain=(-0.5, 0.5), n=500, end_time=end_time, bc=NEUMANN,
        ic=lambda X, Y: _riemann(X, left, right), params=params or ModelParams(),
    )


def case_dam_break(variant: str = "P12_zero") -> CaseSpec:
    if variant not in ("P12_zero", "P12_eps"):
        raise ValueError(f"unknown dam break variant {variant!r}")
    left, right = list(DAM_BREAK_LEFT), list(DAM_BREAK_RIGHT)
    name = "dam_break"
    if variant == "P12_eps":
        left[4] = right[4] = 1e-8
        name = "dam_break_eps"
    return _riemann_case(name, tuple(left), tuple(right), 0.5)


def case_five_wave() -> CaseSpec:
    return _riemann_case("five_wave", FIVE_WAVE_LEFT, FIVE_WAVE_RIGHT, 0.5)


def case_shear() -> CaseSpec:
    return _riemann_case("shear", SHEAR_LEFT, SHEAR_RIGHT, 10.0)


def case_single_shock() -> CaseSpec:
    return _riemann_case("single_shock", SHOCK_LEFT, SHOCK_RIGHT, 0.015811388,
                         ModelParams(g=9.81e3))


# roll waves ------------------------------------------------------------------

ROLL_WAVE = {
    "case1": dict(theta=0.05011, C_f=0.0036, h0=7.98e-3, a=0.05, phi=22.7, C_r=0.00035, Lx=1.3),
    "case2": dict(theta=0.11928, C_f=0.0038, h0=5.33e-3, a=0.05, phi=153.501, C_r=0.002, Lx=1.8),
}


def _roll_params(c) -> ModelParams:
    return ModelParams(g=9.81, C_f=c["C_f"], C_r=c["C_r"], phi=c["phi"], theta=c["theta"])


def _roll_state(h, c, g):
    v1 = np.sqrt(g * c["h0"] * np.tan(c["theta"]) / c["C_f"])
    p = 0.5 * c["phi"] * h * h
    z = np.zeros_like(h)
    return np.array([h, z + v1, z, p, z, p])


def case_roll_wave_1d(which: str = "case1") -> CaseSpec:
    if which not in ROLL_WAVE:
        raise ValueError(f"unknown roll wave case {which!r}")
    c = ROLL_WAVE[which]
    params = _roll_params(c)
    tan = np.tan(c["theta"])

    def ic(X, Y):
        h = c["h0"] * (1 + c["a"] * np.sin(2 * np.pi * X / c["Lx"]))
        return _roll_state(h, c, params.g)

    return CaseSpec(
        name=f"roll_wave_{which}", dim=1, domain=(0.0, c["Lx"]), n=500, end_time=25.0,
        ic=ic, params=params, has_source=True,
        bottom=lambda X, Y: -X * tan,
        bottom_grad=lambda X, Y: (-tan + 0 * X, 0 * X),
    )


def case_roll_wave_2d() -> CaseSpec:
    c = ROLL_WAVE["case1"]
    params = _roll_params(c)
    tan = np.tan(c["theta"])
    ly = 0.5

    def ic(X, Y):
        h = c["h0"] * (1 + c["a"] * np.sin(2 * np.pi * X / c["Lx"])
                       + c["a"] * np.sin(2 * np.pi * Y / ly))
        return _roll_state(h, c, params.g)

    return CaseSpec(
        name="roll_wave_2d", dim=2, domain=(0.0, c["Lx"], 0.0, ly), n=260, ny=100,
        end_time=36.0, ic=ic, params=params, has_source=True,
        bottom=lambda X, Y: -X * tan,
        bottom_grad=lambda X, Y: (-tan + 0 * X, 0 * X),
    )


CASES = {
    "accuracy_1d": case_accuracy_1d,
    "accuracy_2d": case_accuracy_2d,
    "dam_break": lambda: case_dam_break("P12_zero"),
    "dam_break_eps": lambda: case_dam_break("P12_eps"),
    "five_wave": case_five_wave,
    "shear": case_shear,
    "single_shock": case_single_shock,
    "roll_wave_case1": lambda: case_roll_wave_1d("case1"),
    "roll_wave_case2": lambda: case_roll_wave_1d("case2"),
    "roll_wave_2d": case_roll_wave_2d,
}


def get_case(name: str) -> CaseSpec:
    try:
        return CASES[name]()
    except KeyError:
        raise ValueError(f"unknown case {name!r}; choose from {sorted(CASES)}") from None


# reference profiles -------------------------------------------------------------

REFERENCE_HEADER = ["x", "h", "v1", "v2", "P11", "P12", "P22"]


def write_reference(path, x, w) -> None:
    path = Path(path)
    try:
        with path.open("w", newline="") as fh:
            out = csv.writer(fh)
            out.writerow(REFERENCE_HEADER)
            for i in range(len(x)):
                out.writerow([repr(float(x[i]))] + [repr(float(w[c, i])) for c in range(6)])
    except OSError as exc:
        raise OSError(f"cannot write reference profile {path}: {exc}") from exc


def read_reference(path):
    """Return ``(x, w)`` with ``w`` of shape ``(6, n)``."""
    path = Path(path)
    try:
        with path.open() as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise OSError(f"cannot read reference profile {path}: {exc}") from exc
    if not rows or [c.strip() for c in rows[0]] != REFERENCE_HEADER:
        raise ValueError(f"{path}: expected header {','.join(REFERENCE_HEADER)}")
    data = np.array([[float(v) for v in r] for r in rows[1:] if r], dtype=float).reshape(-1, 7)
    x = data[:, 0]
    if np.any(np.diff(x) <= 0):
        raise ValueError(f"{path}: x must be strictly increasing")
    return x, data[:, 1:].T


def sample_reference(x_ref, w_ref, x) -> np.ndarray:
    """Piecewise-linear interpolation of a reference profile at points ``x``."""
    return np.array([np.interp(x, x_ref, w_ref[c]) for c in range(6)])
