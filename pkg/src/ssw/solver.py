"""Semi-discrete operator and SSP Runge-Kutta time loop.

The semi-discrete scheme is

    dU/dt = -(F^x_{i+1/2} - F^x_{i-1/2})/dx - (F^y_{j+1/2} - F^y_{j-1/2})/dy
            - B^x (dh/dx) - B^y (dh/dy) + S (+ manufactured forcing)

with entropy-stable interface fluxes and central differences for ``dh/dx``.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from typing import Callable, Optional

import numpy as np

from .dissipation import STENCIL_HALF_WIDTH
from .kernels import es_row_fluxes, state_fields
from .grid import BoundaryCondition, GridField, Mesh, central_diff, fill_ghosts_array
from .physics import max_speed_x, max_speed_y, source_w
from .state import (
    EPS_ADM, SWAP, H, AdmissibilityError, ModelParams, cons_to_prim, prim_to_cons,
)

log = logging.getLogger(__name__)

SCHEMES = {"o1": 1, "o2": 2, "o3": 3, "o4": 4}


class AdmissibilityFailure(AdmissibilityError):
    """Raised by the right-hand side; ``index`` is the interior ``(j, i)`` cell."""


class SolverAbort(RuntimeError):
    def __init__(self, message: str, time: float, step: int, index=None, neighborhood=None):
        super().__init__(message)
        self.time = time
        self.step = step
        self.index = index
        self.neighborhood = neighborhood


@dataclass(frozen=True)
class RKTableau:
    """Shu-Osher form: ``U_k = sum_l alpha[k][l] U_l + dt * beta[k][l] L(U_l)``.

    Row ``k`` (``k = 1..m``) combines stages ``0..k-1``; the last row is the
    new solution.
    """

    alpha: tuple
    beta: tuple

    def __post_init__(self):
        for k, (a, b) in enumerate(zip(self.alpha, self.beta), start=1):
            if len(a) != k or len(b) != k:
                raise ValueError(f"row {k} must have {k} entries")
            if abs(sum(a) - 1.0) > 1e-13:
                raise ValueError(f"row {k} of alpha is not a convex combination")

    @property
    def stages(self) -> int:
        return len(self.alpha)


EULER = RKTableau(alpha=((1.0,),), beta=((1.0,),))
SSPRK2 = RKTableau(alpha=((1.0,), (0.5, 0.5)), beta=((1.0,), (0.0, 0.5)))
SSPRK3 = RKTableau(
    alpha=((1.0,), (0.75, 0.25), (1.0 / 3.0, 0.0, 2.0 / 3.0)),
    beta=((1.0,), (0.0, 0.25), (0.0, 0.0, 2.0 / 3.0)),
)
SSPRK54 = RKTableau(
    alpha=(
        (1.0,),
        (0.44437049406734, 0.55562950593266),
        (0.62010185138540, 0.0, 0.37989814861460),
        (0.17807995410773, 0.0, 0.0, 0.82192004589227),
        (0.00683325884039, 0.0, 0.51723167208978, 0.12759831133288, 0.34833675773694),
    ),
    beta=(
        (0.39175222700392,),
        (0.0, 0.36841059262959),
        (0.0, 0.0, 0.25189177424738),
        (0.0, 0.0, 0.0, 0.54497475021237),
        (0.0, 0.0, 0.0, 0.08460416338212, 0.22600748319395),
    ),
)
TABLEAUS = {1: EULER, 2: SSPRK2, 3: SSPRK3, 4: SSPRK54}


@dataclass
class SchemeConfig:
    order: int = 2
    cfl: float = 0.45
    end_time: float = 1.0
    source_enabled: bool = True
    wave_speed: str = "flux"  # Rusanov coefficient: "flux" or "full" eigenvalues

    def __post_init__(self):
        if self.wave_speed not in ("flux", "full"):
            raise ValueError("wave_speed must be 'flux' or 'full'")
        if self.order not in (1, 2, 3, 4):
            raise ValueError(f"order must be 1..4, got {self.order}")
        if not self.cfl > 0:
            raise ValueError("cfl must be positive")
        if self.end_time < 0:
            raise ValueError("end_time must be non-negative")

    @property
    def ghost(self) -> int:
        return max(2, STENCIL_HALF_WIDTH[self.order])

    @property
    def cd_order(self) -> int:
        """Central-difference order for the non-conservative terms."""
        return 2 if self.order <= 2 else 4

    @property
    def tableau(self) -> RKTableau:
        return TABLEAUS[self.order]


@dataclass
class Forcing:
    """Per-run data entering the right-hand side besides the state."""

    params: ModelParams
    grad_b: Optional[tuple] = None  # (bx, by) arrays on the interior
    forcing: Optional[Callable] = None  # (X, Y, t) -> (6, ny, nx)
    X: Optional[np.ndarray] = None
    Y: Optional[np.ndarray] = None


def _primitive_checked(u: np.ndarray, mesh: Mesh) -> np.ndarray:
    try:
        return cons_to_prim(u)
    except AdmissibilityError as exc:
        idx = exc.index
        if idx is not None and len(idx) == 2:
            idx = (idx[0] - mesh.gy, idx[1] - mesh.gx)
        raise AdmissibilityFailure(f"{exc} (interior cell {idx})", idx) from None


def rhs(u: np.ndarray, mesh: Mesh, bc: BoundaryCondition, config: SchemeConfig,
        data: Forcing, t: float = 0.0) -> np.ndarray:
    """Time derivative of the interior cells.

    ``u`` is a full ghosted array ``(6, ny+2gy, nx+2gx)``; its ghost layers are
    overwritten according to ``bc``.
    """
    fill_ghosts_array(u, mesh, bc)
    g = data.params.g
    gx, gy = mesh.gx, mesh.gy
    ny, nx = mesh.ny, mesh.nx
    w, v, wy, vy, bad = state_fields(u, EPS_ADM, gx, nx, mesh.dim == 2)
    if bad >= 0:
        _primitive_checked(u, mesh)  # raises with the proper message
        j, i = divmod(int(bad), u.shape[2])
        raise AdmissibilityFailure("inadmissible state", (j - gy, i - gx))
    rows = slice(gy, gy + ny)
    cols = slice(gx, gx + nx)
    order = config.order
    k = STENCIL_HALF_WIDTH[order]

    full = config.wave_speed == "full"

    def divergence(wr, vr, ghost):
        f = es_row_fluxes(np.ascontiguousarray(wr), np.ascontiguousarray(vr), order, g, full)
        n = wr.shape[-1] - 2 * ghost
        f = f[..., ghost - k: ghost - k + n + 1]
        return f[..., 1:] - f[..., :-1]

    out = -divergence(w[:, rows, :], v[:, rows, :], gx) / mesh.dx
    ui = u[:, rows, cols]
    hx = central_diff(w[H, rows, :], config.cd_order, mesh.dx, gx, axis=-1)
    # B^x dh/dx with B^x = (0, gh, 0, g h v1, g h v2 / 2, 0)
    out[1] -= g * ui[0] * hx
    out[3] -= g * ui[1] * hx
    out[4] -= 0.5 * g * ui[2] * hx
    if mesh.dim == 2:
        dfy = np.swapaxes(divergence(wy, vy, gy), 1, 2)[SWAP]
        out -= dfy / mesh.dy
        hy = central_diff(w[H, :, cols], config.cd_order, mesh.dy, gy, axis=0)
        out[2] -= g * ui[0] * hy
        out[4] -= 0.5 * g * ui[1] * hy
        out[5] -= g * ui[2] * hy
    if config.source_enabled and data.grad_b is not None:
        out += source_w(w[:, rows, cols], data.grad_b, data.params)
    if data.forcing is not None:
        out += data.forcing(data.X, data.Y, t)
    return out


def step_ssp(u: np.ndarray, rate: Callable, dt: float, tableau: RKTableau, t: float = 0.0,
             check: Optional[Callable] = None) -> np.ndarray:
    """Advance interior array ``u`` by one SSP-RK step.

    ``rate(u, t)`` returns ``dU/dt`` for an interior array. ``check`` is called
    on every stage result (NaN detection).
    """
    if not dt > 0:
        raise ValueError("dt must be positive")
    stages = [u]
    times = [t]
    rates: dict = {}
    for a_row, b_row in zip(tableau.alpha, tableau.beta):
        # u_ref + sum a_l (u_l - u_ref): the weights sum to one exactly, so
        # rounded coefficients cannot bias conserved totals step after step
        ref = next(l for l, a in enumerate(a_row) if a)
        new = stages[ref].copy()
        tk = 0.0
        for l, (a, b) in enumerate(zip(a_row, b_row)):
            if a and l != ref:
                new += a * (stages[l] - stages[ref])
            if b:
                if l not in rates:
                    rates[l] = rate(stages[l], times[l])
                new += (b * dt) * rates[l]
            tk += a * times[l] + b * dt
        if check is not None:
            check(new)
        stages.append(new)
        times.append(tk)
    return stages[-1]


def compute_dt(u: np.ndarray, mesh: Mesh, config: SchemeConfig, params: ModelParams,
               t: float = 0.0) -> float:
    """CFL time step from interior conserved states, capped at ``end_time``."""
    w = cons_to_prim(u)
    inv = max_speed_x(w, params.g) / mesh.dx
    if mesh.dim == 2:
        inv = inv + max_speed_y(w, params.g) / mesh.dy
    dt = config.cfl / float(np.max(inv))
    return min(dt, config.end_time - t)


def total_entropy_interior(u: np.ndarray, mesh: Mesh) -> float:
    from .state import specific_entropy_w

    w = cons_to_prim(u)
    eta = -w[H] * specific_entropy_w(w)
    return float(np.sum(eta)) * mesh.cell_area()


@dataclass
class SolutionRecord:
    mesh: Mesh
    u: np.ndarray  # interior conserved states (6, ny, nx)
    time: float
    steps: int
    times: list = field(default_factory=list)
    entropy: list = field(default_factory=list)
    mass: list = field(default_factory=list)
    snapshots: dict = field(default_factory=dict)

    @property
    def w(self) -> np.ndarray:
        return cons_to_prim(self.u)


def _neighborhood(u: np.ndarray, idx, radius: int = 2) -> Optional[np.ndarray]:
    if idx is None or len(idx) != 2:
        return None
    j, i = idx
    ny, nx = u.shape[1:]
    js = slice(max(j - radius, 0), min(j + radius + 1, ny))
    is_ = slice(max(i - radius, 0), min(i + radius + 1, nx))
    with np.errstate(all="ignore"):
        return cons_to_prim(u[:, js, is_], check=False)


def integrate(u0: np.ndarray, mesh: Mesh, bc: BoundaryCondition, config: SchemeConfig,
              data: Forcing, snapshot_times=(), max_steps: Optional[int] = None,
              dt_fixed: Optional[float] = None) -> SolutionRecord:
    """Advance interior states ``u0`` from ``t = 0`` to ``config.end_time``."""
    buf = np.zeros((6,) + mesh.shape)
    inner = (slice(None),) + mesh.interior

    def rate(ui, t):
        buf[inner] = ui
        return rhs(buf, mesh, bc, config, data, t)

    def check(ui):
        if not np.all(np.isfinite(ui)):
            bad = np.argwhere(~np.all(np.isfinite(ui), axis=0))
            raise AdmissibilityFailure("non-finite value in stage", tuple(int(x) for x in bad[0]))

    u = np.array(u0, dtype=float)
    t = 0.0
    rec = SolutionRecord(mesh=mesh, u=u, time=0.0, steps=0)
    rec.times.append(t)
    rec.entropy.append(total_entropy_interior(u, mesh))
    rec.mass.append(float(np.sum(u[H])) * mesh.cell_area())
    pending = sorted(float(s) for s in snapshot_times if 0.0 <= s <= config.end_time)
    while pending and pending[0] <= 0.0:
        rec.snapshots[pending.pop(0)] = u.copy()
    tab = config.tableau
    step = 0
    while t < config.end_time and (max_steps is None or step < max_steps):
        try:
            if dt_fixed is not None:
                dt = min(dt_fixed, config.end_time - t)
            else:
                dt = compute_dt(u, mesh, config, data.params, t)
            if pending:
                dt = min(dt, pending[0] - t)
            u_new = step_ssp(u, rate, dt, tab, t, check)
            entropy = total_entropy_interior(u_new, mesh)
        except AdmissibilityError as exc:
            idx = getattr(exc, "index", None)
            raise SolverAbort(
                f"solver aborted at t={t:.6g}, step {step}: {exc}", t, step, idx,
                _neighborhood(u, idx),
            ) from exc
        u = u_new
        step += 1
        t = t + dt
        if config.end_time - t < 1e-14 * max(1.0, config.end_time):
            t = config.end_time
        rec.times.append(t)
        rec.entropy.append(entropy)
        rec.mass.append(float(np.sum(u[H])) * mesh.cell_area())
        while pending and pending[0] <= t + 1e-14:
            rec.snapshots[pending.pop(0)] = u.copy()
    rec.u = u
    rec.time = t
    rec.steps = step
    log.info("finished %d steps at t=%g", step, t)
    return rec


def run(case, config: SchemeConfig, nx: Optional[int] = None, ny: Optional[int] = None,
        snapshot_times=(), max_steps: Optional[int] = None) -> SolutionRecord:
    """Set up ``case`` (a :class:`ssw.cases.CaseSpec`) and integrate it."""
    mesh = case.mesh(nx, ny, ghost=config.ghost)
    X, Y = mesh.meshgrid()
    u0 = prim_to_cons(case.initial_primitive(X, Y))
    grad_b = case.bottom_gradient(X, Y) if case.has_source else None
    forcing = None
    if case.forcing is not None:
        params = case.params

        def forcing(X, Y, t):
            return case.forcing(X, Y, t, params)

    cfg = replace(config, source_enabled=config.source_enabled and case.has_source)
    data = Forcing(params=case.params, grad_b=grad_b, forcing=forcing, X=X, Y=Y)
    return integrate(u0, mesh, case.bc, cfg, data, snapshot_times, max_steps)
