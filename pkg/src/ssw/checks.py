"""Randomized invariant checks shared by the CLI ``verify`` command and tests.

Each check draws admissible states from a seeded generator and returns a
:class:`CheckResult` with the worst observed residual.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dissipation import scaled_eigensystem_y, scaled_eigenvectors_x, scaling_matrix_x, y_matrix_x
from .ec_flux import ec_flux_x, ec_flux_y
from .physics import noncons_x, noncons_y
from .reconstruct import face_jumps_from_window
from .state import (
    entropy, entropy_potential, entropy_vars, entropy_vars_to_cons, prim_to_cons,
)


@dataclass
class CheckResult:
    name: str
    samples: int
    worst: float
    tol: float

    @property
    def passed(self) -> bool:
        return bool(self.worst < self.tol)

    @property
    def failures(self) -> int:
        return 0 if self.passed else 1

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return f"{tag} {self.name}: worst {self.worst:.3e} (tol {self.tol:.1e}) over {self.samples} samples"


def random_primitive(rng: np.random.Generator, n: int) -> np.ndarray:
    """``n`` admissible primitive states with depth and stress over several decades."""
    h = 10.0 ** rng.uniform(-2, 1, n)
    v = rng.uniform(-2, 2, (2, n))
    lam = 10.0 ** rng.uniform(-2, 1, n)
    lam = np.array([lam, lam * 10.0 ** rng.uniform(-1, 1, n)])  # condition number <= 10
    ang = rng.uniform(0, np.pi, n)
    c, s = np.cos(ang), np.sin(ang)
    p11 = lam[0] * c * c + lam[1] * s * s
    p22 = lam[0] * s * s + lam[1] * c * c
    p12 = (lam[0] - lam[1]) * c * s
    return np.array([h, v[0], v[1], p11, p12, p22])


def jump_identity(rng: np.random.Generator, n: int = 100_000, tol: float = 1e-11) -> list:
    """``|[V].F~ - [psi]| / (1 + |[psi]|)`` for the two-point flux in x and y."""
    ul = prim_to_cons(random_primitive(rng, n))
    ur = prim_to_cons(random_primitive(rng, n))
    dv = entropy_vars(ur) - entropy_vars(ul)
    psl, psr = entropy_potential(ul), entropy_potential(ur)
    out = []
    for axis, flux in ((0, ec_flux_x), (1, ec_flux_y)):
        dpsi = psr[axis] - psl[axis]
        res = np.abs(np.sum(dv * flux(ul, ur), axis=0) - dpsi) / (1.0 + np.abs(dpsi))
        out.append(CheckResult(f"jump identity ({'xy'[axis]})", n, float(res.max()), tol))
    return out


def dU_dV_complex_step(v: np.ndarray, step: float = 1e-30) -> np.ndarray:
    """Jacobian ``(6, 6, n)`` of the ``V -> U`` map by imaginary-step differences.

    ``Im U(V + i e_j t) / t`` has no subtractive cancellation, so the result
    is exact to rounding for any small ``t``.
    """
    jac = np.empty((6, 6) + v.shape[1:])
    for j in range(6):
        e = np.zeros(v.shape, dtype=complex)
        e[j] = 1j * step
        jac[:, j] = entropy_vars_to_cons(v + e).imag / step
    return jac


def scaling_identity(rng: np.random.Generator, n: int = 10_000, tol: float = 1e-9,
                     tol_t: float = 1e-12) -> list:
    """``R~ R~^T == dU/dV`` in both directions and ``T @ T == Y``."""
    w = random_primitive(rng, n)
    v = entropy_vars(prim_to_cons(w))
    jac = dU_dV_complex_step(v)
    out = []
    for name, rt in (("x", scaled_eigenvectors_x(w)), ("y", scaled_eigensystem_y(w, 9.81).R_tilde)):
        rrt = np.einsum("ik...,jk...->ij...", rt, rt)
        rel = np.linalg.norm(rrt - jac, axis=(0, 1)) / np.linalg.norm(jac, axis=(0, 1))
        out.append(CheckResult(f"scaling identity R~R~^T = dU/dV ({name})", n, float(rel.max()), tol))
    t = scaling_matrix_x(w)
    y = y_matrix_x(w)
    tt = np.einsum("ik...,kj...->ij...", t, t)
    rel = np.linalg.norm(tt - y, axis=(0, 1)) / np.linalg.norm(y, axis=(0, 1))
    out.append(CheckResult("scaling identity T^2 = Y", n, float(rel.max()), tol_t))
    return out


def _random_rows(rng: np.random.Generator, n: int, width: int) -> np.ndarray:
    """Rows mixing smooth data, jumps, plateaus and exact ties."""
    kind = rng.integers(0, 4, n)
    x = np.arange(width)
    smooth = np.sin(rng.uniform(0, 3, (n, 1)) * x + rng.uniform(0, 6, (n, 1)))
    noise = rng.normal(size=(n, width))
    steps = np.where(x >= rng.integers(1, width, (n, 1)), 1.0, 0.0) * rng.normal(size=(n, 1))
    ties = rng.integers(-2, 3, (n, width)).astype(float)
    rows = np.select([kind[:, None] == k for k in range(4)], [smooth, noise, steps, ties])
    # powers of two keep tied rows exact, so exact zero jumps stay zero
    scale = np.where(kind[:, None] == 3, 2.0 ** rng.integers(-20, 10, (n, 1)),
                     10.0 ** rng.uniform(-6, 3, (n, 1)))
    return rows * scale


def sign_property(rng: np.random.Generator, n: int = 10_000) -> list:
    """Reconstructed face jump times cell jump is never negative."""
    out = []
    for name, order in (("minmod", 2), ("ENO3", 3), ("ENO4", 4)):
        rows = _random_rows(rng, n, 2 * order)
        rec = face_jumps_from_window(rows, order)
        cell = rows[:, order] - rows[:, order - 1]
        bad = int(np.sum((rec * cell < 0) | ((cell == 0) & (rec != 0))))
        out.append(CheckResult(f"sign property ({name})", n, float(bad), 0.5))
    return out


def entropy_gradient(rng: np.random.Generator, n: int = 10_000, tol: float = 1e-7) -> list:
    """``V . dU/de`` equals ``d eta/de`` along random admissible paths ``w + e dw``."""
    w = random_primitive(rng, n)
    lam_min = 0.5 * (w[3] + w[5]) - np.sqrt(0.25 * (w[3] - w[5]) ** 2 + w[4] ** 2)
    vel = np.sqrt(w[3] + w[5])
    scale = np.array([w[0], vel, vel, lam_min, lam_min, lam_min])
    dw = rng.uniform(-1, 1, w.shape) * scale
    eps = 1e-4
    path = [prim_to_cons(w + k * eps * dw) for k in (-2, -1, 1, 2)]
    fd = lambda f: (f(path[0]) - 8 * f(path[1]) + 8 * f(path[2]) - f(path[3])) / (12 * eps)  # noqa: E731
    du = fd(lambda u: u)
    deta = fd(lambda u: entropy(u)[0])
    v = entropy_vars(prim_to_cons(w))
    res = np.abs(np.sum(v * du, axis=0) - deta) / np.sum(np.abs(v * du), axis=0)
    return [CheckResult("entropy variables = grad eta", n, float(res.max()), tol)]


def noncons_orthogonality(rng: np.random.Generator, n: int = 10_000, tol: float = 1e-12,
                          g: float = 9.81) -> list:
    """Entropy variables annihilate the non-conservative vectors ``B^x``, ``B^y``."""
    u = prim_to_cons(random_primitive(rng, n))
    v = entropy_vars(u)
    out = []
    for name, b in (("x", noncons_x(u, g)), ("y", noncons_y(u, g))):
        res = np.abs(np.sum(v * b, axis=0)) / (np.linalg.norm(v, axis=0) * np.linalg.norm(b, axis=0))
        out.append(CheckResult(f"V . B^{name} = 0", n, float(res.max()), tol))
    return out


def run_all(seed: int = 0, scale: float = 1.0) -> list:
    """Every check with sample counts multiplied by ``scale``."""
    rng = np.random.default_rng(seed)
    m = lambda k: max(10, int(k * scale))  # noqa: E731
    return (jump_identity(rng, m(100_000)) + scaling_identity(rng, m(10_000))
            + sign_property(rng, m(10_000)) + entropy_gradient(rng, m(10_000))
            + noncons_orthogonality(rng, m(10_000)))
