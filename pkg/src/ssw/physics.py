"""Fluxes, non-conservative terms, sources and eigenstructure of the model.

Everything takes component-first arrays (see :mod:`ssw.state`). Matrices are
returned with shape ``(6, 6, ...)``.

Two eigensystems are exposed. ``right_eigenvectors_x`` belongs to the
conservative part ``dF/dU`` alone (speeds ``v1 +- sqrt(3 P11)``,
``v1 +- sqrt(P11)``, ``v1``) and is what the entropy-scaled dissipation is built
on. ``full_right_eigenvectors_x`` belongs to the complete quasi-linear system
including the gravity terms (speeds ``v1 +- sqrt(g h + 3 P11)``); its speeds
bound the time step and the Rusanov coefficient.
"""
from __future__ import annotations

import numpy as np

from .state import SWAP, H, P11, P12, P22, V1, V2, ModelParams, cons_to_prim

__all__ = [
    "flux_x", "flux_y", "flux_x_w", "noncons_x", "noncons_y", "alpha_closure", "source",
    "eigenvalues_x", "eigenvalues_y", "full_eigenvalues_x", "full_eigenvalues_y",
    "max_speed_x", "max_speed_y", "dU_dW", "right_eigenvectors_x", "right_eigenvectors_y",
    "full_right_eigenvectors_x",
]


def flux_x_w(w: np.ndarray) -> np.ndarray:
    h, v1, v2 = w[H], w[V1], w[V2]
    p11, p12, p22 = w[P11], w[P12], w[P22]
    f = np.empty_like(w)
    f[0] = h * v1
    f[1] = h * (v1 * v1 + p11)
    f[2] = h * (v1 * v2 + p12)
    f[3] = 0.5 * h * v1 * (v1 * v1 + 3.0 * p11)
    f[4] = 0.5 * h * (v1 * v1 * v2 + 2.0 * v1 * p12 + v2 * p11)
    f[5] = 0.5 * h * (v1 * v2 * v2 + 2.0 * v2 * p12 + v1 * p22)
    return f


def flux_x(u: np.ndarray) -> np.ndarray:
    return flux_x_w(cons_to_prim(u))


def flux_y(u: np.ndarray) -> np.ndarray:
    return flux_x(np.asarray(u)[SWAP])[SWAP]


def noncons_x(u: np.ndarray, g: float) -> np.ndarray:
    """Vector multiplying ``dh/dx``: ``(0, gh, 0, g h v1, g h v2 / 2, 0)``."""
    u = np.asarray(u, dtype=float)
    h = u[H]
    b = np.zeros_like(u)
    b[1] = g * h
    b[3] = g * u[1]
    b[4] = 0.5 * g * u[2]
    return b


def noncons_y(u: np.ndarray, g: float) -> np.ndarray:
    return noncons_x(np.asarray(u)[SWAP], g)[SWAP]


def alpha_closure(w: np.ndarray, p: ModelParams):
    """Dissipation coefficient ``max(0, C_r (T - phi h^2) / T^2)``, ``T = tr P``."""
    tr = w[P11] + w[P22]
    return np.maximum(0.0, p.C_r * (tr - p.phi * w[H] ** 2) / tr**2)


def source(u: np.ndarray, grad_b, p: ModelParams) -> np.ndarray:
    """Topography, Chezy friction and turbulent dissipation source terms."""
    w = cons_to_prim(u)
    return source_w(w, grad_b, p)


def source_w(w: np.ndarray, grad_b, p: ModelParams) -> np.ndarray:
    bx, by = grad_b
    g = p.g
    h, v1, v2 = w[H], w[V1], w[V2]
    speed = np.sqrt(v1 * v1 + v2 * v2)
    alpha = alpha_closure(w, p)
    diss = alpha * speed**3
    fric = p.C_f * speed
    s = np.zeros_like(w)
    s[1] = -g * h * bx - fric * v1
    s[2] = -g * h * by - fric * v2
    s[3] = -diss * w[P11] - g * h * v1 * bx - fric * v1 * v1
    s[4] = -diss * w[P12] - 0.5 * g * h * v2 * bx - 0.5 * g * h * v1 * by - fric * v1 * v2
    s[5] = -diss * w[P22] - g * h * v2 * by - fric * v2 * v2
    return s


def eigenvalues_x(w: np.ndarray) -> np.ndarray:
    """Ascending eigenvalues of the conservative-part Jacobian ``dF^x/dU``."""
    v1 = w[V1]
    c = np.sqrt(w[P11])
    a = np.sqrt(3.0 * w[P11])
    return np.array([v1 - a, v1 - c, v1, v1, v1 + c, v1 + a])


def eigenvalues_y(w: np.ndarray) -> np.ndarray:
    return eigenvalues_x(np.asarray(w)[SWAP])


def full_eigenvalues_x(w: np.ndarray, g: float) -> np.ndarray:
    """Ascending eigenvalues of the full system (gravity included), x-direction."""
    v1 = w[V1]
    c = np.sqrt(w[P11])
    a = np.sqrt(g * w[H] + 3.0 * w[P11])
    return np.array([v1 - a, v1 - c, v1, v1, v1 + c, v1 + a])


def full_eigenvalues_y(w: np.ndarray, g: float) -> np.ndarray:
    return full_eigenvalues_x(np.asarray(w)[SWAP], g)


def max_speed_x(w: np.ndarray, g: float) -> np.ndarray:
    """``max_k |lambda_k|`` of the full system; the fast wave always dominates."""
    return np.abs(w[V1]) + np.sqrt(g * w[H] + 3.0 * w[P11])


def max_speed_y(w: np.ndarray, g: float) -> np.ndarray:
    return np.abs(w[V2]) + np.sqrt(g * w[H] + 3.0 * w[P22])


def dU_dW(w: np.ndarray) -> np.ndarray:
    h, v1, v2 = w[H], w[V1], w[V2]
    z = np.zeros_like(h)
    one = np.ones_like(h)
    return np.array([
        [one, z, z, z, z, z],
        [v1, h, z, z, z, z],
        [v2, z, h, z, z, z],
        [0.5 * (w[P11] + v1 * v1), h * v1, z, 0.5 * h, z, z],
        [0.5 * (w[P12] + v1 * v2), 0.5 * h * v2, 0.5 * h * v1, z, 0.5 * h, z],
        [0.5 * (w[P22] + v2 * v2), z, h * v2, z, z, 0.5 * h],
    ])


def _rw_x(w: np.ndarray, a2: np.ndarray) -> np.ndarray:
    """Primitive-variable right eigenvectors for fast speed ``sqrt(a2)``.

    ``a2 = 3 P11`` gives the conservative-part matrix, ``a2 = g h + 3 P11`` the
    full-system one; both are the same family of columns.
    """
    h, p11, p12 = w[H], w[P11], w[P12]
    a = np.sqrt(a2)
    c = np.sqrt(p11)
    c2 = p11
    d = a2 - c2
    z = np.zeros_like(h)
    one = np.ones_like(h)
    return np.array([
        [h * d, z, -h, z, z, h * d],
        [-a * d, z, z, z, z, a * d],
        [-2.0 * a * p12, -c, z, z, c, 2.0 * a * p12],
        [2.0 * c2 * d, z, a2 - 2.0 * c2, z, z, 2.0 * c2 * d],
        [p12 * (a2 + c2), c2, p12, z, c2, p12 * (a2 + c2)],
        [4.0 * p12 * p12, 2.0 * p12, z, one, 2.0 * p12, 4.0 * p12 * p12],
    ])


def right_eigenvectors_w_x(w: np.ndarray) -> np.ndarray:
    # same family as _rw_x(w, 3 P11) with the acoustic columns halved; the
    # scaling matrix is derived for exactly this normalisation
    h, p11, p12 = w[H], w[P11], w[P12]
    a = np.sqrt(3.0 * p11)
    c = np.sqrt(p11)
    z = np.zeros_like(h)
    one = np.ones_like(h)
    return np.array([
        [h * p11, z, -h, z, z, h * p11],
        [-a * p11, z, z, z, z, a * p11],
        [-a * p12, -c, z, z, c, a * p12],
        [2.0 * p11 * p11, z, p11, z, z, 2.0 * p11 * p11],
        [2.0 * p11 * p12, p11, p12, z, p11, 2.0 * p11 * p12],
        [2.0 * p12 * p12, 2.0 * p12, z, one, 2.0 * p12, 2.0 * p12 * p12],
    ])


def right_eigenvectors_x(w: np.ndarray) -> np.ndarray:
    """Right eigenvectors of ``dF^x/dU`` in conserved variables, columns ordered
    as :func:`eigenvalues_x`."""
    return np.einsum("ij...,jk...->ik...", dU_dW(w), right_eigenvectors_w_x(w))


def right_eigenvectors_y(w: np.ndarray) -> np.ndarray:
    return right_eigenvectors_x(np.asarray(w)[SWAP])[SWAP]


def full_right_eigenvectors_x(w: np.ndarray, g: float) -> np.ndarray:
    """Right eigenvectors of the full quasi-linear x-operator, conserved variables."""
    a2 = g * w[H] + 3.0 * w[P11]
    return np.einsum("ij...,jk...->ik...", dU_dW(w), _rw_x(w, a2))
