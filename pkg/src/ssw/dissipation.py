"""Entropy-scaled eigenvectors and entropy-stable interface fluxes.

The scaled eigenvector matrix ``R~ = R T`` satisfies ``R~ R~^T = dU/dV`` where
``R`` are the right eigenvectors of the conservative-part Jacobian and ``T``
is the symmetric square root of the block-diagonal matrix ``Y``. The
Rusanov-type dissipation operator is ``D = R~ Lambda R~^T`` with scalar
``Lambda``; it acts on the jump of reconstructed scaled variables
``R~^T V`` as ``R~ Lambda [[V~]]``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ec_flux import ec_face_fluxes
from .physics import dU_dW, max_speed_x, right_eigenvectors_w_x
from .reconstruct import scaled_face_jumps
from .state import SWAP, H, P11, P12, P22, V1, cons_to_prim, entropy_vars_w

#: stencil half-width (cells on each side of a face) needed by each order
STENCIL_HALF_WIDTH = {1: 1, 2: 2, 3: 3, 4: 4}


@dataclass
class ScaledEigen:
    R_tilde: np.ndarray
    Lambda: np.ndarray
    T: np.ndarray


def _y_entries(w):
    h, p11, p12, p22 = w[H], w[P11], w[P12], w[P22]
    det = p11 * p22 - p12 * p12
    y0 = 1.0 / (12.0 * h * p11 * p11)
    y1 = det / (4.0 * h * p11 * p11)
    b00 = 1.0 / (3.0 * h)
    b01 = p12 * p12 / (3.0 * h * p11)
    b11 = (3.0 * det * det + p12**4) / (3.0 * h * p11 * p11)
    return y0, y1, b00, b01, b11, det


def _t_entries(w):
    """Diagonal entries and the 2x2 block of the scaling matrix ``T``."""
    y0, y1, b00, b01, b11, det = _y_entries(w)
    r1 = det / (np.sqrt(3.0) * w[H] * w[P11])  # sqrt(det Y_b)
    alpha = np.sqrt(b00 + b11 + 2.0 * r1)
    return np.sqrt(y0), np.sqrt(y1), (b00 + r1) / alpha, b01 / alpha, (b11 + r1) / alpha


def _block_diag(d0, d1, b00, b01, b11):
    z = np.zeros_like(d0)
    return np.array([
        [d0, z, z, z, z, z],
        [z, d1, z, z, z, z],
        [z, z, b00, b01, z, z],
        [z, z, b01, b11, z, z],
        [z, z, z, z, d1, z],
        [z, z, z, z, z, d0],
    ])


def y_matrix_x(w: np.ndarray) -> np.ndarray:
    y0, y1, b00, b01, b11, _ = _y_entries(w)
    return _block_diag(y0, y1, b00, b01, b11)


def scaling_matrix_x(w: np.ndarray) -> np.ndarray:
    """Symmetric positive definite ``T`` with ``T @ T == Y`` (x-direction)."""
    return _block_diag(*_t_entries(w))


def scaling_matrix_y(w: np.ndarray) -> np.ndarray:
    return scaling_matrix_x(np.asarray(w)[SWAP])


def scaled_eigenvectors_x(w: np.ndarray) -> np.ndarray:
    """``R~ = R T`` for primitive states ``w`` of shape ``(6, ...)``."""
    a = np.moveaxis(dU_dW(w), (0, 1), (-2, -1))
    b = np.moveaxis(right_eigenvectors_w_x(w), (0, 1), (-2, -1))
    r = np.moveaxis(a @ b, (-2, -1), (0, 1))
    t0, t1, b00, b01, b11 = _t_entries(w)
    rt = np.empty_like(r)
    rt[:, 0] = r[:, 0] * t0
    rt[:, 1] = r[:, 1] * t1
    rt[:, 2] = r[:, 2] * b00 + r[:, 3] * b01
    rt[:, 3] = r[:, 2] * b01 + r[:, 3] * b11
    rt[:, 4] = r[:, 4] * t1
    rt[:, 5] = r[:, 5] * t0
    return rt


def rusanov_speed_x(w: np.ndarray, g: float, speed: str = "flux") -> np.ndarray:
    """Scalar dissipation coefficient ``max_k |lambda_k|``.

    ``speed="flux"`` takes the eigenvalues of ``dF^x/dU`` (the matrix whose
    eigenvectors build ``R~``); ``speed="full"`` those of the full system
    with gravity, a larger and more diffusive bound.
    """
    if speed == "flux":
        return np.abs(w[V1]) + np.sqrt(3.0 * w[P11])
    if speed == "full":
        return max_speed_x(w, g)
    raise ValueError(f"speed must be 'flux' or 'full', got {speed!r}")


def scaled_eigensystem_x(w: np.ndarray, g: float, speed: str = "flux") -> ScaledEigen:
    return ScaledEigen(scaled_eigenvectors_x(w), rusanov_speed_x(w, g, speed), scaling_matrix_x(w))


def scaled_eigensystem_y(w: np.ndarray, g: float, speed: str = "flux") -> ScaledEigen:
    w = np.asarray(w)
    ex = scaled_eigensystem_x(w[SWAP], g, speed)
    return ScaledEigen(ex.R_tilde[SWAP], ex.Lambda, ex.T)


def dissipation_matrix_x(w: np.ndarray, g: float, speed: str = "flux") -> np.ndarray:
    se = scaled_eigensystem_x(w, g, speed)
    return se.Lambda * np.einsum("ik...,jk...->ij...", se.R_tilde, se.R_tilde)


def interface_state(wl: np.ndarray, wr: np.ndarray) -> np.ndarray:
    """State at which a face's eigensystem is evaluated: the primitive mean."""
    return 0.5 * (wl + wr)


def es_face_fluxes(w: np.ndarray, order: int, g: float, v: np.ndarray | None = None,
                   speed: str = "flux") -> np.ndarray:
    """Entropy-stable x-fluxes at every face of a row (last axis).

    ``w`` holds primitive states of ``n`` cells. Returns ``n - 2k + 1`` faces,
    ``k = STENCIL_HALF_WIDTH[order]``, face ``f`` sitting between cells
    ``f+k-1`` and ``f+k``.
    """
    k = STENCIL_HALF_WIDTH[order]
    n = w.shape[-1]
    nf = n - 2 * k + 1
    if nf < 1:
        raise ValueError(f"order {order} needs at least {2 * k} cells, got {n}")
    if v is None:
        v = entropy_vars_w(w)
    lo = k - 1
    ec = ec_face_fluxes(w, order)
    if order >= 3:
        # fourth-order flux faces start one cell later than two-point faces
        ec = ec[..., lo - 1: lo - 1 + nf]
    else:
        ec = ec[..., lo: lo + nf]
    wf = interface_state(w[..., lo: lo + nf], w[..., lo + 1: lo + 1 + nf])
    rt = scaled_eigenvectors_x(wf)
    lam = rusanov_speed_x(wf, g, speed)
    jumps = scaled_face_jumps(v, rt, k)
    diss = np.einsum("ij...,j...->i...", rt, jumps)
    return ec - 0.5 * lam * diss


def es_flux_x(stencil, order: int, g: float, speed: str = "flux") -> np.ndarray:
    """Entropy-stable x-flux at the middle face of a stencil of conserved states.

    ``stencil`` is a sequence of ``2k`` states (``k = 1, 2, 3, 4`` for orders
    1-4), the face lying between entries ``k-1`` and ``k``.
    """
    k = STENCIL_HALF_WIDTH[order]
    cells = np.stack([np.asarray(u, dtype=float) for u in stencil], axis=-1)
    if cells.shape[-1] != 2 * k:
        raise ValueError(f"order {order} needs a stencil of {2 * k} states")
    return es_face_fluxes(cons_to_prim(cells), order, g, speed=speed)[..., 0]


def es_flux_y(stencil, order: int, g: float, speed: str = "flux") -> np.ndarray:
    return es_flux_x([np.asarray(u)[SWAP] for u in stencil], order, g, speed)[SWAP]
