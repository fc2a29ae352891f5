"""Entropy-conservative two-point fluxes and their fourth-order combinations.

The conservative part of the model coincides with the 2D Ten-moment system
(depth in place of density), so the flux is the Ten-moment entropy
conservative flux written with ``beta = P / det P``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .state import SWAP, H, P11, P12, P22, V1, V2, cons_to_prim

#: threshold on ((a-b)/(a+b))^2 below which the log mean uses its series
_LOG_MEAN_EPS = 2.5e-5


def log_mean(a, b):
    """Logarithmic mean ``(b - a) / (ln b - ln a)`` of positive numbers.

    Near ``a == b`` the quotient is replaced by the truncated series
    ``(a + b) / (2 F(u))`` with ``u = ((a-b)/(a+b))^2`` and
    ``F(u) = 1 + u/3 + u^2/5 + u^3/7``, which is exact to roundoff below the
    threshold.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    f = (a - b) / (a + b)
    u = f * f
    small = u < _LOG_MEAN_EPS
    with np.errstate(divide="ignore", invalid="ignore"):
        direct = (a - b) / np.log(a / b)
    series = (a + b) / (2.0 * (1.0 + u * (1.0 / 3.0 + u * (1.0 / 5.0 + u / 7.0))))
    out = np.where(small, series, direct)
    return out[()] if out.ndim == 0 else out


@dataclass
class AveragedPair:
    """Arithmetic and logarithmic means of two adjacent primitive states."""

    h: np.ndarray
    v1: np.ndarray
    v2: np.ndarray
    b11: np.ndarray
    b12: np.ndarray
    b22: np.ndarray
    v1sq: np.ndarray
    v2sq: np.ndarray
    v1v2: np.ndarray
    h_ln: np.ndarray
    dbeta_ln: np.ndarray

    @classmethod
    def from_primitive(cls, wl: np.ndarray, wr: np.ndarray) -> "AveragedPair":
        detl = wl[P11] * wl[P22] - wl[P12] ** 2
        detr = wr[P11] * wr[P22] - wr[P12] ** 2
        # beta = P / det P, so det(beta) = 1 / det P
        return cls(
            h=0.5 * (wl[H] + wr[H]),
            v1=0.5 * (wl[V1] + wr[V1]),
            v2=0.5 * (wl[V2] + wr[V2]),
            b11=0.5 * (wl[P11] / detl + wr[P11] / detr),
            b12=0.5 * (wl[P12] / detl + wr[P12] / detr),
            b22=0.5 * (wl[P22] / detl + wr[P22] / detr),
            v1sq=0.5 * (wl[V1] ** 2 + wr[V1] ** 2),
            v2sq=0.5 * (wl[V2] ** 2 + wr[V2] ** 2),
            v1v2=0.5 * (wl[V1] * wl[V2] + wr[V1] * wr[V2]),
            h_ln=log_mean(wl[H], wr[H]),
            dbeta_ln=log_mean(1.0 / detl, 1.0 / detr),
        )


def ec_flux_x_w(wl: np.ndarray, wr: np.ndarray) -> np.ndarray:
    """x-directional entropy conservative flux from primitive states."""
    m = AveragedPair.from_primitive(wl, wr)
    det_bar = m.b11 * m.b22 - m.b12 ** 2
    f = np.empty(np.broadcast(wl, wr).shape)
    f[0] = m.h_ln * m.v1
    f[1] = m.v1 * f[0] + m.b11 * m.h / det_bar
    f[2] = m.v2 * f[0] + m.b12 * m.h / det_bar
    f[3] = 0.5 * (m.b11 / m.dbeta_ln - m.v1sq) * f[0] + m.v1 * f[1]
    f[4] = 0.5 * ((m.b12 / m.dbeta_ln - m.v1v2) * f[0] + m.v1 * f[2] + m.v2 * f[1])
    f[5] = 0.5 * (m.b22 / m.dbeta_ln - m.v2sq) * f[0] + m.v2 * f[2]
    return f


def ec_flux_x(ul: np.ndarray, ur: np.ndarray) -> np.ndarray:
    return ec_flux_x_w(cons_to_prim(ul), cons_to_prim(ur))


def ec_flux_y(ul: np.ndarray, ur: np.ndarray) -> np.ndarray:
    return ec_flux_x(np.asarray(ul)[SWAP], np.asarray(ur)[SWAP])[SWAP]


def ec_flux4_x_w(wm1, w0, wp1, wp2) -> np.ndarray:
    """Fourth-order EC flux at the face between ``w0`` and ``wp1``."""
    return (4.0 / 3.0) * ec_flux_x_w(w0, wp1) - (1.0 / 6.0) * (
        ec_flux_x_w(wm1, wp1) + ec_flux_x_w(w0, wp2)
    )


def ec_flux4_x(um1, u0, up1, up2) -> np.ndarray:
    return ec_flux4_x_w(*(cons_to_prim(u) for u in (um1, u0, up1, up2)))


def ec_flux4_y(um1, u0, up1, up2) -> np.ndarray:
    return ec_flux4_x(*(np.asarray(u)[SWAP] for u in (um1, u0, up1, up2)))[SWAP]


def ec_face_fluxes(w: np.ndarray, order: int) -> np.ndarray:
    """EC fluxes at every face of a row along the last axis.

    ``w`` holds cells ``0..n-1`` on its last axis. With ``order <= 2`` the
    result has ``n - 1`` faces (face ``k`` between cells ``k`` and ``k+1``);
    with the fourth-order combination it has ``n - 3`` faces, face ``k``
    sitting between cells ``k+1`` and ``k+2``.
    """
    if order <= 2:
        return ec_flux_x_w(w[..., :-1], w[..., 1:])
    # two-point fluxes of separation 1 and 2, computed once per row
    f1 = ec_flux_x_w(w[..., :-1], w[..., 1:])
    f2 = ec_flux_x_w(w[..., :-2], w[..., 2:])
    return (4.0 / 3.0) * f1[..., 1:-1] - (1.0 / 6.0) * (f2[..., :-1] + f2[..., 1:])
