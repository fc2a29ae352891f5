"""State representations and entropy quantities of the shear shallow water model.

All states are flat 6-vectors stored component-first, i.e. arrays of shape
``(6, ...)`` with the fixed ordering

    conserved  U = (h, h v1, h v2, E11, E12, E22)
    primitive  W = (h, v1, v2, P11, P12, P22)

so that every function here works on a single state as well as on whole
fields of states.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# component indices, shared by U, W, V and flux vectors
H, M1, M2, E11, E12, E22 = range(6)
V1, V2, P11, P12, P22 = M1, M2, E11, E12, E22

#: strict floor applied to h and det(P) by the admissibility check
EPS_ADM = 1e-13


class AdmissibilityError(ValueError):
    """A state left the admissible set (h > 0, P positive definite)."""

    def __init__(self, message: str, index=None):
        super().__init__(message)
        self.index = index


class NonPositiveDepth(AdmissibilityError):
    pass


class NonPositiveStress(AdmissibilityError):
    pass


@dataclass(frozen=True)
class ModelParams:
    """Physical constants of the model.

    ``g`` gravity, ``C_f`` Chezy friction coefficient, ``C_r`` and ``phi``
    constants of the turbulent dissipation closure, ``theta`` bottom slope.
    """

    g: float = 9.81
    C_f: float = 0.0
    C_r: float = 0.0
    phi: float = 0.0
    theta: float = 0.0

    def __post_init__(self):
        if not self.g > 0:
            raise ValueError(f"g must be positive, got {self.g}")
        for name in ("C_f", "C_r", "phi"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")


def primitive(h, v1, v2, p11, p12, p22) -> np.ndarray:
    """Pack primitive components into a ``(6, ...)`` array."""
    return np.array(np.broadcast_arrays(*(np.asarray(c, dtype=float) for c in (h, v1, v2, p11, p12, p22))))


def _first_bad(mask: np.ndarray):
    idx = np.argwhere(mask)
    return tuple(int(i) for i in idx[0]) if idx.size else None


def check_admissible(w: np.ndarray, eps: float = EPS_ADM) -> None:
    """Raise unless every primitive state in ``w`` lies in the admissible set."""
    w = np.asarray(w)
    h = w[H]
    bad_h = ~(h > eps)
    if np.any(bad_h):
        i = _first_bad(bad_h)
        raise NonPositiveDepth(f"non-positive depth h={h[i] if i else h!r} at index {i}", i)
    bad_p = ~(w[P11] > 0)
    if np.any(bad_p):
        i = _first_bad(bad_p)
        raise NonPositiveStress(f"stress minor P11 <= 0 at index {i}", i)
    det = w[P11] * w[P22] - w[P12] ** 2
    bad_d = ~(det > eps)
    if np.any(bad_d):
        i = _first_bad(bad_d)
        raise NonPositiveStress(f"stress minor det(P) <= {eps:g} at index {i}", i)


def _as_float(a) -> np.ndarray:
    """Float array; complex input is kept so complex-step derivatives work."""
    a = np.asarray(a)
    return a if np.iscomplexobj(a) else a.astype(float, copy=False)


def prim_to_cons(w: np.ndarray) -> np.ndarray:
    w = _as_float(w)
    h, v1, v2 = w[H], w[V1], w[V2]
    u = np.empty_like(w)
    u[H] = h
    u[M1] = h * v1
    u[M2] = h * v2
    u[E11] = 0.5 * h * (v1 * v1 + w[P11])
    u[E12] = 0.5 * h * (v1 * v2 + w[P12])
    u[E22] = 0.5 * h * (v2 * v2 + w[P22])
    return u


def cons_to_prim(u: np.ndarray, check: bool = True) -> np.ndarray:
    """Invert the equation of state; with ``check`` the result is validated."""
    u = np.asarray(u, dtype=float)
    h = u[H]
    if check and np.any(~(h > EPS_ADM)):
        i = _first_bad(~(h > EPS_ADM))
        raise NonPositiveDepth(f"non-positive depth at index {i}", i)
    w = np.empty_like(u)
    v1 = u[M1] / h
    v2 = u[M2] / h
    w[H] = h
    w[V1] = v1
    w[V2] = v2
    w[P11] = 2.0 * u[E11] / h - v1 * v1
    w[P12] = 2.0 * u[E12] / h - v1 * v2
    w[P22] = 2.0 * u[E22] / h - v2 * v2
    if check:
        check_admissible(w)
    return w


def det_stress(w: np.ndarray) -> np.ndarray:
    return w[P11] * w[P22] - w[P12] ** 2


def specific_entropy_w(w: np.ndarray) -> np.ndarray:
    return np.log(det_stress(w) / w[H] ** 2)


def entropy(u: np.ndarray):
    """Return ``(eta, s)`` with ``s = log(det P / h^2)`` and ``eta = -h s``."""
    w = cons_to_prim(u)
    s = specific_entropy_w(w)
    return -w[H] * s, s


def entropy_flux(u: np.ndarray):
    """Entropy fluxes ``(q_x, q_y) = (-h v1 s, -h v2 s)``."""
    w = cons_to_prim(u)
    s = specific_entropy_w(w)
    return -w[H] * w[V1] * s, -w[H] * w[V2] * s


def entropy_vars_w(w: np.ndarray) -> np.ndarray:
    """Entropy variables ``dEta/dU`` evaluated from primitive states."""
    v1, v2 = w[V1], w[V2]
    p11, p12, p22 = w[P11], w[P12], w[P22]
    det = p11 * p22 - p12 * p12
    s = np.log(det / w[H] ** 2)
    v = np.empty_like(w)
    v[0] = 4.0 - s - (p11 * v2 * v2 + p22 * v1 * v1 - 2.0 * p12 * v1 * v2) / det
    v[1] = 2.0 * (p22 * v1 - p12 * v2) / det
    v[2] = 2.0 * (p11 * v2 - p12 * v1) / det
    v[3] = -2.0 * p22 / det
    v[4] = 4.0 * p12 / det
    v[5] = -2.0 * p11 / det
    return v


def entropy_vars(u: np.ndarray) -> np.ndarray:
    return entropy_vars_w(cons_to_prim(u))


def entropy_vars_to_cons(v: np.ndarray) -> np.ndarray:
    """Inverse of the entropy-variable map, ``V -> U``.

    From the last three components ``beta = -V/2`` is the inverse stress
    matrix ``P^{-1}``; velocity follows from ``(V2, V3) = 2 P^{-1} v`` and
    ``h`` from ``V1`` through ``s``.
    """
    v = _as_float(v)
    a = -0.5 * v[3]  # (P^{-1})_11 = P22/det
    c = -0.5 * v[5]  # (P^{-1})_22 = P11/det
    b = -0.25 * v[4]  # (P^{-1})_12 = -P12/det
    inv_det = a * c - b * b  # det(P^{-1}) = 1/det P
    det = 1.0 / inv_det
    p11 = c * det
    p22 = a * det
    p12 = -b * det
    # v = P (V2, V3) / 2
    v1 = 0.5 * (p11 * v[1] + p12 * v[2])
    v2 = 0.5 * (p12 * v[1] + p22 * v[2])
    quad = (p11 * v2 * v2 + p22 * v1 * v1 - 2.0 * p12 * v1 * v2) / det
    s = 4.0 - v[0] - quad
    h = np.sqrt(det / np.exp(s))
    return prim_to_cons(np.array([h, v1, v2, p11, p12, p22]))


def entropy_potential(u: np.ndarray):
    """Entropy potentials ``(psi_x, psi_y) = (2 h v1, 2 h v2)``."""
    u = np.asarray(u, dtype=float)
    return 2.0 * u[M1], 2.0 * u[M2]


def swap_xy(a: np.ndarray) -> np.ndarray:
    """Exchange the roles of the x and y directions in a 6-vector.

    Works for U, W, V and flux vectors alike (1 <-> 2, 11 <-> 22).
    """
    return np.asarray(a)[[0, 2, 1, 5, 4, 3]]


SWAP = np.array([0, 2, 1, 5, 4, 3])
