"""Sign-preserving reconstruction of scaled entropy variables.

Point values live at cell centres ``x_j``; a reconstruction returns values at
the faces ``x_j -+ dx/2``. Minmod is used for second order and ENO
interpolation (adaptive stencil, undivided differences) for orders 3 and 4.
Both have the sign property: across any face the reconstructed jump has the
sign of the jump of the underlying cell values, or vanishes.

All routines are vectorised; the stencil window is always the *last* axis.
"""
from __future__ import annotations

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view


def minmod(a, b):
    return np.where(a * b > 0.0, np.sign(a) * np.minimum(np.abs(a), np.abs(b)), 0.0)


def minmod_jump(vm, v0, vp):
    """Face values ``(left, right)`` of the middle cell and its limited slope."""
    slope = minmod(np.asarray(v0) - vm, np.asarray(vp) - v0)
    return v0 - 0.5 * slope, v0 + 0.5 * slope, slope


_INV_FACT = (1.0, 1.0, 0.5, 1.0 / 6.0)


def _differences(vals, k: int):
    """Undivided difference table ``tab[m][j]`` (``m = 0 .. k-1``) of a window."""
    tab = [list(vals)]
    for m in range(1, k):
        prev = tab[-1]
        tab.append([prev[j + 1] - prev[j] for j in range(len(prev) - 1)])
    return tab


def _pick(items, idx):
    """Elementwise ``items[idx]`` for a list of arrays and an index array."""
    return np.choose(idx, items)


def _eno_newton(tab, centre: int, k: int, x: float):
    """ENO interpolant grown from ``centre``, in Newton form, minus its node value.

    Returns ``(p(x) - tab[0][centre], lo)`` where ``lo`` is the leftmost
    stencil node. Nodes are window indices and ``x`` is a window coordinate.
    A stencil grows towards the smaller undivided difference; ties go left.
    """
    shape = np.shape(tab[0][0])
    lo = np.full(shape, centre, dtype=np.intp)
    last = np.full(shape, float(centre))
    prod = np.ones(shape)
    acc = np.zeros(shape)
    for m in range(1, k):
        level = tab[m]
        lo_c = np.clip(lo, 1, len(level))
        cand_l = _pick(level, lo_c - 1)
        cand_r = _pick(level, np.clip(lo, 0, len(level) - 1))
        go_left = np.abs(cand_l) <= np.abs(cand_r)
        diff = np.where(go_left, cand_l, cand_r)
        prod = prod * (x - last)
        acc = acc + diff * prod * _INV_FACT[m]
        hi = lo + (m - 1)
        last = np.where(go_left, lo - 1, hi + 1).astype(float)
        lo = lo - go_left
    return acc, lo


def _window(values):
    values = np.asarray(values, dtype=float)
    return [values[..., s] for s in range(values.shape[-1])]


def eno_stencil(values: np.ndarray, order: int) -> np.ndarray:
    """Left offset (``-(order-1) .. 0``) of the ENO stencil of each window.

    ``values`` has a window of ``2*order - 1`` points on its last axis centred
    on the target cell. Stencils grow one point at a time towards the side
    with the smaller undivided difference; exact ties go left.
    """
    c = order - 1
    return _eno_newton(_differences(_window(values), order), c, order, float(c))[1] - c


def eno_reconstruct(values: np.ndarray, order: int, face: int) -> np.ndarray:
    """ENO interpolation of the centre cell's value at face ``-1`` or ``+1``.

    ``values`` carries a window of ``2*order - 1`` point values on its last
    axis; the result drops that axis.
    """
    if order not in (3, 4):
        raise ValueError(f"ENO order must be 3 or 4, got {order}")
    if face not in (-1, 1):
        raise ValueError("face must be -1 or +1")
    vals = _window(values)
    c = order - 1
    acc, _ = _eno_newton(_differences(vals, order), c, order, c + 0.5 * face)
    return vals[c] + acc


def _jump(z, k: int):
    if k == 1:
        return z[1] - z[0]
    if k == 2:
        zm, z0, z1, z2 = z
        d = z1 - z0
        # difference form keeps the sign property exact in floating point
        return d - 0.5 * (minmod(z0 - zm, d) + minmod(d, z2 - z1))
    tab = _differences(z, k)
    c = k - 1
    plus, lo_plus = _eno_newton(tab, c, k, c + 0.5)
    minus, lo_minus = _eno_newton(tab, c + 1, k, c + 0.5)
    # difference form: colinear data cancel exactly; a shared stencil means
    # one interpolant on both sides and hence no jump at all
    return np.where(lo_plus == lo_minus, 0.0, tab[1][c] + (minus - plus))


def face_jumps_from_window(z: np.ndarray, order: int) -> np.ndarray:
    """Reconstructed jump across the face at the middle of each window.

    ``z`` has ``2*order`` cell values on its last axis (cells ``c-order+1 ..
    c+order`` around the face between ``c`` and ``c+1``), all expressed in
    the *same* face-local variables. Order 1 returns the raw jump.
    """
    if order not in (1, 2, 3, 4):
        raise ValueError(f"order must be 1..4, got {order}")
    return _jump(_window(z), order)


def scaled_face_jumps(v: np.ndarray, r_tilde: np.ndarray, order: int) -> np.ndarray:
    """Jumps of reconstructed scaled entropy variables at every face of a row.

    ``v`` has shape ``(6, ..., n)`` (entropy variables of ``n`` cells along
    the last axis). ``r_tilde`` has shape ``(6, 6, ..., nf)`` with
    ``nf = n - 2*order + 1``; face ``f`` sits between cells ``f+order-1`` and
    ``f+order``. Every cell in a face's window is transformed with that face's
    ``R~^T`` before reconstruction, so both sides of a face see the same data.
    """
    k = order
    n = v.shape[-1]
    nf = n - 2 * k + 1
    if r_tilde.shape[-1] != nf:
        raise ValueError(f"expected {nf} faces, got {r_tilde.shape[-1]}")
    # z[s][i, ..., f] = sum_j R~[j, i, ..., f] v[j, ..., f+s]
    win = sliding_window_view(v, 2 * k, axis=-1)  # (6, ..., nf, 2k)
    rt = np.moveaxis(r_tilde, (0, 1), (-1, -2))  # (..., nf, i, j), batched 6x6
    z = np.matmul(rt, np.moveaxis(win, 0, -2))  # (..., nf, i, s)
    z = np.ascontiguousarray(np.moveaxis(z, (-1, -2), (0, 1)))  # (s, i, ..., nf)
    return _jump(list(z), k)
