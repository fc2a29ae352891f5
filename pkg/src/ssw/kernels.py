"""Compiled per-face kernel for the entropy-stable flux.

Computes exactly what :func:`ssw.dissipation.es_face_fluxes` does, one face
at a time, for rows stored as ``(6, rows, n)``. The vectorised numpy version
stays the readable reference; this one is what the time loop calls.
"""
from __future__ import annotations

import math
import os

import numba as nb
import numpy as np

# the bundled TBB is too old for numba; pick a layer that needs nothing extra
nb.config.THREADING_LAYER = os.environ.get("NUMBA_THREADING_LAYER", "workqueue")

_SQRT3 = math.sqrt(3.0)
# no reassociation, so sums keep the order of the numpy reference
_FM = False


def set_threads(n: int | None = None) -> int:
    """Cap worker threads (``SSW_THREADS`` when ``n`` is None)."""
    if n is None:
        env = os.environ.get("SSW_THREADS")
        if not env:
            return nb.get_num_threads()
        n = int(env)
    n = max(1, min(int(n), nb.config.NUMBA_NUM_THREADS))
    nb.set_num_threads(n)
    return n


@nb.njit(cache=True, error_model="numpy")
def state_fields(u, eps, gx, nx, with_y):
    """Primitive and entropy variables of a ghosted field ``u`` (6, NY, NX).

    With ``with_y`` also returns both fields for the interior columns
    ``gx .. gx+nx-1`` transposed to ``(6, nx, NY)`` with the x and y
    components exchanged, ready for the y-direction sweep. The last return
    value is the flat index of the first inadmissible cell, or -1.
    """
    ny_t, nx_t = u.shape[1], u.shape[2]
    w = np.empty_like(u)
    v = np.empty_like(u)
    if with_y:
        wy = np.empty((6, nx, ny_t))
        vy = np.empty((6, nx, ny_t))
    else:
        wy = np.empty((6, 0, 0))
        vy = np.empty((6, 0, 0))
    bad = -1
    for j in range(ny_t):
        for i in range(nx_t):
            h = u[0, j, i]
            if not h > eps:
                if bad < 0:
                    bad = j * nx_t + i
                h = eps
            v1 = u[1, j, i] / h
            v2 = u[2, j, i] / h
            p11 = 2.0 * u[3, j, i] / h - v1 * v1
            p12 = 2.0 * u[4, j, i] / h - v1 * v2
            p22 = 2.0 * u[5, j, i] / h - v2 * v2
            det = p11 * p22 - p12 * p12
            if not (p11 > 0.0 and det > eps):
                if bad < 0:
                    bad = j * nx_t + i
                det = eps
            s = math.log(det / h ** 2)
            w[0, j, i] = h
            w[1, j, i] = v1
            w[2, j, i] = v2
            w[3, j, i] = p11
            w[4, j, i] = p12
            w[5, j, i] = p22
            v[0, j, i] = 4.0 - s - (p11 * v2 * v2 + p22 * v1 * v1 - 2.0 * p12 * v1 * v2) / det
            v[1, j, i] = 2.0 * (p22 * v1 - p12 * v2) / det
            v[2, j, i] = 2.0 * (p11 * v2 - p12 * v1) / det
            v[3, j, i] = -2.0 * p22 / det
            v[4, j, i] = 4.0 * p12 / det
            v[5, j, i] = -2.0 * p11 / det
            if with_y and gx <= i < gx + nx:
                c = i - gx
                wy[0, c, j] = h
                wy[1, c, j] = v2
                wy[2, c, j] = v1
                wy[3, c, j] = p22
                wy[4, c, j] = p12
                wy[5, c, j] = p11
                vy[0, c, j] = v[0, j, i]
                vy[1, c, j] = v[2, j, i]
                vy[2, c, j] = v[1, j, i]
                vy[3, c, j] = v[5, j, i]
                vy[4, c, j] = v[4, j, i]
                vy[5, c, j] = v[3, j, i]
    return w, v, wy, vy, bad


@nb.njit(cache=True, error_model="numpy")
def _cell_terms(w, r, cell):
    """Per-cell quantities of one row reused by every pair flux."""
    n = w.shape[2]
    cell[0, :] = w[0, r, :]
    cell[1, :] = w[1, r, :]
    cell[2, :] = w[2, r, :]
    for i in range(n):
        det = w[3, r, i] * w[5, r, i] - w[4, r, i] * w[4, r, i]
        cell[3, i] = w[3, r, i] / det  # beta = P / det P
        cell[4, i] = w[4, r, i] / det
        cell[5, i] = w[5, r, i] / det
        cell[6, i] = 1.0 / det
        cell[7, i] = math.log(w[0, r, i])
        cell[8, i] = math.log(cell[6, i])


@nb.njit(cache=True, error_model="numpy", inline="always")
def _log_mean_pre(a, b, la, lb):
    f = (a - b) / (a + b)
    u = f * f
    if u < 2.5e-5:
        return (a + b) / (2.0 * (1.0 + u * (1.0 / 3.0 + u * (1.0 / 5.0 + u / 7.0))))
    return (a - b) / (la - lb)


@nb.njit(cache=True, error_model="numpy", fastmath=_FM)
def _ec_pair(cell, il, ir, out, col):
    """Two-point EC flux between cells ``il, ir`` into ``out[:, col]``."""
    hl = cell[0, il]
    hr = cell[0, ir]
    v1l = cell[1, il]
    v1r = cell[1, ir]
    v2l = cell[2, il]
    v2r = cell[2, ir]
    h = 0.5 * (hl + hr)
    v1 = 0.5 * (v1l + v1r)
    v2 = 0.5 * (v2l + v2r)
    b11 = 0.5 * (cell[3, il] + cell[3, ir])
    b12 = 0.5 * (cell[4, il] + cell[4, ir])
    b22 = 0.5 * (cell[5, il] + cell[5, ir])
    v1sq = 0.5 * (v1l * v1l + v1r * v1r)
    v2sq = 0.5 * (v2l * v2l + v2r * v2r)
    v1v2 = 0.5 * (v1l * v2l + v1r * v2r)
    h_ln = _log_mean_pre(hl, hr, cell[7, il], cell[7, ir])
    db_ln = _log_mean_pre(cell[6, il], cell[6, ir], cell[8, il], cell[8, ir])
    det_bar = b11 * b22 - b12 * b12
    f0 = h_ln * v1
    f1 = v1 * f0 + b11 * h / det_bar
    f2 = v2 * f0 + b12 * h / det_bar
    out[0, col] = f0
    out[1, col] = f1
    out[2, col] = f2
    out[3, col] = 0.5 * (b11 / db_ln - v1sq) * f0 + v1 * f1
    out[4, col] = 0.5 * ((b12 / db_ln - v1v2) * f0 + v1 * f2 + v2 * f1)
    out[5, col] = 0.5 * (b22 / db_ln - v2sq) * f0 + v2 * f2


@nb.njit(cache=True, error_model="numpy", fastmath=_FM)
def _scaled_eigenvectors(wm, rt):
    """Fill ``rt`` with ``R~ = R T`` at primitive state ``wm``."""
    h, v1, v2, p11, p12, p22 = wm[0], wm[1], wm[2], wm[3], wm[4], wm[5]
    a = math.sqrt(3.0 * p11)
    c = math.sqrt(p11)
    det = p11 * p22 - p12 * p12
    y0 = 1.0 / (12.0 * h * p11 * p11)
    y1 = det / (4.0 * h * p11 * p11)
    b00 = 1.0 / (3.0 * h)
    b01 = p12 * p12 / (3.0 * h * p11)
    b11 = (3.0 * det * det + p12 ** 4) / (3.0 * h * p11 * p11)
    r1 = det / (_SQRT3 * h * p11)
    alpha = math.sqrt(b00 + b11 + 2.0 * r1)
    t0 = math.sqrt(y0)
    t1 = math.sqrt(y1)
    tb00 = (b00 + r1) / alpha
    tb01 = b01 / alpha
    tb11 = (b11 + r1) / alpha
    # conservative right eigenvectors, acoustic pair built from a shared part
    hp = h * p11
    e3 = 1.5 * hp * p11 + 0.5 * hp * v1 * v1
    e4 = 1.5 * hp * p12 + 0.5 * hp * v1 * v2
    e5 = 0.5 * hp * p22 + 0.5 * hp * v2 * v2 + h * p12 * p12
    o1 = a * hp
    o2 = a * h * p12
    o3 = a * hp * v1
    o4 = 0.5 * a * (hp * v2 + h * p12 * v1)
    o5 = a * h * p12 * v2
    rt[0, 0] = hp * t0
    rt[1, 0] = (hp * v1 - o1) * t0
    rt[2, 0] = (hp * v2 - o2) * t0
    rt[3, 0] = (e3 - o3) * t0
    rt[4, 0] = (e4 - o4) * t0
    rt[5, 0] = (e5 - o5) * t0
    rt[0, 5] = hp * t0
    rt[1, 5] = (hp * v1 + o1) * t0
    rt[2, 5] = (hp * v2 + o2) * t0
    rt[3, 5] = (e3 + o3) * t0
    rt[4, 5] = (e4 + o4) * t0
    rt[5, 5] = (e5 + o5) * t0
    ch = c * h
    rt[0, 1] = 0.0
    rt[1, 1] = 0.0
    rt[2, 1] = -ch * t1
    rt[3, 1] = 0.0
    rt[4, 1] = (0.5 * hp - 0.5 * ch * v1) * t1
    rt[5, 1] = (h * p12 - ch * v2) * t1
    rt[0, 4] = 0.0
    rt[1, 4] = 0.0
    rt[2, 4] = ch * t1
    rt[3, 4] = 0.0
    rt[4, 4] = (0.5 * hp + 0.5 * ch * v1) * t1
    rt[5, 4] = (h * p12 + ch * v2) * t1
    # 2x2 block mixes columns 2 and 3; column 3 of R is (0, 0, 0, 0, 0, h/2)
    r2_0 = -h
    r2_1 = -h * v1
    r2_2 = -h * v2
    r2_3 = -0.5 * h * v1 * v1
    r2_4 = -0.5 * h * v1 * v2
    r2_5 = -0.5 * h * (p22 + v2 * v2)
    r3_5 = 0.5 * h
    rt[0, 2] = r2_0 * tb00
    rt[1, 2] = r2_1 * tb00
    rt[2, 2] = r2_2 * tb00
    rt[3, 2] = r2_3 * tb00
    rt[4, 2] = r2_4 * tb00
    rt[5, 2] = r2_5 * tb00 + r3_5 * tb01
    rt[0, 3] = r2_0 * tb01
    rt[1, 3] = r2_1 * tb01
    rt[2, 3] = r2_2 * tb01
    rt[3, 3] = r2_3 * tb01
    rt[4, 3] = r2_4 * tb01
    rt[5, 3] = r2_5 * tb01 + r3_5 * tb11


@nb.njit(cache=True, error_model="numpy", inline="always")
def _minmod(a, b):
    if a * b > 0.0:
        if a > 0.0:
            return min(a, b)
        return max(a, b)
    return 0.0


_INV_FACT = (1.0, 1.0, 0.5, 1.0 / 6.0)


@nb.njit(cache=True, error_model="numpy", inline="always", fastmath=_FM)
def _eno_side(tab, i, centre, k, x):
    """Newton-form ENO interpolant from ``centre`` at ``x``, minus the node value.

    Returns the increment and the leftmost stencil node.
    """
    lo = centre
    last = float(centre)
    prod = 1.0
    acc = 0.0
    for m in range(1, k):
        cl = tab[m, lo - 1, i]
        cr = tab[m, lo, i]
        prod = prod * (x - last)
        left = abs(cl) <= abs(cr)
        d = cl if left else cr
        acc = acc + d * prod * _INV_FACT[m]
        last = float(lo - 1) if left else float(lo + m)
        lo = lo - 1 if left else lo
    return acc, lo


@nb.njit(cache=True, error_model="numpy", inline="always", fastmath=_FM)
def _eno_jumps(z, k, tab, jump):
    """ENO jumps of all components across the middle face of window ``z``.

    One undivided-difference table over all ``2k`` cells serves both sides.
    """
    n = 2 * k
    for j in range(n):
        for i in range(6):
            tab[0, j, i] = z[j, i]
    for m in range(1, k):
        for j in range(n - m):
            for i in range(6):
                tab[m, j, i] = tab[m - 1, j + 1, i] - tab[m - 1, j, i]
    c = k - 1
    for i in range(6):
        plus, lo_plus = _eno_side(tab, i, c, k, c + 0.5)
        minus, lo_minus = _eno_side(tab, i, c + 1, k, c + 0.5)
        if lo_plus == lo_minus:
            jump[i] = 0.0
        else:
            jump[i] = tab[1, c, i] + (minus - plus)


@nb.njit(cache=True, error_model="numpy", parallel=True, fastmath=_FM)
def es_row_fluxes(w, v, order, lam_g, full_speed):
    """Entropy-stable fluxes at all faces of every row of ``w`` (6, rows, n).

    Face ``f`` lies between cells ``f+k-1`` and ``f+k``; ``k = order``.
    """
    k = order
    rows = w.shape[1]
    n = w.shape[2]
    nf = n - 2 * k + 1
    out = np.empty((6, rows, nf))
    for r in nb.prange(rows):
        cell = np.empty((9, n))
        f1 = np.empty((6, n - 1))
        f2 = np.empty((6, max(n - 2, 1)))
        wm = np.empty(6)
        rt = np.empty((6, 6))
        z = np.empty((2 * k, 6))
        jump = np.empty(6)
        tab = np.empty((4, 8, 6))
        _cell_terms(w, r, cell)
        for j in range(n - 1):
            _ec_pair(cell, j, j + 1, f1, j)
        if order >= 3:
            for j in range(n - 2):
                _ec_pair(cell, j, j + 2, f2, j)
        for f in range(nf):
            il = f + k - 1
            ir = il + 1
            for q in range(6):
                wm[q] = 0.5 * (w[q, r, il] + w[q, r, ir])
            _scaled_eigenvectors(wm, rt)
            if full_speed:
                lam = abs(wm[1]) + math.sqrt(lam_g * wm[0] + 3.0 * wm[3])
            else:
                lam = abs(wm[1]) + math.sqrt(3.0 * wm[3])
            # scaled variables of the window, all with this face's R~
            for s in range(2 * k):
                cell_s = f + s
                v0 = v[0, r, cell_s]
                v1 = v[1, r, cell_s]
                v2 = v[2, r, cell_s]
                v3 = v[3, r, cell_s]
                v4 = v[4, r, cell_s]
                v5 = v[5, r, cell_s]
                for i in range(6):
                    z[s, i] = (rt[0, i] * v0 + rt[1, i] * v1 + rt[2, i] * v2
                               + rt[3, i] * v3 + rt[4, i] * v4 + rt[5, i] * v5)
            if k >= 3:
                _eno_jumps(z, k, tab, jump)
            for i in range(6):
                if k == 1:
                    jump[i] = z[1, i] - z[0, i]
                elif k == 2:
                    d = z[2, i] - z[1, i]
                    jump[i] = d - 0.5 * (_minmod(z[1, i] - z[0, i], d) + _minmod(d, z[3, i] - z[2, i]))
            for q in range(6):
                acc = 0.0
                for i in range(6):
                    acc += rt[q, i] * jump[i]
                if order <= 2:
                    ec = f1[q, il]
                else:
                    ec = (4.0 / 3.0) * f1[q, il] - (1.0 / 6.0) * (f2[q, il - 1] + f2[q, il])
                out[q, r, f] = ec - 0.5 * lam * acc
    return out
