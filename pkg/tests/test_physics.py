import numpy as np
import pytest

from ssw.checks import random_primitive
from ssw.physics import (
    alpha_closure, eigenvalues_x, eigenvalues_y, flux_x, flux_x_w, flux_y, full_eigenvalues_x,
    full_right_eigenvectors_x, max_speed_x, noncons_x, noncons_y, right_eigenvectors_x,
    right_eigenvectors_y, source,
)
from ssw.cases import ROLL_WAVE
from ssw.state import ModelParams, entropy_vars, prim_to_cons, primitive, swap_xy


def _flux_of_cons(u):
    """x-flux from conserved states, complex-safe for imaginary-step Jacobians."""
    h = u[0]
    v1, v2 = u[1] / h, u[2] / h
    w = np.array([h, v1, v2, 2 * u[3] / h - v1 * v1, 2 * u[4] / h - v1 * v2, 2 * u[5] / h - v2 * v2])
    return flux_x_w(w)


def _jacobian(u, step=1e-30):
    jac = np.empty((6, 6) + u.shape[1:])
    for j in range(6):
        e = np.zeros(u.shape, dtype=complex)
        e[j] = 1j * step
        jac[:, j] = _flux_of_cons(u + e).imag / step
    return jac


def test_flux_x_examples():
    np.testing.assert_allclose(flux_x(prim_to_cons(primitive(1, 0, 0, 1, 0, 1))), [0, 1, 0, 0, 0, 0])
    # E12 flux is h(v1^2 v2 + 2 v1 P12 + v2 P11)/2 = 0 for v2 = P12 = 0
    np.testing.assert_allclose(flux_x(prim_to_cons(primitive(2, 1, 0, 1, 0, 1))), [2, 4, 0, 4, 0, 1])


def test_flux_y_is_swapped_flux_x(random_w):
    u = prim_to_cons(random_w)
    np.testing.assert_allclose(flux_y(swap_xy(u)), swap_xy(flux_x(u)), rtol=1e-14)


def test_flux_matches_energy_form(random_w):
    # advective part v1 U plus pressure work
    u = prim_to_cons(random_w)
    f = flux_x(u)
    h, v1, v2, p11, p12, p22 = random_w
    np.testing.assert_allclose(f[0], h * v1)
    np.testing.assert_allclose(f[1], v1 * u[1] + h * p11)
    np.testing.assert_allclose(f[5], v1 * u[5] + h * v2 * p12, rtol=1e-12)


def test_noncons_examples():
    g = 9.81
    np.testing.assert_allclose(noncons_x(prim_to_cons(primitive(1, 0, 0, 1, 0, 1)), g), [0, g, 0, 0, 0, 0])
    np.testing.assert_allclose(noncons_x(prim_to_cons(primitive(2, 1, 2, 1, 0, 1)), g),
                               [0, 19.62, 0, 19.62, 19.62, 0])


def test_noncons_orthogonal_to_entropy_vars(random_w):
    u = prim_to_cons(random_w)
    v = entropy_vars(u)
    for b in (noncons_x(u, 9.81), noncons_y(u, 9.81)):
        res = np.abs(np.sum(v * b, axis=0)) / (np.linalg.norm(v, axis=0) * np.linalg.norm(b, axis=0))
        assert res.max() < 1e-12


def test_alpha_closure():
    p = ModelParams(C_r=0.5, phi=2.0)
    h = np.array([1.0, 1.0, 1.0])
    tr = np.array([2.0, 1.0, 4.0])  # equal to, below and above phi h^2
    w = primitive(h, 0, 0, tr / 2, 0, tr / 2)
    np.testing.assert_allclose(alpha_closure(w, p), [0, 0, 0.5 * 2 / 16])


def test_alpha_vanishes_on_roll_wave_initial_data():
    c = ROLL_WAVE["case1"]
    p = ModelParams(C_r=c["C_r"], phi=c["phi"])
    h = c["h0"]
    w = primitive(h, 1, 0, 0.5 * c["phi"] * h * h, 0, 0.5 * c["phi"] * h * h)
    assert alpha_closure(w, p) == 0


def test_source_examples():
    p = ModelParams(C_f=0.3)
    u = prim_to_cons(primitive(2, 0, 0, 1, 0, 1))
    np.testing.assert_allclose(source(u, (0.1, -0.2), p), [0, -9.81 * 2 * 0.1, 9.81 * 2 * 0.2, 0, 0, 0])
    u = prim_to_cons(primitive(2, 0.6, 0.8, 1, 0, 1))
    s = source(u, (0.0, 0.0), p)
    assert s[1] == pytest.approx(-0.3 * 1.0 * 0.6)


def test_source_balances_roll_wave_base_flow():
    c = ROLL_WAVE["case1"]
    p = ModelParams(C_f=c["C_f"], C_r=c["C_r"], phi=c["phi"], theta=c["theta"])
    h = c["h0"]
    v1 = np.sqrt(p.g * h * np.tan(c["theta"]) / c["C_f"])
    pp = 0.5 * c["phi"] * h * h
    s = source(prim_to_cons(primitive(h, v1, 0, pp, 0, pp)), (-np.tan(c["theta"]), 0.0), p)
    assert abs(s[1]) < 1e-14
    assert abs(s[3]) < 1e-14


def test_full_eigenvalues_shear_state():
    lam = full_eigenvalues_x(primitive(0.01, 0, 0, 1e-4, 0, 1e-4), 9.81)
    np.testing.assert_allclose(lam, [-np.sqrt(0.0984), -0.01, 0, 0, 0.01, np.sqrt(0.0984)], atol=1e-15)
    assert lam[-1] == pytest.approx(0.313688, abs=1e-6)
    assert max_speed_x(primitive(0.01, 0, 0, 1e-4, 0, 1e-4), 9.81) == pytest.approx(lam[-1])


def test_eigenvalues_symmetric_about_v1(random_w):
    lam = eigenvalues_x(random_w)
    np.testing.assert_allclose(lam + lam[::-1], np.broadcast_to(2 * random_w[1], lam.shape), atol=1e-12)
    np.testing.assert_allclose(eigenvalues_y(random_w), eigenvalues_x(swap_xy(random_w)))


def test_eigenvalues_match_flux_jacobian(random_w):
    jac = np.moveaxis(_jacobian(prim_to_cons(random_w)), -1, 0)
    lam = np.sort(np.linalg.eigvals(jac).real, axis=1)
    ref = eigenvalues_x(random_w).T
    scale = np.abs(ref).max(axis=1, keepdims=True)
    assert np.all(np.abs(lam - ref) <= 1e-6 * scale)


def test_right_eigenvectors_of_flux_jacobian(random_w):
    u = prim_to_cons(random_w)
    a = np.moveaxis(_jacobian(u), -1, 0)
    r = np.moveaxis(right_eigenvectors_x(random_w), -1, 0)
    lam = eigenvalues_x(random_w).T
    lhs = a @ r
    rhs = r * lam[:, None, :]
    rel = np.linalg.norm(lhs - rhs, axis=1) / (np.linalg.norm(a, axis=(1, 2))[:, None] * np.linalg.norm(r, axis=1))
    assert rel.max() < 1e-8
    assert np.all(np.abs(np.linalg.det(r)) > 0)


def test_right_eigenvectors_y_swap(random_w):
    np.testing.assert_allclose(right_eigenvectors_y(random_w),
                               right_eigenvectors_x(swap_xy(random_w))[[0, 2, 1, 5, 4, 3]])


def test_full_right_eigenvectors_of_full_system(random_w):
    g = 9.81
    u = prim_to_cons(random_w)
    a = _jacobian(u)
    a[:, 0] += noncons_x(u, g)  # B^x dh/dx with dh = e_1 . dU
    a = np.moveaxis(a, -1, 0)
    r = np.moveaxis(full_right_eigenvectors_x(random_w, g), -1, 0)
    lam = full_eigenvalues_x(random_w, g).T
    rel = np.linalg.norm(a @ r - r * lam[:, None, :], axis=1) / (
        np.linalg.norm(a, axis=(1, 2))[:, None] * np.linalg.norm(r, axis=1))
    assert rel.max() < 1e-8


def test_right_eigenvector_column_at_identity_stress():
    from ssw.physics import right_eigenvectors_w_x
    np.testing.assert_allclose(right_eigenvectors_w_x(primitive(1, 0, 0, 1, 0, 1))[:, 2], [-1, 0, 0, 1, 0, 0])


def test_eigenvectors_invertible(rng):
    w = random_primitive(rng, 1000)
    r = np.moveaxis(right_eigenvectors_x(w), -1, 0)
    assert np.all(np.abs(np.linalg.det(r)) > 0)
    assert np.all(np.linalg.cond(r) < 1e14)
