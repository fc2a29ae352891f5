import numpy as np
import pytest
from hypothesis import given, strategies as st

from ssw.checks import dU_dV_complex_step, random_primitive
from ssw.state import (
    AdmissibilityError, NonPositiveDepth, NonPositiveStress, ModelParams, check_admissible,
    cons_to_prim, entropy, entropy_flux, entropy_potential, entropy_vars, entropy_vars_to_cons,
    prim_to_cons, primitive, swap_xy,
)
from ssw.physics import flux_x, flux_y


def test_prim_to_cons_examples():
    np.testing.assert_allclose(prim_to_cons(primitive(2, 1, 0, 1, 0, 1)), [2, 2, 0, 2, 0, 1])
    np.testing.assert_allclose(prim_to_cons(primitive(1, 0, 0, 1, 0, 1)), [1, 0, 0, 0.5, 0, 0.5])


def test_prim_to_cons_five_wave_state():
    h, v1, v2, p11, p12, p22 = 0.01, 0.1, 0.2, 4e-2, 1e-8, 4e-2
    expect = [h, h * v1, h * v2, 0.5 * h * (v1 * v1 + p11), 0.5 * h * (v1 * v2 + p12),
              0.5 * h * (v2 * v2 + p22)]
    np.testing.assert_allclose(prim_to_cons(primitive(h, v1, v2, p11, p12, p22)), expect, rtol=1e-15)


def test_cons_to_prim_examples():
    np.testing.assert_allclose(cons_to_prim(np.array([2.0, 2, 0, 2, 0, 1])), [2, 1, 0, 1, 0, 1])
    np.testing.assert_allclose(cons_to_prim(np.array([1.0, 0, 0, 0.5, 0, 0.5])), [1, 0, 0, 1, 0, 1])


def test_cons_to_prim_rejects_boundary_of_admissible_set():
    with pytest.raises(NonPositiveStress):
        cons_to_prim(np.array([1.0, 1, 0, 0.5, 0, 0.5]))
    with pytest.raises(NonPositiveDepth):
        cons_to_prim(np.array([0.0, 0, 0, 0.5, 0, 0.5]))
    with pytest.raises(NonPositiveStress):
        check_admissible(primitive(1, 0, 0, 1, 1, 1))  # det P = 0


def test_error_reports_index():
    u = prim_to_cons(primitive([1, 1, -1], 0, 0, 1, 0, 1))
    with pytest.raises(AdmissibilityError) as exc:
        cons_to_prim(u)
    assert exc.value.index == (2,)


def test_round_trip(random_w):
    np.testing.assert_allclose(cons_to_prim(prim_to_cons(random_w)), random_w, rtol=1e-10, atol=1e-13)


def test_entropy_examples():
    eta, s = entropy(prim_to_cons(primitive(1, 0, 0, 1, 0, 1)))
    assert s == 0 and eta == 0
    eta, s = entropy(prim_to_cons(primitive(2, 1, 0, 1, 0, 1)))
    assert s == pytest.approx(np.log(0.25))
    assert eta == pytest.approx(4 * np.log(2))


def test_entropy_five_wave_state():
    h, p = 0.01, 4e-2
    eta, _ = entropy(prim_to_cons(primitive(h, 0.1, 0.2, p, 1e-8, p)))
    assert eta == pytest.approx(-h * np.log((p * p - 1e-16) / h**2), rel=1e-14)


def test_entropy_vars_examples():
    np.testing.assert_allclose(entropy_vars(prim_to_cons(primitive(1, 0, 0, 1, 0, 1))),
                               [4, 0, 0, -2, 0, -2], atol=1e-15)
    np.testing.assert_allclose(entropy_vars(prim_to_cons(primitive(2, 1, 0, 1, 0, 1))),
                               [4 - np.log(0.25) - 1, 2, 0, -2, 0, -2], rtol=1e-14, atol=1e-15)


def test_entropy_vars_are_gradient(rng):
    n = 50
    w = primitive(rng.uniform(0.5, 2, n), rng.uniform(-1, 1, n), rng.uniform(-1, 1, n),
                  rng.uniform(0.5, 2, n), rng.uniform(-0.3, 0.3, n), rng.uniform(0.5, 2, n))
    u = prim_to_cons(w)
    v = entropy_vars(u)
    step = 1e-4
    for j in range(6):
        e = np.zeros_like(u)
        e[j] = step
        eta = [entropy(u + k * e)[0] for k in (-2, -1, 1, 2)]
        fd = (eta[0] - 8 * eta[1] + 8 * eta[2] - eta[3]) / (12 * step)
        assert np.all(np.abs(fd - v[j]) <= 1e-6 * np.abs(v).max(axis=0))


def test_entropy_vars_inverse(random_w):
    u = prim_to_cons(random_w)
    np.testing.assert_allclose(entropy_vars_to_cons(entropy_vars(u)), u, rtol=1e-9, atol=1e-14)


def test_dU_dV_is_symmetric_positive_definite(rng):
    jac = dU_dV_complex_step(entropy_vars(prim_to_cons(random_primitive(rng, 20))))
    m = np.moveaxis(jac, -1, 0)
    np.testing.assert_allclose(m, np.swapaxes(m, 1, 2), rtol=1e-9, atol=1e-12 * np.abs(m).max())
    # relative tolerance: dU/dV spans many decades for the sampled states
    lam = np.linalg.eigvalsh(0.5 * (m + np.swapaxes(m, 1, 2)))
    assert np.all(lam[:, -1] > 0)


def test_entropy_potential_examples():
    np.testing.assert_allclose(entropy_potential(prim_to_cons(primitive(1, 0, 0, 1, 0, 1))), (0, 0))
    np.testing.assert_allclose(entropy_potential(prim_to_cons(primitive(2, 1, 0.5, 1, 0, 1))), (4, 2))


def test_entropy_potential_matches_definition(random_w):
    u = prim_to_cons(random_w)
    v = entropy_vars(u)
    qx, qy = entropy_flux(u)
    px, py = entropy_potential(u)
    np.testing.assert_allclose(np.sum(v * flux_x(u), axis=0) - qx, px, rtol=1e-9,
                               atol=1e-12 * np.abs(np.sum(v * flux_x(u), axis=0)).max())
    np.testing.assert_allclose(np.sum(v * flux_y(u), axis=0) - qy, py, rtol=1e-9,
                               atol=1e-12 * np.abs(np.sum(v * flux_y(u), axis=0)).max())


def test_swap_is_involution(random_w):
    np.testing.assert_array_equal(swap_xy(swap_xy(random_w)), random_w)


def test_model_params_validation():
    with pytest.raises(ValueError):
        ModelParams(g=0)
    with pytest.raises(ValueError):
        ModelParams(C_f=-1)


@given(h=st.floats(1e-3, 1e3), v1=st.floats(-10, 10), v2=st.floats(-10, 10),
       l1=st.floats(1e-3, 1e3), ratio=st.floats(1e-2, 1e2), ang=st.floats(0, np.pi))
def test_round_trip_property(h, v1, v2, l1, ratio, ang):
    c, s = np.cos(ang), np.sin(ang)
    l2 = l1 * ratio
    w = primitive(h, v1, v2, l1 * c * c + l2 * s * s, (l1 - l2) * c * s, l1 * s * s + l2 * c * c)
    back = cons_to_prim(prim_to_cons(w))
    scale = np.array([h, 1, 1, l1 + l2, l1 + l2, l1 + l2]) + np.abs(w[[0, 1, 2, 1, 1, 2]]) ** 2
    assert np.all(np.abs(back - w) <= 1e-9 * scale)
