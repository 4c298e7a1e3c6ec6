"""CMC-1 faces in de Sitter 3-space: lift, projection, duality shadow."""

import cmath
import math

import numpy as np
import pytest
from scipy.linalg import expm

from singlab.classification import Tag
from singlab.cmc1 import (E0, E1, E2, E3, HermitianPoint, SL2Frame,
                          TransversalityError, area_density_cmc1,
                          classify_point_cmc1, integrate_lift, lorentz_normal,
                          minkowski_inner, project, psi_tilde,
                          vec_to_hermitian)
from singlab.expr import parse
from singlab.tracing import Rectangle
from singlab.weierstrass import (PreconditionError, WeierstrassData,
                                 classify_point, conjugate)

SQUARE = Rectangle(-2.0, 2.0, -2.0, 2.0)


def enneper() -> WeierstrassData:
    return WeierstrassData(g=parse("z"), omega_hat=parse("1"),
                           base_point=0j, domain=SQUARE)


def _random_sl2(rng) -> np.ndarray:
    a = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    a = a - np.trace(a) / 2.0 * np.eye(2)   # trace-free generator
    return expm(a)


# ---------------------------------------------------------------------------
# Lift integration
# ---------------------------------------------------------------------------

def test_lift_nilpotent_closed_form():
    # (g, omega_hat) = (0, 1): F' = F [[0,0],[1,0]], so F(z) = [[1,0],[z,1]].
    data = WeierstrassData(g=parse("0"), omega_hat=parse("1"),
                           base_point=0j, domain=SQUARE)
    for target in (1 + 0j, 0.5j, -1.2 + 0.7j):
        F = integrate_lift(data, target, 1e-12)
        want = np.array([[1, 0], [target, 1]], dtype=complex)
        assert np.max(np.abs(F.matrix - want)) < 1e-10


def test_lift_constant_data_matches_matrix_exponential():
    data = WeierstrassData(g=parse("2"), omega_hat=parse("1"),
                           base_point=0j, domain=SQUARE)
    A = np.array([[2, -4], [1, -2]], dtype=complex)
    for target in (1 + 0j, -0.3 + 1.1j):
        F = integrate_lift(data, target, 1e-12)
        assert np.max(np.abs(F.matrix - expm(target * A))) < 1e-9


def test_lift_determinant_drift_enneper():
    F = integrate_lift(enneper(), 0.5 + 0j, 1e-10)
    assert F.det_drift < 1e-9
    assert abs(F.det - 1.0) < 1e-9


def test_lift_drift_random_targets():
    data = enneper()
    rng = np.random.default_rng(5)
    for _ in range(20):
        target = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
        F = integrate_lift(data, target, 1e-10)
        assert F.det_drift < 1e-9


def test_lift_renormalize_pins_determinant():
    F = integrate_lift(enneper(), 1.7 - 1.3j, 1e-8, renormalize=True)
    assert F.det_drift < 1e-13


def test_lift_composition_along_split_path():
    data = enneper()
    mid = 0.4 + 0.6j
    F_mid = integrate_lift(data, mid, 1e-11)
    F_full = integrate_lift(data, 1.0 + 1.0j, 1e-11)
    F_second = integrate_lift(data, 1.0 + 1.0j, 1e-11,
                              start=mid, frame=F_mid.matrix)
    assert np.max(np.abs(F_second.matrix - F_full.matrix)) < 1e-8


# ---------------------------------------------------------------------------
# Projection and the Minkowski pairing
# ---------------------------------------------------------------------------

def test_project_identity_and_unipotent():
    f = project(SL2Frame(np.eye(2, dtype=complex), 0.0))
    assert np.allclose(f.vec, [0, 0, 0, 1])
    f = project(SL2Frame(np.array([[1, 0], [1, 1]], dtype=complex), 0.0))
    assert np.allclose(f.vec, [0.5, 1.0, 0.0, 0.5])


def test_project_lands_on_de_sitter_space():
    rng = np.random.default_rng(9)
    for _ in range(10):
        f = project(SL2Frame(_random_sl2(rng), 0.0))
        assert f.hermiticity_defect < 1e-9
        assert abs(np.linalg.det(f.matrix) + 1.0) < 1e-9
        assert minkowski_inner(f, f) == pytest.approx(1.0, abs=1e-9)


def test_minkowski_inner_signature():
    e = [HermitianPoint(m) for m in (E0, E1, E2, E3)]
    assert minkowski_inner(e[0], e[0]) == pytest.approx(-1.0)
    for k in (1, 2, 3):
        assert minkowski_inner(e[k], e[k]) == pytest.approx(1.0)
    for a in range(4):
        for b in range(a + 1, 4):
            assert minkowski_inner(e[a], e[b]) == pytest.approx(0.0)


def test_minkowski_inner_is_minus_determinant():
    rng = np.random.default_rng(2)
    for _ in range(10):
        X = vec_to_hermitian(rng.normal(size=4))
        assert minkowski_inner(X, X) == pytest.approx(
            -np.linalg.det(X.matrix).real, abs=1e-12)


def test_lorentz_normal_is_null_on_singular_set():
    rng = np.random.default_rng(4)
    for _ in range(8):
        F = SL2Frame(_random_sl2(rng), 0.0)
        g = cmath.exp(1j * rng.uniform(0, 2 * math.pi))
        nu = lorentz_normal(F, g)
        assert abs(minkowski_inner(nu, nu)) < 1e-9
        # Off the singular set the normal is non-null.
        nu_off = lorentz_normal(F, 0.5 * g)
        assert abs(minkowski_inner(nu_off, nu_off)) > 0.1


# ---------------------------------------------------------------------------
# Area density and classification
# ---------------------------------------------------------------------------

def test_area_density_cmc1_values():
    data = enneper()
    assert area_density_cmc1(data, 1j) == pytest.approx(0.0, abs=1e-14)
    flat = WeierstrassData(g=parse("0"), omega_hat=parse("1"),
                           base_point=0j, domain=SQUARE)
    assert area_density_cmc1(flat, 0.2 + 0.1j) == pytest.approx(1.0)
    assert area_density_cmc1(data, 0.9 + 0j) > 0
    assert area_density_cmc1(data, 1.1 + 0j) < 0


def test_classification_agrees_with_maxface_on_40_samples():
    data = enneper()
    for k in range(40):
        p = cmath.exp(1j * (2 * math.pi * k / 40.0))
        c = classify_point_cmc1(data, p)
        assert c.tag == classify_point(data, p).tag
        assert c.extra["det_drift"] < 1e-9


def test_cmc1_conjugate_duality_shadow():
    dual = conjugate(enneper())
    assert classify_point_cmc1(dual, 1 + 0j).tag == Tag.CUSPIDAL_CROSS_CAP


def test_gauge_independence_of_tags():
    moved = WeierstrassData(g=parse("z"), omega_hat=parse("1"),
                            base_point=0.3 + 0.2j, domain=SQUARE)
    for k in range(8):
        p = cmath.exp(1j * (math.pi * k / 4.0))
        assert classify_point_cmc1(moved, p).tag \
            == classify_point_cmc1(enneper(), p).tag


# ---------------------------------------------------------------------------
# psi-tilde: closed form versus numeric frame differentiation
# ---------------------------------------------------------------------------

def test_psi_tilde_swallowtail_point():
    closed, numeric = psi_tilde(enneper(), 1 + 0j)
    # alpha(1) = 1, default zeta = i, Im(conj(zeta) g) = -1 => -2.
    assert closed == pytest.approx(-2.0)
    assert numeric == pytest.approx(-2.0, abs=1e-5)


def test_psi_tilde_vanishes_at_ccr_point():
    p = cmath.exp(1j * math.pi / 4)
    closed, numeric = psi_tilde(enneper(), p)
    assert closed == pytest.approx(0.0, abs=1e-12)
    assert abs(numeric) < 1e-5


def test_psi_tilde_closed_vs_numeric_20_points():
    data = enneper()
    for k in range(20):
        p = cmath.exp(1j * (2 * math.pi * k / 20.0 + 0.03))
        closed, numeric = psi_tilde(data, p)
        assert abs(numeric - closed) <= 1e-5 * max(1.0, abs(closed))


def test_psi_tilde_positive_scaling():
    closed1, numeric1 = psi_tilde(enneper(), 1 + 0j, zeta=1j)
    closed2, numeric2 = psi_tilde(enneper(), 1 + 0j, zeta=2.5j)
    assert closed2 == pytest.approx(2.5 * closed1)
    assert numeric2 == pytest.approx(2.5 * numeric1, rel=1e-6)


def test_psi_tilde_zero_set_is_zeta_independent():
    data = enneper()
    for k in range(8):
        p = cmath.exp(1j * (math.pi * k / 4.0 + 0.2))
        c1, _ = psi_tilde(data, p, zeta=1j * p)
        c2, _ = psi_tilde(data, p, zeta=(0.3 + 1.0j) * p)
        assert (abs(c1) < 1e-12) == (abs(c2) < 1e-12)


def test_psi_tilde_rejects_tangent_section():
    with pytest.raises(TransversalityError):
        psi_tilde(enneper(), 1 + 0j, zeta=1.0 + 0j)   # zeta parallel to g


def test_psi_tilde_requires_singular_point():
    with pytest.raises(PreconditionError):
        psi_tilde(enneper(), 0.5 + 0j)
