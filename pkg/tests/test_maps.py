import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from plap_bounds.errors import DomainError
from plap_bounds.maps import (
    AnalyticMap,
    BaseDomain,
    boundary_polyline,
    disc_conformal_radius,
    eval_derivative,
    eval_map,
    image_conformal_radius,
    jacobian,
    parse_map,
    polygon_area,
)

from conftest import CATALOG, interior_points

ALL_MAPS = list(CATALOG.values()) + [
    AnalyticMap.epicycloid(7),
    AnalyticMap.sine(0.5),
    AnalyticMap.polynomial([0, 1, 0, 0.25]),
    AnalyticMap.power_series([0, 1, 0.1 + 0.05j, 0.02], radius=3.0),
]


def test_base_measures():
    assert BaseDomain.disc().measure == math.pi
    assert BaseDomain.rectangle(math.pi / 2, 1.0).measure == 4 * (math.pi / 2) * 1.0


def test_eval_examples():
    assert eval_map(AnalyticMap.identity(), 0.3 + 0.4j) == 0.3 + 0.4j
    assert eval_map(AnalyticMap.epicycloid(2), 0j) == 0
    expected = float(mpmath.sin(mpmath.pi / 4))
    assert eval_map(AnalyticMap.sine(1.0), math.pi / 4) == pytest.approx(expected, rel=1e-15)


def test_derivative_examples():
    assert eval_derivative(AnalyticMap.identity(), 0.1 - 0.7j) == 1
    assert eval_derivative(AnalyticMap.epicycloid(3), 0j) == 1
    assert eval_derivative(AnalyticMap.sine(1.0), 0j) == 1


@pytest.mark.parametrize("r", [0.0, 0.3, 0.9, 0.999])
def test_epicycloid_jacobian_on_real_axis(r):
    assert jacobian(AnalyticMap.epicycloid(2), r) == pytest.approx((1 + r) ** 2, rel=1e-15)


def test_sine_jacobian_closed_form():
    phi = AnalyticMap.sine(1.0)
    z = interior_points(phi, 100, seed=1)
    expected = 0.5 * (np.cos(2 * z.real) + np.cosh(2 * z.imag))
    np.testing.assert_allclose(jacobian(phi, z), expected, rtol=1e-12)
    np.testing.assert_allclose(jacobian(phi, z), np.abs(np.cos(z)) ** 2, rtol=1e-12)


@pytest.mark.parametrize("phi", ALL_MAPS, ids=lambda m: m.spec())
def test_cauchy_riemann_consistency(phi):
    z = interior_points(phi, 100, seed=2, shrink=0.95)
    h = 1e-6
    fd = (phi(z + h) - phi(z - h)) / (2 * h)
    np.testing.assert_allclose(phi.derivative(z), fd, rtol=1e-6)


@pytest.mark.parametrize("phi", [m for m in ALL_MAPS if m.base.kind == "unit_disc"], ids=lambda m: m.spec())
def test_conformal_radius_ratio_is_jacobian(phi):
    w = interior_points(phi, 100, seed=3)
    ratio = image_conformal_radius(phi, w) / disc_conformal_radius(w)
    np.testing.assert_allclose(ratio**2, jacobian(phi, w), rtol=1e-12)


@pytest.mark.parametrize("n", range(2, 11))
def test_epicycloid_jacobian_sup(n):
    r = (np.arange(512) + 0.5) / 512
    theta = 2 * np.pi * np.arange(512) / 512
    z = (r[:, None] * np.exp(1j * theta)[None, :]).ravel()
    assert jacobian(AnalyticMap.epicycloid(n), z).max() <= 4 + 1e-9


def test_disc_conformal_radius():
    assert disc_conformal_radius(0) == 1
    assert disc_conformal_radius(0.6) == pytest.approx(0.64, rel=1e-15)
    assert disc_conformal_radius(1 - 1e-12) == pytest.approx(0, abs=3e-12)
    with pytest.raises(DomainError):
        disc_conformal_radius(1.0)


def test_outside_base_domain():
    with pytest.raises(DomainError):
        eval_map(AnalyticMap.identity(), 1.0)
    with pytest.raises(DomainError):
        eval_derivative(AnalyticMap.sine(1.0), 2.0)
    with pytest.raises(DomainError):
        AnalyticMap.power_series([0, 1], radius=1.0)


def test_construction_errors():
    with pytest.raises(DomainError):
        AnalyticMap.epicycloid(1)
    with pytest.raises(DomainError):
        AnalyticMap("sine", base=BaseDomain.disc(), d=1.0)
    with pytest.raises(DomainError):
        AnalyticMap("epicycloid", base=BaseDomain.rectangle(1, 1), n=3)


def test_vanishing_derivative_is_not_conformal():
    with pytest.raises(DomainError):
        jacobian(AnalyticMap.polynomial([0, 1, 1]), -0.5)


def test_boundary_polyline_identity():
    pts = boundary_polyline(AnalyticMap.identity(), 16)
    np.testing.assert_allclose(np.hypot(*pts.T), 1 - 1e-9, rtol=1e-15)
    assert polygon_area(boundary_polyline(AnalyticMap.identity(), 4096)) == pytest.approx(math.pi, abs=1e-5)


def test_boundary_polyline_epicycloid_tip():
    pts = boundary_polyline(AnalyticMap.epicycloid(2), 64)
    assert pts[0] == pytest.approx([1.5, 0.0], abs=1e-8)


def test_boundary_polyline_is_counterclockwise():
    for phi in CATALOG.values():
        assert polygon_area(boundary_polyline(phi, 1024)) > 0


def test_boundary_polyline_needs_samples():
    with pytest.raises(DomainError):
        boundary_polyline(AnalyticMap.identity(), 4)


def test_sine_boundary_traces_slits():
    pts = boundary_polyline(AnalyticMap.sine(1.0), 4000)
    on_axis = np.abs(pts[:, 1]) < 1e-6
    assert pts[on_axis, 0].max() == pytest.approx(math.cosh(1.0), rel=1e-6)


@pytest.mark.parametrize(
    "text, expected",
    [
        ("identity", AnalyticMap.identity()),
        ("map=epicycloid n=3", AnalyticMap.epicycloid(3)),
        ("sine d=1.0", AnalyticMap.sine(1.0)),
        ("map=poly coeffs=0,1,0,0.25", AnalyticMap.polynomial([0, 1, 0, 0.25])),
        ("poly coeffs=0,1,0.1+0.2i", AnalyticMap.polynomial([0, 1, 0.1 + 0.2j])),
        ("series coeffs=0,1,0.1 radius=2", AnalyticMap.power_series([0, 1, 0.1], 2.0)),
    ],
)
def test_parse_map(text, expected):
    assert parse_map(text) == expected


@pytest.mark.parametrize("text", ["", "circle", "epicycloid", "epicycloid n=x", "sine d=1 n=2", "poly coeffs=1,zz", "epicycloid n"])
def test_parse_map_errors(text):
    with pytest.raises(DomainError):
        parse_map(text)


@given(
    st.lists(
        st.complex_numbers(max_magnitude=2, allow_nan=False, allow_infinity=False),
        min_size=2,
        max_size=5,
    )
)
@settings(max_examples=50)
def test_spec_round_trip(coeffs):
    phi = AnalyticMap.polynomial(coeffs)
    assert parse_map(phi.spec()) == phi
