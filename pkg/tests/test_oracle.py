import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from plap_bounds.errors import DegenerateInputError, DomainError, ResolutionError, StagnationError
from plap_bounds.maps import AnalyticMap, boundary_polyline, polygon_area
from plap_bounds.oracle import (
    SolverConfig,
    disc_polyline,
    equal_area_disc,
    faber_krahn_gap,
    first_eigenvalue,
    inverse_iteration,
    minimize_quotient,
    quotient_gradient,
    rasterize,
    rasterize_map,
    rayleigh_quotient,
)

from conftest import oracle_lambda


def square(side=1.0, corner=(0.0, 0.0)):
    x, y = corner
    return np.array([[x, y], [x + side, y], [x + side, y + side], [x, y + side]])


def node_coords(domain):
    i, j = np.indices(domain.mask.shape)
    return domain.origin[0] + i * domain.h, domain.origin[1] + j * domain.h


def test_rasterize_circle_area():
    poly = disc_polyline(1.0, 4096)
    dom = rasterize(poly, 1 / 64)
    assert abs(dom.area - polygon_area(poly)) < 3 / 64
    assert abs(polygon_area(poly) - math.pi) < 1e-5


def test_rasterize_square_counts_strict_interior():
    assert rasterize(square(), 0.1).n_interior == 81


def test_rasterize_epicycloid_area():
    dom = rasterize_map(AnalyticMap.epicycloid(2), 1 / 64)
    assert abs(dom.area - 1.5 * math.pi) < 5 / 64


def test_raster_nodes_lie_inside():
    dom = rasterize(disc_polyline(1.0), 0.05)
    x, y = node_coords(dom)
    assert np.all(np.hypot(x[dom.mask], y[dom.mask]) < 1)
    assert not dom.mask[0].any() and not dom.mask[-1].any()
    assert not dom.mask[:, 0].any() and not dom.mask[:, -1].any()


def test_area_converges():
    poly = disc_polyline(1.0)
    errors = [abs(rasterize(poly, h).area - math.pi) for h in (1 / 8, 1 / 16, 1 / 32, 1 / 64)]
    for h, e in zip((1 / 8, 1 / 16, 1 / 32, 1 / 64), errors):
        assert e < 8 * h
    assert errors[-1] < errors[0]


def test_sine_slits_excluded():
    dom = rasterize_map(AnalyticMap.sine(1.0), 0.02)
    x, y = node_coords(dom)
    xs, ys = x[dom.mask], y[dom.mask]
    on_slit = (np.abs(ys) < 0.01) & (np.abs(xs) > 1.0)
    assert not on_slit.any()


def test_small_components_dropped_with_warning():
    # a single polyline that visits both squares through a zero-width corridor
    poly = np.array([[0, 0], [1, 0], [1, 0.5], [2, 0.5], [2, 0], [2.3, 0], [2.3, 0.3], [2, 0.3], [2, 0.5], [1, 0.5], [1, 1], [0, 1]], float)
    with pytest.warns(UserWarning, match="component"):
        dom = rasterize(poly, 0.05)
    x, _ = node_coords(dom)
    assert x[dom.mask].max() < 1


def test_rasterize_errors():
    with pytest.raises(ResolutionError, match="smaller h"):
        rasterize(square(0.05), 0.1)
    with pytest.raises(DomainError):
        rasterize(square(), 0.0)
    with pytest.raises(DomainError):
        rasterize(np.zeros((2, 2)), 0.1)


def test_quotient_sine_mode_on_pi_square():
    dom = rasterize(square(math.pi), math.pi / 64)
    x, y = node_coords(dom)
    f = np.sin(x) * np.sin(y)
    assert rayleigh_quotient(dom, f, 2.0) == pytest.approx(2.0, rel=0.02)


@given(st.floats(2.0, 6.0), st.integers(0, 2**16))
@settings(max_examples=20, deadline=None)
def test_quotient_homogeneous_and_positive(p, seed):
    dom = rasterize(disc_polyline(1.0, 256), 0.1)
    f = np.random.default_rng(seed).normal(size=dom.n_interior)
    r = rayleigh_quotient(dom, f, p)
    assert r > 0
    assert rayleigh_quotient(dom, 7 * f, p) == pytest.approx(r, rel=1e-12)


def test_quotient_accepts_both_layouts():
    dom = rasterize(square(), 0.1)
    f = np.random.default_rng(0).uniform(size=dom.n_interior)
    assert rayleigh_quotient(dom, f, 3.0) == rayleigh_quotient(dom, dom.scatter(f), 3.0)
    with pytest.raises(DomainError):
        rayleigh_quotient(dom, np.ones(5), 3.0)


def test_quotient_errors():
    dom = rasterize(square(), 0.1)
    with pytest.raises(DegenerateInputError):
        rayleigh_quotient(dom, np.zeros(dom.n_interior), 3.0)
    with pytest.raises(DomainError):
        rayleigh_quotient(dom, np.ones(dom.n_interior), 1.5)


@pytest.mark.parametrize("p", [2.0, 3.0, 4.5])
def test_gradient_matches_finite_differences(p):
    dom = rasterize(disc_polyline(1.0, 256), 0.2)
    rng = np.random.default_rng(3)
    f = rng.uniform(0.5, 1.5, dom.n_interior)
    _, g = quotient_gradient(dom, f, p)
    eps = 1e-6
    fd = np.empty_like(f)
    for k in range(f.size):
        e = np.zeros_like(f)
        e[k] = eps
        fd[k] = (rayleigh_quotient(dom, f + e, p) - rayleigh_quotient(dom, f - e, p)) / (2 * eps)
    np.testing.assert_allclose(g, fd, rtol=1e-5, atol=1e-7 * np.abs(fd).max())


def test_p2_quotient_is_five_point_laplacian():
    dom = rasterize(disc_polyline(1.0, 512), 0.1)
    f = np.random.default_rng(4).normal(size=dom.n_interior)
    expected = f @ (dom.laplacian @ f) / (f @ f)
    assert rayleigh_quotient(dom, f, 2.0) == pytest.approx(expected, rel=1e-12)


def test_square_p2_calibration():
    lam, _, _ = first_eigenvalue(rasterize(square(), 1 / 64), SolverConfig(p=2.0))
    assert lam == pytest.approx(2 * math.pi**2, rel=0.01)


def test_disc_p2_calibration(j01):
    assert j01 == pytest.approx(2.404825557695773, rel=1e-14)
    assert oracle_lambda("identity", 2.0, 1 / 64) == pytest.approx(j01**2, rel=0.02)


def test_disc_p3_two_mesh():
    coarse = oracle_lambda("identity", 3.0, 1 / 64)
    fine = oracle_lambda("identity", 3.0, 1 / 128)
    assert coarse == pytest.approx(fine, rel=0.03)


def test_p2_descent_fixed_point():
    dom = rasterize(disc_polyline(1.0), 1 / 32)
    lam, x, _, _ = inverse_iteration(dom, tol=1e-12)
    res = minimize_quotient(dom, x, SolverConfig(p=2.0, max_iterations=5))
    assert abs(res.lam - rayleigh_quotient(dom, x, 2.0)) <= 1e-8 * lam


def test_descent_decreases_quotient():
    dom = rasterize(disc_polyline(1.0), 1 / 32)
    cfg = SolverConfig(p=3.0)
    _, x, _, _ = inverse_iteration(dom)
    start = rayleigh_quotient(dom, x, 3.0)
    res = minimize_quotient(dom, x, cfg)
    assert res.lam <= start
    assert res.residual < cfg.tolerance
    assert rayleigh_quotient(dom, res.f, 3.0) == pytest.approx(res.lam, rel=1e-12)


@pytest.mark.parametrize("p", [2.0, 3.0])
def test_domain_monotonicity(p):
    h = 1 / 32
    outer = rasterize(square(), h)
    inner = rasterize(disc_polyline(0.45, center=(0.5, 0.5)), h)
    xi, yi = node_coords(inner)
    xo, yo = node_coords(outer)
    inner_pts = set(zip(np.round(xi[inner.mask] / h).astype(int), np.round(yi[inner.mask] / h).astype(int)))
    outer_pts = set(zip(np.round(xo[outer.mask] / h).astype(int), np.round(yo[outer.mask] / h).astype(int)))
    assert inner_pts <= outer_pts
    cfg = SolverConfig(p=p)
    lam_in = first_eigenvalue(inner, cfg)[0]
    lam_out = first_eigenvalue(outer, cfg)[0]
    assert lam_in >= lam_out * (1 - cfg.tolerance)


@pytest.mark.parametrize("p", [2.0, 3.0])
def test_scaling_law(p):
    h = 1 / 32
    cfg = SolverConfig(p=p)
    small = first_eigenvalue(rasterize(disc_polyline(1.0), h), cfg)[0]
    big = first_eigenvalue(rasterize(disc_polyline(2.0), h), cfg)[0]
    assert big == pytest.approx(small * 2.0**-p, rel=0.03)


def test_faber_krahn_square(j01):
    dom = rasterize(square(), 1 / 64)
    gap = faber_krahn_gap(dom, SolverConfig(p=2.0))
    assert gap > 0
    assert 2 * math.pi**2 - math.pi * j01**2 == pytest.approx(19.739 - 18.168, abs=2e-3)


def test_faber_krahn_disc_itself():
    dom = rasterize(disc_polyline(1.0), 1 / 32)
    lam = first_eigenvalue(dom, SolverConfig(p=3.0))[0]
    assert abs(faber_krahn_gap(dom, SolverConfig(p=3.0))) <= 1e-6 * lam
    assert equal_area_disc(dom).n_interior == dom.n_interior


def test_stagnation_reports_best_value():
    dom = rasterize(disc_polyline(1.0), 1 / 16)
    _, x, _, _ = inverse_iteration(dom)
    with pytest.raises(StagnationError) as info:
        minimize_quotient(dom, x, SolverConfig(p=3.0, max_halvings=0))
    assert info.value.best_value == pytest.approx(rayleigh_quotient(dom, x, 3.0), rel=1e-12)
    assert info.value.iterations == 1


def test_single_node_domain():
    # one cell sees both differences, two cells see one each
    dom = rasterize(disc_polyline(1.0), 2.0)
    assert dom.n_interior == 1
    lam, _, residual = first_eigenvalue(dom, SolverConfig(p=3.0))
    assert lam == pytest.approx((2**1.5 + 2) / 2.0**3, rel=1e-12)
    assert residual == 0.0


def test_solver_config_validation():
    with pytest.raises(DomainError):
        SolverConfig(p=1.5)
    with pytest.raises(DomainError):
        SolverConfig(p=3.0, tolerance=0.0)


def test_result_is_deterministic():
    dom = rasterize_map(AnalyticMap.epicycloid(3), 1 / 32)
    a = first_eigenvalue(dom, SolverConfig(p=3.0))
    b = first_eigenvalue(dom, SolverConfig(p=3.0))
    assert a == b


def test_boundary_polyline_drives_raster():
    phi = AnalyticMap.epicycloid(3)
    dom = rasterize_map(phi, 1 / 32)
    assert abs(dom.area - polygon_area(boundary_polyline(phi, 4096))) < 5 / 32
