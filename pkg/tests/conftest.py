import functools

import numpy as np
import pytest

from plap_bounds.maps import AnalyticMap
from plap_bounds.oracle import SolverConfig, first_eigenvalue, rasterize_map

CATALOG = {
    "identity": AnalyticMap.identity(),
    "epicycloid n=2": AnalyticMap.epicycloid(2),
    "epicycloid n=3": AnalyticMap.epicycloid(3),
    "epicycloid n=4": AnalyticMap.epicycloid(4),
    "sine d=1": AnalyticMap.sine(1.0),
}

ACCEPTANCE_LINES = []


@functools.lru_cache(maxsize=None)
def oracle_lambda(map_text, p, h):
    """Cached raster eigenvalue of a catalog domain."""
    domain = rasterize_map(CATALOG[map_text], h)
    return first_eigenvalue(domain, SolverConfig(p=p))[0]


def interior_points(phi, n, seed=0, shrink=0.98):
    """``n`` reproducible random points of the open base domain."""
    rng = np.random.default_rng(seed)
    if phi.base.kind == "unit_disc":
        r = shrink * np.sqrt(rng.uniform(0, 1, n))
        return r * np.exp(2j * np.pi * rng.uniform(0, 1, n))
    a, b = phi.base.half_width, phi.base.half_height
    return shrink * (a * rng.uniform(-1, 1, n) + 1j * b * rng.uniform(-1, 1, n))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def catalog():
    return dict(CATALOG)


@pytest.fixture(scope="session")
def j01():
    from scipy.optimize import brentq
    from scipy.special import j0

    return brentq(j0, 2.0, 3.0, xtol=1e-15)

