"""Reference first eigenvalues of the Dirichlet p-Laplacian on raster domains.

The domain is the set of lattice nodes ``(i h, j h)`` strictly inside a
polygon.  Functions vanish off the mask.  The discrete quotient uses
forward differences on every cell, which for ``p = 2`` is exactly the
five-point Laplacian's Rayleigh quotient.

The value returned by :func:`first_eigenvalue` approximates the continuum
eigenvalue up to discretisation error; it is not a certified bound.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import cached_property

import numpy as np
import scipy.sparse as sp
from scipy import ndimage
from scipy.sparse.linalg import splu

from .errors import DegenerateInputError, DomainError, ResolutionError, StagnationError
from .maps import AnalyticMap, boundary_polyline, polygon_area

#: Nodes closer than this multiple of ``h`` to the polygon count as boundary.
ON_BOUNDARY = 1e-9

#: Scale-free gradient size below which the descent stops at once.
STATIONARY = 1e-12


@dataclass(frozen=True, eq=False)
class RasterDomain:
    """Interior mask on the lattice ``origin + (i h, j h)``.

    ``mask[i, j]`` refers to the node ``origin + (i h, j h)``; the outer
    ring of the mask is always False.
    """

    h: float
    origin: tuple
    mask: np.ndarray
    source: np.ndarray

    @property
    def n_interior(self) -> int:
        return int(self.mask.sum())

    @property
    def area(self) -> float:
        return self.n_interior * self.h**2

    @cached_property
    def index(self) -> np.ndarray:
        idx = np.full(self.mask.shape, -1, dtype=np.int64)
        idx[self.mask] = np.arange(self.n_interior)
        return idx

    @cached_property
    def laplacian(self) -> sp.csc_matrix:
        """Five-point Dirichlet Laplacian on the interior nodes."""
        idx = self.index
        n = self.n_interior
        rows, cols = [np.arange(n)], [np.arange(n)]
        vals = [np.full(n, 4.0)]
        for a, b in ((idx[:-1, :], idx[1:, :]), (idx[:, :-1], idx[:, 1:])):
            both = (a >= 0) & (b >= 0)
            u, v = a[both], b[both]
            rows += [u, v]
            cols += [v, u]
            vals += [-np.ones(u.size), -np.ones(u.size)]
        m = sp.csc_matrix(
            (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(n, n)
        )
        return m / self.h**2

    @cached_property
    def _lu(self):
        return splu(self.laplacian)

    def scatter(self, values) -> np.ndarray:
        """Interior vector to a full array that is zero off the mask."""
        out = np.zeros(self.mask.shape)
        out[self.mask] = values
        return out


def _segment_distance(px, py, x1, y1, x2, y2):
    """Distances from points ``(px, py)`` (1-D) to segments (1-D), pairwise grid."""
    dx, dy = x2 - x1, y2 - y1
    ll = dx * dx + dy * dy
    t = ((px[:, None] - x1) * dx + (py[:, None] - y1) * dy) / np.where(ll > 0, ll, 1.0)
    t = np.clip(t, 0.0, 1.0)
    ex = px[:, None] - (x1 + t * dx)
    ey = py[:, None] - (y1 + t * dy)
    return np.sqrt(ex * ex + ey * ey).min(axis=1)


def rasterize(polyline, h: float, slits=(), slit_clearance: float | None = None) -> RasterDomain:
    """Mask of lattice nodes strictly inside a closed polygon.

    Classification is even-odd by scanlines.  Nodes within ``1e-9 h`` of
    the polygon, or within ``slit_clearance`` (default ``h/2``) of a slit
    segment ``(a, b)`` given as complex endpoints, are excluded.  Only the
    largest 4-connected component is kept.
    """
    pts = np.asarray(polyline, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2 or len(pts) < 3:
        raise DomainError("polyline must be an (n, 2) array with n >= 3")
    if not h > 0:
        raise DomainError("grid spacing h must be positive")
    clearance = 0.5 * h if slit_clearance is None else slit_clearance
    x1, y1 = pts[:, 0], pts[:, 1]
    x2, y2 = np.roll(x1, -1), np.roll(y1, -1)

    i0 = math.floor(x1.min() / h) - 1
    j0 = math.floor(y1.min() / h) - 1
    nx = math.ceil(x1.max() / h) + 2 - i0
    ny = math.ceil(y1.max() / h) + 2 - j0
    xs = (i0 + np.arange(nx)) * h
    ys = (j0 + np.arange(ny)) * h
    tol = ON_BOUNDARY * h
    ylo, yhi = np.minimum(y1, y2), np.maximum(y1, y2)
    slit_pts = np.array([[a.real, a.imag, b.real, b.imag] for a, b in slits]).reshape(-1, 4)

    mask = np.zeros((nx, ny), dtype=bool)
    for j, y in enumerate(ys):
        crossing = (y1 <= y) != (y2 <= y)
        if not crossing.any():
            continue
        t = (y - y1[crossing]) / (y2[crossing] - y1[crossing])
        xc = np.sort(x1[crossing] + t * (x2[crossing] - x1[crossing]))
        right = xc.size - np.searchsorted(xc, xs, side="right")
        inside = right % 2 == 1
        if not inside.any():
            continue
        near = (ylo - tol <= y) & (y <= yhi + tol)
        cand = np.flatnonzero(inside)
        dist = _segment_distance(xs[cand], np.full(cand.size, y), x1[near], y1[near], x2[near], y2[near])
        inside[cand[dist <= tol]] = False
        if len(slit_pts):
            cand = np.flatnonzero(inside)
            s = slit_pts
            dist = _segment_distance(xs[cand], np.full(cand.size, y), s[:, 0], s[:, 1], s[:, 2], s[:, 3])
            inside[cand[dist <= clearance]] = False
        mask[:, j] = inside

    labels, count = ndimage.label(mask)
    if count == 0:
        raise ResolutionError(f"no lattice node inside the polygon at h={h}; use a smaller h")
    if count > 1:
        sizes = np.bincount(labels.ravel())[1:]
        keep = int(np.argmax(sizes)) + 1
        warnings.warn(f"discarded {count - 1} small component(s) of the raster interior", stacklevel=2)
        mask = labels == keep
    return RasterDomain(h=h, origin=(i0 * h, j0 * h), mask=mask, source=pts)


def rasterize_map(phi: AnalyticMap, h: float, n_samples: int = 4096) -> RasterDomain:
    """Rasterise the image of a map's base domain."""
    return rasterize(boundary_polyline(phi, n_samples), h, slits=phi.slits())


def disc_polyline(radius: float = 1.0, n_samples: int = 4096, center=(0.0, 0.0)) -> np.ndarray:
    t = 2 * np.pi * np.arange(n_samples) / n_samples
    return np.column_stack([center[0] + radius * np.cos(t), center[1] + radius * np.sin(t)])


# discrete quotient ------------------------------------------------------


def _full(domain: RasterDomain, f) -> np.ndarray:
    f = np.asarray(f, dtype=float)
    if f.shape == domain.mask.shape:
        return np.where(domain.mask, f, 0.0)
    if f.shape == (domain.n_interior,):
        return domain.scatter(f)
    raise DomainError(f"nodal values of shape {f.shape} do not match the domain")


def _forward_gradients(F, h):
    gx = (F[1:, :-1] - F[:-1, :-1]) / h
    gy = (F[:-1, 1:] - F[:-1, :-1]) / h
    return gx, gy


def _quotient_parts(F, h, p):
    gx, gy = _forward_gradients(F, h)
    num = np.sum((gx * gx + gy * gy) ** (p / 2.0)) * h * h
    den = np.sum(np.abs(F) ** p) * h * h
    return num, den


def rayleigh_quotient(domain: RasterDomain, f, p: float) -> float:
    """Discrete ``sum |grad f|^p h^2 / sum |f|^p h^2`` with forward differences."""
    if not p >= 2:
        raise DomainError(f"need p >= 2, got {p}")
    num, den = _quotient_parts(_full(domain, f), domain.h, p)
    if den == 0:
        raise DegenerateInputError("Rayleigh quotient of the zero function")
    return float(num / den)


def quotient_gradient(domain: RasterDomain, f, p: float):
    """Quotient value and its gradient with respect to the interior values."""
    F = _full(domain, f)
    h = domain.h
    gx, gy = _forward_gradients(F, h)
    g2 = gx * gx + gy * gy
    num = np.sum(g2 ** (p / 2.0)) * h * h
    den = np.sum(np.abs(F) ** p) * h * h
    if den == 0:
        raise DegenerateInputError("Rayleigh quotient of the zero function")
    weight = p * g2 ** ((p - 2.0) / 2.0) * h
    vx, vy = weight * gx, weight * gy
    dnum = np.zeros_like(F)
    dnum[:-1, :-1] -= vx + vy
    dnum[1:, :-1] += vx
    dnum[:-1, 1:] += vy
    dden = p * np.abs(F) ** (p - 2.0) * F * h * h
    R = num / den
    grad = (dnum - R * dden) / den
    return float(R), grad[domain.mask]


# solver -----------------------------------------------------------------


@dataclass(frozen=True)
class SolverConfig:
    """Settings of the eigenvalue solve.

    ``tolerance`` bounds the relative decrease of the quotient in the last
    accepted descent step; ``inverse_tolerance`` the relative eigenvalue
    change of the ``p = 2`` inverse iteration.
    """

    p: float
    max_iterations: int = 20000
    tolerance: float = 1e-9
    inverse_tolerance: float = 1e-10
    max_halvings: int = 50

    def __post_init__(self):
        if not self.p >= 2:
            raise DomainError(f"need p >= 2, got {self.p}")
        if not self.tolerance > 0 or not self.inverse_tolerance > 0:
            raise DomainError("tolerances must be positive")


@dataclass
class EigenResult:
    lam: float
    iterations: int
    residual: float
    f: np.ndarray


def inverse_iteration(domain: RasterDomain, tol: float = 1e-10, max_iterations: int = 10000):
    """Smallest eigenpair of the five-point Laplacian, shift 0."""
    if domain.n_interior == 0:
        raise ResolutionError("empty raster domain")
    L = domain.laplacian
    x = np.ones(domain.n_interior)
    x /= np.linalg.norm(x)
    lam = float(x @ (L @ x))
    change = math.inf
    for it in range(1, max_iterations + 1):
        y = domain._lu.solve(x)
        x = y / np.linalg.norm(y)
        new = float(x @ (L @ x))
        change = abs(new - lam) / new
        lam = new
        if change < tol:
            break
    return lam, x, it, change


def _normalize(x, p, h):
    return x / (np.sum(np.abs(x) ** p) * h * h) ** (1.0 / p)


def minimize_quotient(domain: RasterDomain, x0, config: SolverConfig) -> EigenResult:
    """Normalised gradient descent with step halving on the p-quotient.

    The gradient is taken in the discrete ``H^1_0`` metric, i.e. the
    Euclidean gradient is preconditioned by the inverse Laplacian.  Each
    direction is rescaled to the norm of the iterate; the trial step
    doubles after a success and halves until the quotient decreases.
    """
    p, h = config.p, domain.h
    x = _normalize(np.abs(np.asarray(x0, dtype=float)), p, h)
    R = rayleigh_quotient(domain, x, p)
    step, change, it = 1.0, math.inf, 0
    for it in range(1, config.max_iterations + 1):
        _, g = quotient_gradient(domain, x, p)
        # the quotient is scale invariant, so |g| |x| / R is the stationarity measure
        if np.linalg.norm(g) * np.linalg.norm(x) <= STATIONARY * R:
            change = 0.0
            break
        d = -domain._lu.solve(g)
        dn = np.linalg.norm(d)
        d *= np.linalg.norm(x) / dn
        t = min(1.0, 2.0 * step)
        for _ in range(config.max_halvings):
            trial = x + t * d
            Rt = rayleigh_quotient(domain, trial, p)
            if Rt < R:
                break
            t *= 0.5
        else:
            raise StagnationError(
                f"no decrease after {config.max_halvings} step halvings", best_value=R, iterations=it
            )
        change = (R - Rt) / R
        x, R, step = _normalize(trial, p, h), Rt, t
        if change < config.tolerance:
            break
    return EigenResult(lam=R, iterations=it, residual=change, f=x)


def solve(domain: RasterDomain, config: SolverConfig) -> EigenResult:
    """First eigenpair: inverse iteration for ``p = 2``, then descent for ``p > 2``."""
    lam2, x, it2, change2 = inverse_iteration(domain, config.inverse_tolerance)
    if config.p == 2:
        return EigenResult(lam=rayleigh_quotient(domain, x, 2.0), iterations=it2, residual=change2, f=x)
    res = minimize_quotient(domain, x, config)
    res.iterations += it2
    return res


def first_eigenvalue(domain: RasterDomain, config: SolverConfig):
    """``(lambda, iterations, residual)`` of the discrete first eigenvalue."""
    res = solve(domain, config)
    return res.lam, res.iterations, res.residual


def equal_area_disc(domain: RasterDomain, n_samples: int = 4096) -> RasterDomain:
    area = abs(polygon_area(domain.source))
    return rasterize(disc_polyline(math.sqrt(area / math.pi), n_samples), domain.h)


def faber_krahn_gap(domain: RasterDomain, config: SolverConfig) -> float:
    """``lambda(domain) - lambda(disc of equal polygon area)`` at the same ``h``."""
    lam, _, _ = first_eigenvalue(domain, config)
    lam_disc, _, _ = first_eigenvalue(equal_area_disc(domain), config)
    return lam - lam_disc
