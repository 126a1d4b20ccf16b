"""Tensor-product quadrature over the unit disc and rectangles.

The disc uses a polar rule: Gauss-Legendre in ``r`` (weight ``r dr``)
times the uniform trapezoid rule in ``theta``, which is spectrally accurate
for periodic integrands.  Rectangles use Gauss-Legendre in both directions.
Each refinement level doubles the node counts; the error estimate is the
difference between the two finest levels.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DomainError, IntegrabilityWarning, QuadratureError
from .maps import AnalyticMap, BaseDomain


@dataclass(frozen=True)
class QuadratureGrid:
    """Node counts of the coarsest level and the number of levels."""

    nodes: int = 64
    angular_nodes: int | None = None
    levels: int = 3

    def __post_init__(self):
        if self.nodes < 8 or (self.angular_nodes is not None and self.angular_nodes < 8):
            raise DomainError("quadrature grids need at least 8 nodes per direction")
        if self.levels < 1:
            raise DomainError("need at least one refinement level")

    def level_sizes(self):
        m = self.angular_nodes or self.nodes
        return [(self.nodes * 2**k, m * 2**k) for k in range(self.levels)]


@lru_cache(maxsize=32)
def _gauss_legendre(n: int):
    x, w = np.polynomial.legendre.leggauss(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def nodes_and_weights(base: BaseDomain, n1: int, n2: int):
    """Flattened complex nodes and positive weights of one level."""
    if base.kind == "unit_disc":
        x, w = _gauss_legendre(n1)
        r = 0.5 * (x + 1.0)
        wr = 0.5 * w * r
        theta = 2.0 * np.pi * np.arange(n2) / n2
        z = r[:, None] * np.exp(1j * theta)[None, :]
        wt = wr[:, None] * np.full(n2, 2.0 * np.pi / n2)[None, :]
    else:
        x, wx = _gauss_legendre(n1)
        y, wy = _gauss_legendre(n2)
        a, b = base.half_width, base.half_height
        z = a * x[:, None] + 1j * b * y[None, :]
        wt = (a * wx)[:, None] * (b * wy)[None, :]
    return z.ravel(), wt.ravel()


def _level_sums(f, base, grid):
    sums = []
    for n1, n2 in grid.level_sizes():
        z, w = nodes_and_weights(base, n1, n2)
        vals = np.asarray(f(z), dtype=float)
        bad = ~np.isfinite(vals)
        if np.any(bad):
            node = z[np.argmax(bad)]
            raise QuadratureError(f"integrand is not finite at node z={node}")
        sums.append(float(np.dot(w, vals)))
    return sums


def integrate(f, base: BaseDomain, grid: QuadratureGrid = QuadratureGrid()):
    """Integrate ``f`` (vectorised over complex points) over ``base``.

    Returns ``(value, error_estimate)`` where ``value`` comes from the
    finest level and ``error_estimate`` is its distance to the next
    coarser level (``inf`` with a single level).
    """
    sums = _level_sums(f, base, grid)
    err = abs(sums[-1] - sums[-2]) if len(sums) > 1 else math.inf
    return sums[-1], err


def image_area(phi: AnalyticMap, grid: QuadratureGrid = QuadratureGrid()) -> float:
    value, _ = integrate(phi.jacobian, phi.base, grid)
    return value


def refinement_diverges(values, rel=0.01) -> bool:
    """True when every refinement step grows the value by more than ``rel``."""
    if len(values) < 2:
        return False
    steps = np.diff(values)
    return bool(np.all(steps > rel * np.abs(np.asarray(values[1:]))))


def log_jacobian_alpha_norm_levels(phi: AnalyticMap, alpha: float, grid: QuadratureGrid):
    """``log ||J | L^alpha||`` at every refinement level.

    Finite ``alpha`` is evaluated as ``log m + log(sum w (J/m)**alpha) / alpha``
    with ``m`` the level maximum, which stays finite for huge ``alpha``.
    ``alpha = inf`` gives the log of the largest nodal Jacobian.
    """
    if not alpha > 1:
        raise DomainError("Jacobian norms need alpha > 1")
    out = []
    for n1, n2 in grid.level_sizes():
        z, w = nodes_and_weights(phi.base, n1, n2)
        jac = phi.jacobian(z)
        if not np.all(np.isfinite(jac)):
            raise QuadratureError("Jacobian is not finite at a quadrature node")
        m = float(jac.max())
        if math.isinf(alpha):
            out.append(math.log(m))
        else:
            s = float(np.dot(w, (jac / m) ** alpha))
            out.append(math.log(m) + math.log(s) / alpha)
    return out


def jacobian_alpha_norm(phi: AnalyticMap, alpha: float, grid: QuadratureGrid = QuadratureGrid()) -> float:
    """``(integral of J**alpha)**(1/alpha)`` over the base domain.

    ``alpha = inf`` returns the maximum of ``J`` over the finest nodes, a
    lower estimate of the essential supremum (see
    ``AnalyticMap.jacobian_sup_bound`` for the closed-form cap).  Emits
    :class:`IntegrabilityWarning` when refinement keeps growing the norm.
    """
    logs = log_jacobian_alpha_norm_levels(phi, alpha, grid)
    values = [math.exp(v) for v in logs]
    if not math.isinf(alpha) and refinement_diverges(values):
        warnings.warn(
            IntegrabilityWarning(f"J^{alpha} refinement not converging: levels {values}"),
            stacklevel=2,
        )
    return values[-1]
