"""Sobolev-Poincare constants and composition-operator norms.

The ``1 < q < 2`` constant is evaluated through the gap ``2 - q`` so that
values of ``q`` within ``1e-13`` of 2 (which the quasidisc bound needs)
keep full relative precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError
from .maps import AnalyticMap
from .optimize import minimize_bounded
from .quadrature import QuadratureGrid, integrate

LOG_PI = math.log(math.pi)
LOG_2 = math.log(2.0)

#: Distance kept from the ends of an open search interval, relative to its width.
CLIP = 1e-9


def log_gamma(x: float) -> float:
    if not x > 0:
        raise DomainError(f"log_gamma needs x > 0, got {x}")
    return math.lgamma(x)


def log_talenti_constant(gap: float) -> float:
    """Log of the ``1 < q < 2`` constant written in terms of ``gap = 2 - q``."""
    if not 0 < gap < 1:
        raise DomainError(f"need 1 < q < 2, got q = 2 - {gap}")
    q = 2.0 - gap
    expo = (1.0 - gap) / q
    log_ratio = math.log1p(-gap) - math.log(gap)
    return (
        expo * log_ratio
        - 0.5 * LOG_PI
        - LOG_2 / q
        - 0.5 * (log_gamma(2.0 / q) + log_gamma(3.0 - 2.0 / q))
    )


def _clipped(lo: float, hi: float):
    w = hi - lo
    return lo + CLIP * min(1.0, w), hi - CLIP * min(1.0, w)


@dataclass(frozen=True)
class SPQuery:
    """Exponents of an ``(r, q)`` Sobolev-Poincare inequality.

    ``area`` is the domain measure, needed only for ``q = 2``.
    """

    r: float
    q: float
    area: float | None = None

    def __post_init__(self):
        if not self.r >= 1 or math.isinf(self.r):
            raise DomainError(f"need finite r >= 1, got r = {self.r}")
        if not 1 <= self.q <= 2:
            raise DomainError(f"need 1 <= q <= 2, got q = {self.q}")
        if self.q < 2:
            limit = 2 * self.q / (2 - self.q)
            if self.r > limit:
                raise DomainError(f"violates r <= 2q/(2-q): r = {self.r} > {limit}")
        elif self.area is None or not self.area > 0:
            raise DomainError("q = 2 needs a positive domain area")


def log_q2_constant(r: float, area: float):
    """Log of the ``q = 2`` constant and the minimising exponent ``l``."""
    lower = max(2 * r / (r + 2), 1.0)
    lo, hi = _clipped(0.0, 2.0 - lower)  # search over gap = 2 - l
    gap, value = minimize_bounded(log_talenti_constant, lo, hi)
    return value + math.log(area) / r, 2.0 - gap


def log_sp_constant(query: SPQuery) -> float:
    if query.q == 1:
        return -math.log(2.0 * math.sqrt(math.pi))
    if query.q < 2:
        return log_talenti_constant(2.0 - query.q)
    return log_q2_constant(query.r, query.area)[0]


def sp_constant(query: SPQuery) -> float:
    """Upper estimate of the best ``(r, q)`` Sobolev-Poincare constant.

    ``q = 1`` gives ``1/(2 sqrt(pi))``; ``1 < q < 2`` the closed form in
    Gamma functions; ``q = 2`` the infimum of that closed form over
    ``l in (2r/(r+2), 2)`` times ``area**(1/r)``.
    """
    return math.exp(log_sp_constant(query))


def composition_norm_bound(p: float, q: float, area_target: float, area_source: float) -> float:
    """Closed-form cap ``|target|^((p-2)/2p) |source|^((2-q)/2q)`` for conformal maps."""
    if not p > 2:
        raise DomainError(f"need p > 2, got {p}")
    if not 1 <= q <= 2:
        raise DomainError(f"need 1 <= q <= 2, got {q}")
    if not (area_target > 0 and area_source > 0):
        raise DomainError("areas must be positive")
    return area_target ** ((p - 2) / (2 * p)) * area_source ** ((2 - q) / (2 * q))


def composition_norm_conformal(phi: AnalyticMap, p: float, q: float, grid: QuadratureGrid = QuadratureGrid()) -> float:
    """Exact composition norm of a conformal map by quadrature.

    With ``|D phi|**2 = J`` the integrand ``(|D phi|^p / J)^(q/(p-q))``
    reduces to ``J**(q(p-2) / (2(p-q)))``.
    """
    if not p > 2:
        raise DomainError(f"need p > 2, got {p}")
    if not 1 <= q < p:
        raise DomainError(f"need 1 <= q < p, got q = {q}")
    expo = q * (p - 2) / (2 * (p - q))
    value, _ = integrate(lambda z: phi.jacobian(z) ** expo, phi.base, grid)
    return value ** ((p - q) / (p * q))
