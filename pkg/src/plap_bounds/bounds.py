"""Lower bounds for the first Dirichlet eigenvalue of the p-Laplacian.

Every bound is assembled as the natural log of the right-hand side of
``1/lambda <= ...``; the eigenvalue bound is ``exp(-log_rhs)``.

Two families are covered:

* conformal regular domains, where the Jacobian of the map from the base
  domain is in ``L^alpha`` (``alpha`` finite) or bounded (``alpha = inf``);
* K-quasidiscs, where the Jacobian norm is replaced by an a-priori estimate
  depending only on ``K``.

For quasidiscs the admissible ``alpha`` lie within about ``1e-13`` of 1 and
the optimal ``q`` within about ``1e-13`` of 2, so those searches run over the
excesses ``eps = alpha - 1`` and ``gap = 2 - q``.  The ``exp(-633 K**2)``
factor underflows doubles, hence everything stays in log space.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

from .constants import CLIP, LOG_PI, log_talenti_constant
from .errors import DomainError, IntegrabilityError
from .maps import AnalyticMap
from .optimize import minimize_bounded
from .quadrature import QuadratureGrid, image_area, log_jacobian_alpha_norm_levels, refinement_diverges

LOG_10 = math.log(10.0)
THEOREM_TAGS = ("alpha_regular", "infty_regular", "quasidisc", "star_spiral")


@dataclass
class BoundReport:
    """One evaluated eigenvalue bound.

    ``factors`` lists ``(name, log contribution)`` pairs whose sum is
    ``log_rhs``.  ``q_gap`` and ``alpha_excess`` carry ``2 - optimal_q``
    and ``optimal_alpha - 1`` at full precision.
    """

    theorem_tag: str
    p: float
    optimal_q: float
    q_gap: float
    log_rhs: float
    lower_bound_lambda: float
    factors: list = field(default_factory=list)
    alpha: float | None = None
    K: float | None = None
    beta: float | None = None
    optimal_alpha: float | None = None
    alpha_excess: float | None = None
    log_M: float | None = None
    log_M_star: float | None = None
    R_star: float | None = None

    @property
    def log_lower_bound(self) -> float:
        return -self.log_rhs

    def factor(self, name: str) -> float:
        return dict(self.factors)[name]

    def to_dict(self) -> dict:
        d = asdict(self)
        d["factors"] = [[k, v] for k, v in self.factors]
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "BoundReport":
        d = dict(d)
        d["factors"] = [(k, v) for k, v in d["factors"]]
        return cls(**d)


def _safe_exp(x: float) -> float:
    try:
        return math.exp(x)
    except OverflowError:
        return math.inf


# exponents --------------------------------------------------------------


def qstar_gap(p: float, alpha: float, alpha_excess: float | None = None) -> float:
    """``2 - q*`` for ``q* = 2 alpha p / (alpha p + 2(alpha - 1))``."""
    if math.isinf(alpha):
        return 4.0 / (p + 2.0)
    eps = alpha - 1.0 if alpha_excess is None else alpha_excess
    return 4.0 * eps / (alpha * p + 2.0 * eps)


def qstar(p: float, alpha: float) -> float:
    """Lower end of the admissible ``q`` interval; ``alpha = inf`` gives ``2p/(p+2)``."""
    if not p > 2:
        raise DomainError(f"need p > 2, got {p}")
    if math.isinf(alpha):
        return 2.0 * p / (p + 2.0)
    if not alpha > 1:
        raise DomainError(f"need alpha > 1, got {alpha}")
    return 2.0 * alpha * p / (alpha * p + 2.0 * (alpha - 1.0))


def q_objective(p: float, gap: float, log_base_measure: float) -> float:
    """``p log A_q + p(2-q)/(2q) log|base|`` at ``q = 2 - gap``."""
    return p * log_talenti_constant(gap) + p * gap / (2.0 * (2.0 - gap)) * log_base_measure


def search_interval(width: float):
    """Clipped interior ``[lo, hi]`` of ``(0, width)``."""
    c = CLIP * min(1.0, width)
    return c, width - c


def q_infimum(p: float, gap_star: float, log_base_measure: float):
    """Minimise :func:`q_objective` over ``q in (q*, 2)``; returns ``(gap, value)``."""
    lo, hi = search_interval(gap_star)
    return minimize_bounded(lambda g: q_objective(p, g, log_base_measure), lo, hi)


# conformal regular domains ---------------------------------------------


def _regular_report(tag, p, alpha, phi, log_jnorm, area):
    if not p > 2:
        raise DomainError(f"need p > 2, got {p}")
    log_base = math.log(phi.base.measure)
    gap, qterm = q_infimum(p, qstar_gap(p, alpha), log_base)
    q = 2.0 - gap
    factors = [
        ("sobolev_poincare", qterm + p * log_base / 2.0),
        ("base_measure", -p * log_base / 2.0),
        ("image_area", (p - 2.0) / 2.0 * math.log(area)),
        ("jacobian_norm", log_jnorm),
    ]
    log_rhs = math.fsum(v for _, v in factors)
    return BoundReport(
        theorem_tag=tag,
        p=p,
        alpha=None if math.isinf(alpha) else alpha,
        optimal_q=q,
        q_gap=gap,
        log_rhs=log_rhs,
        lower_bound_lambda=_safe_exp(-log_rhs),
        factors=factors,
    )


def lower_bound_alpha_regular(
    p: float,
    alpha: float,
    phi: AnalyticMap,
    grid: QuadratureGrid = QuadratureGrid(),
    area: float | None = None,
) -> BoundReport:
    """Bound for a conformal alpha-regular domain ``phi(base)``.

    ``area`` overrides the quadrature value of ``|phi(base)|`` (for
    instance with a closed-form upper bound).
    """
    if not alpha > 1 or math.isinf(alpha):
        raise DomainError(f"need finite alpha > 1, got {alpha}")
    logs = log_jacobian_alpha_norm_levels(phi, alpha, grid)
    if refinement_diverges([math.exp(v) for v in logs]):
        raise IntegrabilityError(
            f"||J|L^{alpha}|| keeps growing under refinement ({logs}); try a smaller alpha"
        )
    if area is None:
        area = image_area(phi, grid)
    return _regular_report("alpha_regular", p, alpha, phi, logs[-1], area)


def lower_bound_infty_regular(
    p: float,
    phi: AnalyticMap,
    grid: QuadratureGrid = QuadratureGrid(),
    area: float | None = None,
    sup: str = "closed_form",
) -> BoundReport:
    """Bound for a conformal infinity-regular domain.

    ``sup="closed_form"`` uses the map's known cap on the Jacobian when it
    has one and falls back to the grid maximum; ``sup="grid"`` always uses
    the grid maximum.
    """
    if sup not in ("closed_form", "grid"):
        raise DomainError(f"unknown sup mode {sup!r}")
    cap = phi.jacobian_sup_bound() if sup == "closed_form" else None
    if cap is None:
        log_jnorm = log_jacobian_alpha_norm_levels(phi, math.inf, grid)[-1]
    else:
        log_jnorm = math.log(cap)
    if area is None:
        area = image_area(phi, grid)
    return _regular_report("infty_regular", p, math.inf, phi, log_jnorm, area)


# quasidiscs -------------------------------------------------------------


def exponential_term(K: float) -> float:
    """``K**2 pi**2 (2 + pi**2)**2 / (2 ln 3)``."""
    return K * K * math.pi**2 * (2.0 + math.pi**2) ** 2 / (2.0 * math.log(3.0))


def _check_K(K):
    if not K >= 1 or math.isinf(K):
        raise DomainError(f"need finite K >= 1, got {K}")


def log_nu_excess(eps: float, K: float, literal: bool = False) -> float:
    """``log nu`` at ``alpha = 1 + eps``.

    ``nu = 10**(8a) (2a-2)/(2a-1) (24 pi**2 K**2)**(2a)``; ``literal=True``
    uses the power ``a`` instead of ``2a`` on the last factor.
    """
    if eps == 0:
        return -math.inf
    a = 1.0 + eps
    power = a if literal else 2.0 * a
    return (
        8.0 * a * LOG_10
        + math.log(2.0 * eps)
        - math.log1p(2.0 * eps)
        + power * math.log(24.0 * math.pi**2 * K * K)
    )


def nu(alpha: float, K: float, literal: bool = False) -> float:
    if not alpha > 1:
        raise DomainError(f"need alpha > 1, got {alpha}")
    _check_K(K)
    return _safe_exp(log_nu_excess(alpha - 1.0, K, literal))


def alpha_tilde_excess(K: float, literal: bool = False) -> float:
    """``alpha~ - 1`` where ``nu(alpha~) = 1``, by bisection in ``log(alpha - 1)``."""
    _check_K(K)
    lo, hi = math.log(1e-300), 0.0
    if not (log_nu_excess(math.exp(lo), K, literal) < 0 < log_nu_excess(1.0, K, literal)):
        raise RuntimeError("nu does not change sign on (1, 2]")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if log_nu_excess(math.exp(mid), K, literal) < 0:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-16:
            break
    return math.exp(0.5 * (lo + hi))


def alpha_tilde(K: float, literal: bool = False) -> float:
    """Root of ``nu(alpha) = 1``; it lies within ``1e-12`` of 1 for every ``K``."""
    return 1.0 + alpha_tilde_excess(K, literal)


def alpha_star_excess(K: float, literal: bool = False) -> float:
    """``min(K**2/(K**2-1), alpha~) - 1``, with the first term infinite at ``K = 1``."""
    cap = math.inf if K == 1 else 1.0 / (K * K - 1.0)
    return min(cap, alpha_tilde_excess(K, literal))


def log_C_excess(eps: float, K: float, literal: bool = False) -> float:
    """``log C_alpha`` with ``C = 10**6 / [(2a-1)(1-nu)]**(1/(2a))`` at ``a = 1 + eps``.

    ``literal=True`` uses the exponent ``1/a``.
    """
    lnu = log_nu_excess(eps, K, literal)
    if not lnu < 0:
        raise DomainError(f"C_alpha needs nu < 1 (alpha - 1 = {eps})")
    a = 1.0 + eps
    expo = 1.0 / a if literal else 1.0 / (2.0 * a)
    return 6.0 * LOG_10 - expo * (math.log1p(2.0 * eps) + math.log(-math.expm1(lnu)))


def _log_jacobian_norm_bound(eps, K, area, literal=False):
    a = 1.0 + eps
    return (
        2.0 * log_C_excess(eps, K, literal)
        + 2.0 * math.log(K)
        + (1.0 / a - 1.0) * LOG_PI
        - math.log(4.0)
        + exponential_term(K)
        + math.log(area)
    )


def jacobian_norm_bound_quasidisc(kappa: float, K: float, area: float, literal: bool = False) -> float:
    """Log of the a-priori bound on ``||J | L^kappa(D)||`` for a K-quasidisc of given area."""
    _check_K(K)
    if not area > 0:
        raise DomainError("area must be positive")
    eps = kappa - 1.0
    cap_k = math.inf if K == 1 else K * K / (K * K - 1.0)
    cap_nu = 1.0 + alpha_tilde_excess(K, literal)
    if not (eps > 0 and kappa < cap_k and log_nu_excess(eps, K, literal) < 0):
        raise DomainError(
            f"need 1 < kappa < min(K^2/(K^2-1) = {cap_k}, alpha~ = {cap_nu!r}), got {kappa!r}"
        )
    return _log_jacobian_norm_bound(eps, K, area, literal)


@dataclass
class QuasidiscParams:
    """Optimal parameters and log factors behind ``M_p(K)``."""

    K: float
    alpha_excess: float
    q_gap: float
    nu: float
    log_C: float
    alpha_star_excess: float
    alpha_tilde_excess: float
    factors: list

    @property
    def log_M(self) -> float:
        return -math.fsum(v for _, v in self.factors)


def m_p_k(p: float, K: float, literal: bool = False) -> QuasidiscParams:
    """Optimise ``alpha`` and ``q`` for the quasidisc constant.

    The factors are the log contributions to ``1/(lambda |Omega|^(p/2))``;
    ``log M_p(K)`` is minus their sum.  Both searches minimise that sum,
    which maximises ``M_p(K)`` and so gives the strongest valid bound.
    """
    if not p > 2:
        raise DomainError(f"need p > 2, got {p}")
    _check_K(K)
    eps_star = alpha_star_excess(K, literal)
    if not eps_star > 0:
        raise DomainError("empty alpha interval: alpha* <= 1")

    def inner(eps):
        gap_star = qstar_gap(p, 1.0 + eps, eps)
        lo, hi = search_interval(gap_star)
        return minimize_bounded(lambda g: q_objective(p, g, LOG_PI) + p * LOG_PI / 2.0, lo, hi)

    def outer(eps):
        return inner(eps)[1] + LOG_PI / (1.0 + eps) + 2.0 * log_C_excess(eps, K, literal)

    lo, hi = search_interval(eps_star)
    eps, _ = minimize_bounded(outer, lo, hi, n_scan=50)
    gap, qterm = inner(eps)
    log_C = log_C_excess(eps, K, literal)
    factors = [
        ("prefactor", -(math.log(4.0) + (1.0 + p / 2.0) * LOG_PI - 2.0 * math.log(K))),
        ("exponential", exponential_term(K)),
        ("sobolev_poincare", qterm),
        ("jacobian_pi_power", LOG_PI / (1.0 + eps)),
        ("jacobian_constant", 2.0 * log_C),
    ]
    return QuasidiscParams(
        K=K,
        alpha_excess=eps,
        q_gap=gap,
        nu=math.exp(log_nu_excess(eps, K, literal)),
        log_C=log_C,
        alpha_star_excess=eps_star,
        alpha_tilde_excess=alpha_tilde_excess(K, literal),
        factors=factors,
    )


def m_p_k_log(p: float, K: float, literal: bool = False) -> float:
    """Natural log of ``M_p(K)``."""
    return m_p_k(p, K, literal).log_M


def quasidisc_lower_bound(p: float, K: float, area: float, literal: bool = False, *, _tag="quasidisc", _beta=None) -> BoundReport:
    """``lambda >= M_p(K) / |Omega|^(p/2) = M*_p(K) / R_*^p`` for a K-quasidisc."""
    if not area > 0:
        raise DomainError("area must be positive")
    params = m_p_k(p, K, literal)
    factors = params.factors + [("area", p / 2.0 * math.log(area))]
    log_rhs = math.fsum(v for _, v in factors)
    log_M = params.log_M
    return BoundReport(
        theorem_tag=_tag,
        p=p,
        K=K,
        beta=_beta,
        alpha=1.0 + params.alpha_excess,
        optimal_alpha=1.0 + params.alpha_excess,
        alpha_excess=params.alpha_excess,
        optimal_q=2.0 - params.q_gap,
        q_gap=params.q_gap,
        log_rhs=log_rhs,
        lower_bound_lambda=_safe_exp(-log_rhs),
        factors=factors,
        log_M=log_M,
        log_M_star=log_M - p / 2.0 * LOG_PI,
        R_star=math.sqrt(area / math.pi),
    )


def star_spiral_K(beta: float) -> float:
    """Quasiconformality ``cot**2((1 - beta) pi / 4)`` of beta-star/spiral domains."""
    if not 0 <= beta < 1:
        raise DomainError(f"need 0 <= beta < 1, got {beta}")
    return 1.0 / math.tan((1.0 - beta) * math.pi / 4.0) ** 2


def star_spiral_lower_bound(p: float, beta: float, area: float, literal: bool = False) -> BoundReport:
    return quasidisc_lower_bound(p, star_spiral_K(beta), area, literal, _tag="star_spiral", _beta=beta)
