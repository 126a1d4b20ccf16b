"""Conformal lower bounds for the first Dirichlet eigenvalue of the p-Laplacian."""

from .bounds import (
    BoundReport,
    alpha_tilde,
    lower_bound_alpha_regular,
    lower_bound_infty_regular,
    m_p_k_log,
    nu,
    qstar,
    quasidisc_lower_bound,
    star_spiral_K,
    star_spiral_lower_bound,
)
from .constants import SPQuery, composition_norm_bound, composition_norm_conformal, sp_constant
from .maps import AnalyticMap, BaseDomain, parse_map
from .oracle import SolverConfig, first_eigenvalue, rasterize, rasterize_map
from .quadrature import QuadratureGrid, image_area, integrate, jacobian_alpha_norm

__version__ = "0.1.0"
