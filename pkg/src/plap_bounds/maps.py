"""Closed-form conformal maps from the unit disc or a rectangle.

Every map is evaluated together with its exact derivative; the Jacobian of
a conformal map is ``|phi'(z)|**2``.  All functions accept scalars or numpy
arrays of complex points and are pure.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError

#: Boundary traces are taken at radius / offset ``1 - BOUNDARY_EPS``.
BOUNDARY_EPS = 1e-9

#: Power series refuse evaluation beyond this fraction of their radius.
SERIES_RADIUS_FRACTION = 0.999


@dataclass(frozen=True)
class BaseDomain:
    """Source domain of a map: the unit disc or a centred rectangle."""

    kind: str = "unit_disc"
    half_width: float = 0.0
    half_height: float = 0.0

    def __post_init__(self):
        if self.kind == "unit_disc":
            return
        if self.kind != "rectangle":
            raise DomainError(f"unknown base domain kind {self.kind!r}")
        if not (self.half_width > 0 and self.half_height > 0):
            raise DomainError("rectangle half sides must be positive")

    @classmethod
    def disc(cls):
        return cls("unit_disc")

    @classmethod
    def rectangle(cls, half_width, half_height):
        return cls("rectangle", float(half_width), float(half_height))

    @property
    def measure(self) -> float:
        if self.kind == "unit_disc":
            return math.pi
        return 4.0 * self.half_width * self.half_height

    def contains(self, z) -> np.ndarray:
        """Membership in the open domain, elementwise."""
        z = np.asarray(z, dtype=complex)
        if self.kind == "unit_disc":
            return np.abs(z) < 1.0
        return (np.abs(z.real) < self.half_width) & (np.abs(z.imag) < self.half_height)

    def boundary(self, n_samples: int, eps: float = BOUNDARY_EPS) -> np.ndarray:
        """``n_samples`` points on the boundary shrunk by ``1 - eps``, counterclockwise."""
        t = np.arange(n_samples) / n_samples
        if self.kind == "unit_disc":
            return (1.0 - eps) * np.exp(2j * np.pi * t)
        a = (1.0 - eps) * self.half_width
        b = (1.0 - eps) * self.half_height
        # arc length parametrisation starting at the bottom-left corner
        perim = 4.0 * (a + b)
        s = t * perim
        corners = np.array([-a - 1j * b, a - 1j * b, a + 1j * b, -a + 1j * b, -a - 1j * b])
        lengths = np.array([2 * a, 2 * b, 2 * a, 2 * b])
        edges = np.concatenate([[0.0], np.cumsum(lengths)])
        k = np.clip(np.searchsorted(edges, s, side="right") - 1, 0, 3)
        frac = (s - edges[k]) / lengths[k]
        return corners[k] + frac * (corners[k + 1] - corners[k])


KINDS = ("identity", "polynomial", "epicycloid", "sine", "power_series")


@dataclass(frozen=True)
class AnalyticMap:
    """A conformal map ``phi`` on its base domain.

    ``coefficients`` holds ``c0, c1, ...`` of ``sum c_k z**k`` for the
    polynomial and power-series kinds; ``n`` is the epicycloid order and
    ``d`` the half height of the sine rectangle.
    """

    kind: str
    base: BaseDomain = field(default_factory=BaseDomain.disc)
    coefficients: tuple = ()
    n: int = 0
    d: float = 0.0
    radius: float = math.inf

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DomainError(f"unknown map kind {self.kind!r}")
        if self.kind == "sine":
            expected = BaseDomain.rectangle(math.pi / 2, self.d)
            if self.d <= 0 or self.base != expected:
                raise DomainError("sine maps the rectangle (-pi/2, pi/2) x (-d, d) with d > 0")
        elif self.base.kind != "unit_disc":
            raise DomainError(f"{self.kind} map must be defined on the unit disc")
        if self.kind == "epicycloid" and (int(self.n) != self.n or self.n < 2):
            raise DomainError("epicycloid order n must be an integer >= 2")
        if self.kind in ("polynomial", "power_series") and len(self.coefficients) < 2:
            raise DomainError("need at least coefficients c0, c1")
        if self.kind == "power_series":
            if not self.radius > 0 or not math.isfinite(self.radius):
                raise DomainError("power series need an explicit finite validity radius")
            if SERIES_RADIUS_FRACTION * self.radius < 1.0:
                raise DomainError("validity radius must cover the unit disc with margin")

    # constructors -----------------------------------------------------

    @classmethod
    def identity(cls):
        return cls("identity")

    @classmethod
    def epicycloid(cls, n: int):
        return cls("epicycloid", n=int(n))

    @classmethod
    def sine(cls, d: float):
        d = float(d)
        return cls("sine", base=BaseDomain.rectangle(math.pi / 2, d), d=d)

    @classmethod
    def polynomial(cls, coefficients):
        return cls("polynomial", coefficients=tuple(complex(c) for c in coefficients))

    @classmethod
    def power_series(cls, coefficients, radius: float):
        return cls(
            "power_series",
            coefficients=tuple(complex(c) for c in coefficients),
            radius=float(radius),
        )

    # evaluation -------------------------------------------------------

    def _check(self, z):
        z = np.asarray(z, dtype=complex)
        inside = self.base.contains(z)
        if self.kind == "power_series":
            inside &= np.abs(z) <= SERIES_RADIUS_FRACTION * self.radius
        if not np.all(inside):
            bad = z[~inside] if z.ndim else z
            raise DomainError(f"{self.kind} map evaluated outside its base domain at {np.ravel(bad)[0]}")
        return z

    def __call__(self, z):
        z = self._check(z)
        if self.kind == "identity":
            w = z.copy()
        elif self.kind == "epicycloid":
            w = z + z**self.n / self.n
        elif self.kind == "sine":
            w = np.sin(z)
        else:
            w = np.polynomial.polynomial.polyval(z, np.asarray(self.coefficients))
        return w[()] if w.ndim == 0 else w

    def derivative(self, z):
        z = self._check(z)
        if self.kind == "identity":
            dw = np.ones_like(z)
        elif self.kind == "epicycloid":
            dw = 1.0 + z ** (self.n - 1)
        elif self.kind == "sine":
            dw = np.cos(z)
        else:
            c = np.asarray(self.coefficients)
            dw = np.polynomial.polynomial.polyval(z, np.polynomial.polynomial.polyder(c))
        return dw[()] if dw.ndim == 0 else dw

    def jacobian(self, z):
        dw = np.asarray(self.derivative(z))
        jac = dw.real**2 + dw.imag**2
        if np.any(jac == 0.0):
            raise DomainError(f"{self.kind} map is not conformal: phi' vanishes at a sample point")
        return jac[()] if jac.ndim == 0 else jac

    def jacobian_sup_bound(self):
        """Closed-form upper bound of ``sup J`` where one is known, else None."""
        if self.kind == "identity":
            return 1.0
        if self.kind == "epicycloid":
            return 4.0
        if self.kind == "sine":
            return math.cosh(self.d) ** 2
        return None

    def slits(self):
        """Zero-width boundary segments of the image, as ``(start, end)`` pairs."""
        if self.kind == "sine":
            c = math.cosh(self.d)
            return [(1.0 + 0j, c + 0j), (-1.0 + 0j, -c + 0j)]
        return []

    def spec(self) -> str:
        """Text form accepted by :func:`parse_map`."""
        if self.kind == "identity":
            return "identity"
        if self.kind == "epicycloid":
            return f"epicycloid n={self.n}"
        if self.kind == "sine":
            return f"sine d={self.d!r}"
        coeffs = ",".join(_format_complex(c) for c in self.coefficients)
        if self.kind == "polynomial":
            return f"poly coeffs={coeffs}"
        return f"series coeffs={coeffs} radius={self.radius!r}"


def eval_map(phi: AnalyticMap, z):
    return phi(z)


def eval_derivative(phi: AnalyticMap, z):
    return phi.derivative(z)


def jacobian(phi: AnalyticMap, z):
    return phi.jacobian(z)


def disc_conformal_radius(w):
    """Conformal radius ``1 - |w|**2`` of the unit disc at ``w``."""
    w = np.asarray(w, dtype=complex)
    if np.any(np.abs(w) >= 1.0):
        raise DomainError("conformal radius of the unit disc needs |w| < 1")
    r = 1.0 - (w.real**2 + w.imag**2)
    return r[()] if r.ndim == 0 else r


def image_conformal_radius(phi: AnalyticMap, w):
    """Conformal radius of the image domain at ``phi(w)`` for a disc map."""
    return np.abs(phi.derivative(w)) * disc_conformal_radius(w)


def boundary_polyline(phi: AnalyticMap, n_samples: int, eps: float = BOUNDARY_EPS) -> np.ndarray:
    """Image of the base boundary, traversed once counterclockwise.

    Returns an ``(n_samples, 2)`` array of ``x, y`` coordinates; the
    polygon is implicitly closed.
    """
    if n_samples < 16:
        raise DomainError("boundary_polyline needs at least 16 samples")
    w = np.asarray(phi(phi.base.boundary(n_samples, eps)))
    return np.column_stack([w.real, w.imag])


def polygon_area(points) -> float:
    """Signed shoelace area of a closed polygon given as ``(n, 2)`` points."""
    x, y = np.asarray(points, dtype=float).T
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))


# text form ------------------------------------------------------------

def _format_complex(c: complex) -> str:
    if c.imag == 0:
        return repr(c.real)
    return f"{c.real!r}{c.imag:+}i"


def parse_complex(token: str) -> complex:
    """Parse ``a``, ``bi`` or ``a+bi``; ``i`` or ``j`` mark the imaginary unit."""
    try:
        c = complex(token.strip().replace("i", "j"))
    except ValueError:
        raise DomainError(f"bad complex literal {token!r}") from None
    if not cmath.isfinite(c):
        raise DomainError(f"bad complex literal {token!r}")
    return c


def _split_spec(text: str):
    words = text.split()
    if not words:
        raise DomainError("empty map specification")
    if words[0].startswith("map="):
        words[0] = words[0][4:]
    kind, params = words[0], {}
    for w in words[1:]:
        key, sep, value = w.partition("=")
        if not sep or not key or not value:
            raise DomainError(f"bad map parameter token {w!r}")
        params[key] = value
    return kind, params


def parse_map(text: str) -> AnalyticMap:
    """Build a map from its text form.

    Grammar: ``identity`` | ``epicycloid n=<int>`` | ``sine d=<real>`` |
    ``poly coeffs=<c0,c1,...>`` | ``series coeffs=<c0,...> radius=<real>``,
    optionally prefixed by ``map=``.  Coefficients are complex literals
    such as ``0.25`` or ``1+2i``.
    """
    kind, params = _split_spec(text)
    allowed = {
        "identity": set(),
        "epicycloid": {"n"},
        "sine": {"d"},
        "poly": {"coeffs"},
        "series": {"coeffs", "radius"},
    }
    if kind not in allowed:
        raise DomainError(f"unknown map kind {kind!r}")
    extra = set(params) - allowed[kind]
    if extra:
        raise DomainError(f"unexpected parameter {sorted(extra)[0]!r} for {kind}")
    missing = allowed[kind] - set(params)
    if missing:
        raise DomainError(f"missing parameter {sorted(missing)[0]!r} for {kind}")
    try:
        if kind == "identity":
            return AnalyticMap.identity()
        if kind == "epicycloid":
            return AnalyticMap.epicycloid(int(params["n"]))
        if kind == "sine":
            return AnalyticMap.sine(float(params["d"]))
    except ValueError as exc:
        if isinstance(exc, DomainError):
            raise
        raise DomainError(f"bad numeric value in {text!r}") from None
    coeffs = [parse_complex(c) for c in params["coeffs"].split(",")]
    if kind == "poly":
        return AnalyticMap.polynomial(coeffs)
    try:
        radius = float(params["radius"])
    except ValueError:
        raise DomainError(f"bad radius {params['radius']!r}") from None
    return AnalyticMap.power_series(coeffs, radius)
