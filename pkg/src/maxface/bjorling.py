"""Singular Bjorling data and the holomorphic representation it generates.

A data set consists of a planar analytic curve lambda(t) = (l1(t), l2(t)),
a null velocity field alpha'(t) and a null field beta(t) in Lorentz-Minkowski
3-space (inner product x1*y1 + x2*y2 - x3*y3), subject to

    lambda' never vanishes,
    <alpha', alpha'> = 0,   <beta, beta> = 0,   <alpha', beta> = 0,
    (alpha'(t), beta(t)) != (0, 0) for every t.

The curve is realized inside the complex plane (the unit circle as z = e^{it},
a real segment as z = t), and the combination alpha' - i beta extends off the
curve to a holomorphic 3-vector phi.  The surface is

    X(z) = Re integral of phi dz   from a basepoint on the curve,

which is spacelike and zero mean curvature away from the curve, and the curve
itself is the prescribed singular set: the Weierstrass pair recovered from phi
via f = phi1 - i phi2, g = -phi3 / f satisfies |g| = 1 along the curve.

Only curves with symbolic (trig or ordinary polynomial) components support the
construction; ``GeneralAnalytic`` records data on other curves but build_phi
refuses it.
"""

from __future__ import annotations

import dataclasses
import math
from typing import Callable, Sequence, Union

import numpy as np

from .laurent import (
    Annulus,
    Antiderivative,
    Domain,
    LaurentPoly,
    RationalMap,
    RealPoly,
    Rectangle,
    TrigPoly,
    divide_exact,
)


class MaxfaceError(Exception):
    """Base class for the package's mathematical failure modes."""


class InvalidDataError(MaxfaceError):
    """The prescribed curve/field data violate the admissibility conditions."""


class PeriodError(MaxfaceError):
    """Re of the integral of phi is multivalued on the requested domain."""


class UnsupportedCurveError(MaxfaceError):
    """The curve has no symbolic model, so phi cannot be extended."""


# ---------------------------------------------------------------------------
# curves


class UnitCircle:
    """lambda(t) = (cos t, sin t), realized as z = e^{it}, t in [0, 2pi)."""

    scalar_family = TrigPoly
    closed = True
    symbolic = True

    def __init__(self):
        self.lambda1 = TrigPoly.cosine(1)
        self.lambda2 = TrigPoly.sine(1)

    def t_grid(self, samples: int) -> np.ndarray:
        return np.linspace(0.0, 2.0 * math.pi, samples, endpoint=False)

    def param_span(self) -> tuple[float, float]:
        return (0.0, 2.0 * math.pi)

    def z_of_t(self, t):
        return np.exp(1j * np.asarray(t, dtype=float)) if np.ndim(t) else complex(np.exp(1j * t))

    def extend(self, p: TrigPoly) -> LaurentPoly:
        if not isinstance(p, TrigPoly):
            raise TypeError("unit-circle data must use TrigPoly components")
        return p.to_laurent()

    def __repr__(self):
        return "UnitCircle()"


class Segment:
    """lambda(t) = (t, 0) for t in [a, b], realized as z = t on the real axis."""

    scalar_family = RealPoly
    closed = False
    symbolic = True

    def __init__(self, a: float, b: float):
        if not a < b:
            raise ValueError("segment requires a < b")
        self.a = float(a)
        self.b = float(b)
        self.lambda1 = RealPoly.identity()
        self.lambda2 = RealPoly.zero()

    def t_grid(self, samples: int) -> np.ndarray:
        return np.linspace(self.a, self.b, samples)

    def param_span(self) -> tuple[float, float]:
        return (self.a, self.b)

    def z_of_t(self, t):
        return np.asarray(t, dtype=complex) if np.ndim(t) else complex(t)

    def extend(self, p: RealPoly) -> LaurentPoly:
        if not isinstance(p, RealPoly):
            raise TypeError("segment data must use RealPoly components")
        return p.to_laurent()

    def __repr__(self):
        return f"Segment({self.a}, {self.b})"


@dataclasses.dataclass
class GeneralAnalytic:
    """A curve given only by callables; recorded but not constructible."""

    lambda1: Callable[[float], float]
    lambda2: Callable[[float], float]
    t_min: float
    t_max: float
    closed: bool = False
    symbolic = False

    def t_grid(self, samples: int) -> np.ndarray:
        if self.closed:
            return np.linspace(self.t_min, self.t_max, samples, endpoint=False)
        return np.linspace(self.t_min, self.t_max, samples)

    def param_span(self) -> tuple[float, float]:
        return (self.t_min, self.t_max)


Curve = Union[UnitCircle, Segment, GeneralAnalytic]


# ---------------------------------------------------------------------------
# vector fields along the curve


class Vec3Field:
    """Three scalar components (all TrigPoly or all RealPoly) along the curve."""

    __slots__ = ("x1", "x2", "x3")

    def __init__(self, x1, x2, x3):
        fam = type(x1)
        if fam not in (TrigPoly, RealPoly):
            raise TypeError("components must be TrigPoly or RealPoly")
        if not (isinstance(x2, fam) and isinstance(x3, fam)):
            raise TypeError("all three components must share one scalar family")
        self.x1, self.x2, self.x3 = x1, x2, x3

    @classmethod
    def zero(cls, family) -> "Vec3Field":
        z = family.zero()
        return cls(z, z, z)

    @property
    def components(self):
        return (self.x1, self.x2, self.x3)

    @property
    def family(self):
        return type(self.x1)

    def __call__(self, t) -> np.ndarray:
        vals = [np.asarray(c(t), dtype=float) for c in self.components]
        return np.stack(vals, axis=-1)

    def differentiate(self) -> "Vec3Field":
        return Vec3Field(*(c.differentiate() for c in self.components))

    def __add__(self, other):
        if not isinstance(other, Vec3Field):
            return NotImplemented
        return Vec3Field(self.x1 + other.x1, self.x2 + other.x2, self.x3 + other.x3)

    def __sub__(self, other):
        if not isinstance(other, Vec3Field):
            return NotImplemented
        return Vec3Field(self.x1 - other.x1, self.x2 - other.x2, self.x3 - other.x3)

    def scale(self, s) -> "Vec3Field":
        """Multiply every component by a scalar polynomial or a number."""
        return Vec3Field(self.x1 * s, self.x2 * s, self.x3 * s)

    def minkowski(self, other: "Vec3Field"):
        """Symbolic Lorentz product x1*y1 + x2*y2 - x3*y3."""
        return self.x1 * other.x1 + self.x2 * other.x2 - self.x3 * other.x3

    def euclid_sq(self):
        return self.x1 * self.x1 + self.x2 * self.x2 + self.x3 * self.x3

    def max_abs_coeff(self) -> float:
        return max(c.max_abs_coeff() for c in self.components)

    def __repr__(self):
        return f"Vec3Field({self.x1!r}, {self.x2!r}, {self.x3!r})"


def minkowski_product(u, v):
    """Numeric Lorentz product on trailing-axis-3 arrays."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    return u[..., 0] * v[..., 0] + u[..., 1] * v[..., 1] - u[..., 2] * v[..., 2]


# ---------------------------------------------------------------------------
# data and validation


@dataclasses.dataclass
class BjorlingData:
    """Curve plus the two prescribed null fields along it."""

    curve: Curve
    alpha_prime: Vec3Field
    beta: Vec3Field

    def __post_init__(self):
        if getattr(self.curve, "symbolic", False):
            fam = self.curve.scalar_family
            if self.alpha_prime.family is not fam or self.beta.family is not fam:
                raise TypeError(
                    f"{type(self.curve).__name__} data needs {fam.__name__} components"
                )


@dataclasses.dataclass(frozen=True)
class ValidationReport:
    """Measured residuals and verdicts for the five admissibility conditions.

    Null and orthogonality conditions are checked symbolically (largest
    coefficient of the exact product polynomial); nonvanishing conditions are
    minima over a parameter grid.
    """

    lambda_prime_min: float
    alpha_prime_null_residual: float
    beta_null_residual: float
    orthogonality_residual: float
    data_min_square: float
    lambda_prime_nonvanishing: bool
    alpha_prime_null: bool
    beta_null: bool
    orthogonality: bool
    no_common_zero: bool

    @property
    def ok(self) -> bool:
        return (self.lambda_prime_nonvanishing and self.alpha_prime_null
                and self.beta_null and self.orthogonality and self.no_common_zero)

    def failures(self) -> list[str]:
        names = ("lambda_prime_nonvanishing", "alpha_prime_null", "beta_null",
                 "orthogonality", "no_common_zero")
        return [n for n in names if not getattr(self, n)]


NULL_RESIDUAL_TOL = 1e-9
NONVANISHING_TOL = 1e-9


def validate(data: BjorlingData, samples: int = 1024) -> ValidationReport:
    """Check the admissibility conditions; reports, never raises."""
    curve = data.curve
    if not getattr(curve, "symbolic", False):
        raise UnsupportedCurveError("validation needs a symbolic curve model")
    ts = curve.t_grid(samples)
    a, b = data.alpha_prime, data.beta

    l1p = curve.lambda1.differentiate()
    l2p = curve.lambda2.differentiate()
    lam_sq = l1p * l1p + l2p * l2p
    lam_min = float(np.min(lam_sq(ts)))

    scale = max(1.0, a.max_abs_coeff(), b.max_abs_coeff()) ** 2
    r_alpha = a.minkowski(a).max_abs_coeff()
    r_beta = b.minkowski(b).max_abs_coeff()
    r_orth = a.minkowski(b).max_abs_coeff()

    data_sq = a.euclid_sq() + b.euclid_sq()
    data_min = float(np.min(data_sq(ts)))

    return ValidationReport(
        lambda_prime_min=math.sqrt(max(lam_min, 0.0)),
        alpha_prime_null_residual=r_alpha,
        beta_null_residual=r_beta,
        orthogonality_residual=r_orth,
        data_min_square=data_min,
        lambda_prime_nonvanishing=lam_min > NONVANISHING_TOL**2,
        alpha_prime_null=r_alpha <= NULL_RESIDUAL_TOL * scale,
        beta_null=r_beta <= NULL_RESIDUAL_TOL * scale,
        orthogonality=r_orth <= NULL_RESIDUAL_TOL * scale,
        no_common_zero=data_min > NONVANISHING_TOL,
    )


# ---------------------------------------------------------------------------
# the holomorphic form


@dataclasses.dataclass(frozen=True)
class PhiForm:
    """Holomorphic 3-vector phi with phi(z(t)) = alpha'(t) - i beta(t)."""

    components: tuple[LaurentPoly, LaurentPoly, LaurentPoly]
    curve: Curve | None = None

    def __iter__(self):
        return iter(self.components)

    def __call__(self, z) -> np.ndarray:
        return np.stack([np.asarray(c(z), dtype=complex) for c in self.components],
                        axis=-1)

    def antiderivatives(self) -> tuple[Antiderivative, ...]:
        return tuple(c.antiderivative() for c in self.components)


RESTRICTION_TOL = 1e-10


def build_phi(data: BjorlingData, samples: int = 1024) -> PhiForm:
    """Extend alpha' - i beta off the curve; raises on inadmissible data."""
    curve = data.curve
    if not getattr(curve, "symbolic", False):
        raise UnsupportedCurveError(
            "phi extension is implemented for UnitCircle and Segment curves only")
    report = validate(data, samples=samples)
    if not report.ok:
        raise InvalidDataError(
            "data violate admissibility conditions: " + ", ".join(report.failures()))
    comps = tuple(
        curve.extend(ca) + (-1j) * curve.extend(cb)
        for ca, cb in zip(data.alpha_prime.components, data.beta.components)
    )
    # restriction sanity: phi on the curve reproduces the prescribed fields
    ts = curve.t_grid(256)
    zs = curve.z_of_t(ts)
    target = data.alpha_prime(ts) - 1j * data.beta(ts)
    got = np.stack([c(zs) for c in comps], axis=-1)
    scale = max(1.0, float(np.max(np.abs(target))))
    err = float(np.max(np.abs(got - target)))
    if err > RESTRICTION_TOL * scale:
        raise MaxfaceError(f"extension failed to restrict to the data (err={err:.3e})")
    return PhiForm(components=comps, curve=curve)


# ---------------------------------------------------------------------------
# periods


@dataclasses.dataclass(frozen=True)
class PeriodReport:
    """Single-valuedness of Re integral phi dz on the domain.

    On an annulus the obstruction per component is the imaginary part of the
    z^-1 coefficient (Re of the loop integral equals -2 pi Im c_-1).  On a
    rectangle avoiding the origin there is no obstruction; a rectangle
    containing the origin is rejected when phi has negative exponents.
    """

    log_coeffs: tuple[complex, complex, complex]
    obstructions: tuple[float, float, float]
    ok: bool
    reason: str = ""

    def loop_re_periods(self) -> tuple[float, float, float]:
        return tuple(-2.0 * math.pi * c.imag for c in self.log_coeffs)


PERIOD_TOL = 1e-12


def check_periods(phi: PhiForm | Sequence[LaurentPoly], domain: Domain,
                  tol: float = PERIOD_TOL) -> PeriodReport:
    comps = tuple(phi.components if isinstance(phi, PhiForm) else phi)
    logs = tuple(c.c(-1) for c in comps)
    if isinstance(domain, Rectangle):
        has_pole = any((not c.is_zero) and c.valuation < 0 for c in comps)
        if has_pole and domain.contains(0.0):
            return PeriodReport(logs, (0.0, 0.0, 0.0), ok=False,
                                reason="pole of phi inside the rectangle")
        return PeriodReport(logs, (0.0, 0.0, 0.0), ok=True)
    obs = tuple(abs(c.imag) for c in logs)
    ok = all(o <= tol for o in obs)
    reason = "" if ok else "Re of a loop integral of phi is nonzero"
    return PeriodReport(logs, obs, ok=ok, reason=reason)


# ---------------------------------------------------------------------------
# the surface


@dataclasses.dataclass(frozen=True)
class MaxfaceSolution:
    """X(z) = origin + Re integral_{z0}^{z} phi, with z0 on the curve."""

    data: BjorlingData
    phi: PhiForm
    antiderivatives: tuple[Antiderivative, Antiderivative, Antiderivative]
    domain: Domain
    z0: complex
    origin: tuple[float, float, float] = (0.0, 0.0, 0.0)

    def immersion(self, z, check_domain: bool = True) -> np.ndarray:
        zs = np.asarray(z, dtype=complex)
        if check_domain and not bool(np.all(self.domain.contains_mask(zs, tol=1e-9))):
            raise ValueError("evaluation point outside the solution domain")
        cols = [a.re_integral(zs, self.z0) + o
                for a, o in zip(self.antiderivatives, self.origin)]
        out = np.stack([np.asarray(c, dtype=float) for c in cols], axis=-1)
        return out

    def on_curve(self, t) -> np.ndarray:
        return self.immersion(self.data.curve.z_of_t(t), check_domain=False)


def solve(data: BjorlingData, domain: Domain, t0: float = 0.0,
          origin: tuple[float, float, float] = (0.0, 0.0, 0.0)) -> MaxfaceSolution:
    """Construct the maxface with the prescribed singular curve.

    Raises InvalidDataError for inadmissible data and PeriodError when Re of
    the integral is multivalued on the domain.
    """
    phi = build_phi(data)
    report = check_periods(phi, domain)
    if not report.ok:
        raise PeriodError(
            f"{report.reason}; Re loop periods = "
            + ", ".join(f"{p:.6g}" for p in report.loop_re_periods()))
    z0 = data.curve.z_of_t(t0)
    if not domain.contains(z0, tol=1e-9):
        raise ValueError(f"basepoint z0 = {z0:.6g} lies outside the domain")
    return MaxfaceSolution(
        data=data, phi=phi, antiderivatives=phi.antiderivatives(),
        domain=domain, z0=complex(z0), origin=tuple(float(c) for c in origin))


def eval_immersion(sol: MaxfaceSolution, z, check_domain: bool = True) -> np.ndarray:
    return sol.immersion(z, check_domain=check_domain)


# ---------------------------------------------------------------------------
# Weierstrass pair


@dataclasses.dataclass(frozen=True)
class WeierstrassData:
    """Pair (g, f) with phi = ((1+g^2)/2, i(1-g^2)/2, -g) * f.

    g is a LaurentPoly when -phi3/f divides exactly, otherwise the unreduced
    RationalMap -phi3/f.  The induced metric is metric_factor * |dz|^2 and
    degenerates exactly where |g| = 1.
    """

    g: LaurentPoly | RationalMap
    f: LaurentPoly

    def g_values(self, z):
        return self.g(z)

    def metric_factor(self, z):
        gz = np.asarray(self.g(z), dtype=complex)
        fz = np.asarray(self.f(z), dtype=complex)
        return 0.5 * (np.abs(fz) * (1.0 - np.abs(gz) ** 2)) ** 2


def weierstrass_from_phi(phi: PhiForm | Sequence[LaurentPoly]) -> WeierstrassData:
    comps = tuple(phi.components if isinstance(phi, PhiForm) else phi)
    p1, p2, p3 = comps
    f = p1 + (-1j) * p2
    if f.is_zero:
        raise MaxfaceError("f = phi1 - i phi2 vanishes identically")
    num = -1 * p3
    quotient = divide_exact(num, f)
    g = quotient if quotient is not None else RationalMap(num=num, den=f)
    return WeierstrassData(g=g, f=f)


def phi_from_weierstrass(w: WeierstrassData) -> tuple[LaurentPoly, LaurentPoly, LaurentPoly]:
    if not isinstance(w.g, LaurentPoly):
        raise MaxfaceError(
            "phi reconstruction needs a polynomial g; this pair carries a quotient")
    g2f = w.g * w.g * w.f
    return (0.5 * (w.f + g2f), 0.5j * (w.f - g2f), -1 * (w.g * w.f))


def singular_set_on_curve(w: WeierstrassData, curve: Curve,
                          samples: int = 1024) -> float:
    """max_t | |g(z(t))| - 1 |: zero iff the curve lies in the singular set."""
    ts = curve.t_grid(samples)
    zs = curve.z_of_t(ts)
    return float(np.max(np.abs(np.abs(w.g(zs)) - 1.0)))
