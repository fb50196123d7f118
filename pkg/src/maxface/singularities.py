"""Classification of the singular points prescribed by the curve data.

Every point of the data curve is singular for the constructed surface
(|g| = 1 there).  The degeneracy function

    H(t) = l1'(t) a3'(t) + l2'(t) b3(t)

separates generic points (H != 0, cuspidal-edge-like front points) from
degeneracy candidates (H = 0).  A candidate t0 is a swallowtail when

    H(t0) = 0,   H'(t0) != 0,   D(t0) != 0,

where D is the turning rate of whichever null field dominates at t0:

    D_alpha = a1' a2'' - a2' a1''   if |a3'(t0)| >= |b3(t0)|,
    D_beta  = b1 b2'  - b2 b1'      otherwise.

(The two quantities are tied to one rotation rate: D_alpha = theta' a3'^2 and
D_beta = theta' b3^2 for the common phase theta of the shared null direction,
so the dominant one is the numerically reliable witness for theta' != 0.)

When H vanishes identically the whole curve is a shrinking component: no
isolated classification applies, and if the image of the curve is a single
point the surface is generalized cone-like.

The A-function A = g'/(g^2 f) of the Weierstrass pair provides a cross-check:
on the curve its real part detects the front property and its imaginary part
is a negative multiple of H.  Both the direct value and the closed form built
from the curve fields are recorded in point diagnostics.
"""

from __future__ import annotations

import dataclasses
import enum
import math
from typing import Callable

import numpy as np
from scipy.optimize import brentq

from .bjorling import (
    BjorlingData,
    MaxfaceSolution,
    MaxfaceError,
    PhiForm,
    Vec3Field,
    build_phi,
    weierstrass_from_phi,
)
from .laurent import LaurentPoly, RationalMap


class DegenerateDirection(MaxfaceError):
    """Both prescribed fields have vanishing third component."""


@dataclasses.dataclass(frozen=True)
class Tolerances:
    """Numerical thresholds for the singularity decision rules.

    root:      |H| below this (times the data scale) counts as a zero
    nonzero:   |H'| or |D| above this counts as nonvanishing
    identity:  symbolic identity residuals
    conelike:  maximal excursion of the image of a shrinking curve
    separation: minimal parameter distance between distinct roots
    """

    root: float = 1e-12
    nonzero: float = 1e-8
    identity: float = 1e-10
    conelike: float = 1e-8
    separation: float = 1e-6
    dip_fraction: float = 1e-4


class SingularityKind(enum.Enum):
    SWALLOWTAIL = "swallowtail"
    SHRINKING_COMPONENT = "shrinking_component"
    FRONT_NON_SWALLOWTAIL = "front_non_swallowtail"
    INDETERMINATE = "indeterminate"


@dataclasses.dataclass(frozen=True)
class Diagnostics:
    """Everything measured at one parameter value of the singular curve."""

    t: float
    h: float
    h_prime: float
    d_alpha: float
    d_beta: float
    branch: str
    a_direct: complex
    a_fields: complex
    kind: SingularityKind


@dataclasses.dataclass(frozen=True)
class SingularPointReport:
    """Roots of H on the curve, classified, with bookkeeping."""

    points: tuple[Diagnostics, ...]
    swallowtail_parameters: tuple[float, ...]
    touch_parameters: tuple[float, ...]
    identically_degenerate: bool
    min_image_separation: float | None
    resolution: int

    @property
    def swallowtail_count(self) -> int:
        return len(self.swallowtail_parameters)


@dataclasses.dataclass(frozen=True)
class ShrinkingReport:
    is_shrinking: bool
    h_residual: float
    d_dominant_min: float


@dataclasses.dataclass(frozen=True)
class ConelikeReport:
    is_conelike: bool
    shrinking: ShrinkingReport
    max_excursion: float
    cone_point: tuple[float, float, float] | None


# ---------------------------------------------------------------------------
# basic derived objects


@dataclasses.dataclass(frozen=True)
class NullDirection:
    """eta(t) = -b3(t) + i a3'(t): the direction annihilated by dX on the curve."""

    re_part: object
    im_part: object

    def __call__(self, t):
        re = np.asarray(self.re_part(t), dtype=float)
        im = np.asarray(self.im_part(t), dtype=float)
        out = re + 1j * im
        return complex(out) if out.shape == () else out


def null_direction(data: BjorlingData) -> NullDirection:
    b3 = data.beta.x3
    a3p = data.alpha_prime.x3
    if b3.max_abs_coeff() < 1e-13 and a3p.max_abs_coeff() < 1e-13:
        raise DegenerateDirection(
            "both third components vanish; no null direction is determined")
    return NullDirection(re_part=-1.0 * b3, im_part=a3p)


def null_direction_residual(data: BjorlingData, samples: int = 512) -> float:
    """max_t |Re(phi(z(t)) eta(t))|; zero for admissible data."""
    phi = build_phi(data)
    eta = null_direction(data)
    ts = data.curve.t_grid(samples)
    vals = phi(data.curve.z_of_t(ts)) * eta(ts)[..., None]
    return float(np.max(np.abs(vals.real)))


def h_function(data: BjorlingData):
    """The degeneracy function H = l1' a3' + l2' b3 as a scalar polynomial."""
    l1p = data.curve.lambda1.differentiate()
    l2p = data.curve.lambda2.differentiate()
    return l1p * data.alpha_prime.x3 + l2p * data.beta.x3


def h_and_h_prime(data: BjorlingData):
    h = h_function(data)
    return h, h.differentiate()


def a_function(w) -> RationalMap:
    """A = g'/(g^2 f) as an unreduced quotient of Laurent polynomials."""
    f = w.f
    if isinstance(w.g, LaurentPoly):
        den = w.g * w.g * f
        if den.is_zero:
            raise ZeroDivisionError("A-function denominator g^2 f vanishes")
        return RationalMap(num=w.g.differentiate(), den=den)
    num_g, den_g = w.g.num, w.g.den
    # g = N/D gives A = (N'D - N D')/(N^2 f)
    num = num_g.differentiate() * den_g - num_g * den_g.differentiate()
    den = num_g * num_g * f
    if den.is_zero:
        raise ZeroDivisionError("A-function denominator g^2 f vanishes")
    return RationalMap(num=num, den=den)


# ---------------------------------------------------------------------------
# the analysis bundle


class SingularAnalysis:
    """Symbolic quantities for one data set, built once and reused."""

    def __init__(self, data: BjorlingData, tol: Tolerances | None = None):
        self.data = data
        self.tol = tol or Tolerances()
        self.phi = build_phi(data)
        self.weierstrass = weierstrass_from_phi(self.phi)
        self.a_rational = a_function(self.weierstrass)

        curve = data.curve
        self.l1p = curve.lambda1.differentiate()
        self.l2p = curve.lambda2.differentiate()
        a, b = data.alpha_prime, data.beta
        self.h = self.l1p * a.x3 + self.l2p * b.x3
        self.h_prime = self.h.differentiate()
        a2 = a.differentiate()
        b1 = b.differentiate()
        self.d_alpha = a.x1 * a2.x2 - a.x2 * a2.x1
        self.d_beta = b.x1 * b1.x2 - b.x2 * b1.x1
        self.alpha3p = a.x3
        self.beta3 = b.x3

        self.h_scale = max(1.0, a.max_abs_coeff(), b.max_abs_coeff())
        self.identically_degenerate = (
            self.h.max_abs_coeff() <= 1e-12 * self.h_scale)

    # -- closed form for A from the curve fields --------------------------

    def a_fields(self, t):
        ts = np.asarray(t, dtype=float)
        l1p, l2p = self.l1p(ts), self.l2p(ts)
        a3p, b3 = np.asarray(self.alpha3p(ts)), np.asarray(self.beta3(ts))
        da, db = np.asarray(self.d_alpha(ts)), np.asarray(self.d_beta(ts))
        dom_alpha = np.abs(a3p) >= np.abs(b3)
        num = np.where(dom_alpha, da, db)
        den = np.where(dom_alpha, a3p, b3) ** 2
        theta_prime = num / den
        h = np.asarray(self.h(ts))
        lam_sq = np.asarray(l1p) ** 2 + np.asarray(l2p) ** 2
        mag = a3p**2 + b3**2
        val = -theta_prime * ((-b3 * l1p + a3p * l2p) + 1j * h) / (lam_sq * mag)
        return complex(val) if val.shape == () else val

    def a_direct(self, t):
        z = self.data.curve.z_of_t(t)
        with np.errstate(divide="ignore", invalid="ignore"):
            try:
                return complex(self.a_rational(z))
            except ZeroDivisionError:
                return complex(float("nan"), float("nan"))

    # -- pointwise decision -------------------------------------------------

    def classify(self, t: float) -> Diagnostics:
        tol = self.tol
        h = float(self.h(t))
        hp = float(self.h_prime(t))
        da = float(self.d_alpha(t))
        db = float(self.d_beta(t))
        a3, b3 = abs(float(self.alpha3p(t))), abs(float(self.beta3(t)))
        branch = "alpha" if a3 >= b3 else "beta"
        d_dom = da if branch == "alpha" else db
        a_direct = self.a_direct(t)
        front = (not math.isnan(a_direct.real)) and abs(a_direct.real) > tol.nonzero

        s_abs = abs(h)
        if s_abs > tol.nonzero:
            kind = (SingularityKind.FRONT_NON_SWALLOWTAIL if front
                    else SingularityKind.INDETERMINATE)
        elif s_abs <= tol.root * self.h_scale:
            if abs(hp) > tol.nonzero and abs(d_dom) > tol.nonzero:
                kind = SingularityKind.SWALLOWTAIL
            elif abs(hp) <= tol.root * self.h_scale or abs(d_dom) <= tol.root:
                # definitely degenerate: H' or D vanishes at the root
                kind = (SingularityKind.FRONT_NON_SWALLOWTAIL if front
                        else SingularityKind.INDETERMINATE)
            else:
                kind = SingularityKind.INDETERMINATE
        else:
            kind = SingularityKind.INDETERMINATE
        return Diagnostics(t=float(t), h=h, h_prime=hp, d_alpha=da, d_beta=db,
                           branch=branch, a_direct=a_direct,
                           a_fields=self.a_fields(float(t)), kind=kind)


def classify_point(data: BjorlingData, t: float,
                   tol: Tolerances | None = None) -> Diagnostics:
    return SingularAnalysis(data, tol).classify(t)


# ---------------------------------------------------------------------------
# root hunting


def _dedupe_sorted(roots: list[float], sep: float) -> list[float]:
    out: list[float] = []
    for r in roots:
        if out and r - out[-1] < sep:
            continue
        out.append(r)
    return out


def find_swallowtails(data: BjorlingData, tol: Tolerances | None = None,
                      resolution: int = 2048) -> SingularPointReport:
    """Locate and classify all roots of H along the curve.

    Sign changes are bisected; zero-touching dips (double roots) are refined
    through the sign change of H'; segment endpoints are tested directly.
    """
    if resolution < 256:
        raise ValueError("resolution must be at least 256")
    an = SingularAnalysis(data, tol)
    tol = an.tol
    curve = data.curve

    if an.identically_degenerate:
        return SingularPointReport(
            points=(), swallowtail_parameters=(), touch_parameters=(),
            identically_degenerate=True, min_image_separation=None,
            resolution=resolution)

    closed = curve.closed
    span = curve.param_span()
    period = span[1] - span[0]
    ts = curve.t_grid(resolution)
    if closed:
        ts_ext = np.append(ts, ts[0] + period)
    else:
        ts_ext = ts
    s = np.asarray(an.h(ts_ext), dtype=float)
    scale = max(1.0, float(np.max(np.abs(s))))

    h_scalar: Callable[[float], float] = lambda x: float(an.h(x))
    hp_scalar: Callable[[float], float] = lambda x: float(an.h_prime(x))

    roots: list[float] = []
    # grid hits and sign changes
    grid_zero = np.abs(s) <= 1e-15 * scale
    for i in range(len(ts_ext) - 1):
        if grid_zero[i]:
            roots.append(float(ts_ext[i]))
        elif not grid_zero[i + 1] and s[i] * s[i + 1] < 0.0:
            roots.append(float(brentq(h_scalar, ts_ext[i], ts_ext[i + 1],
                                      xtol=1e-15, rtol=8.9e-16)))
    if not closed and grid_zero[-1]:
        roots.append(float(ts_ext[-1]))

    # touch points: |s| dips to zero without a sign change
    touch: list[float] = []
    dip_level = tol.dip_fraction * scale
    step = float(ts[1] - ts[0])
    n_base = resolution if closed else len(ts)
    for i in range(n_base):
        if closed:
            lo, hi = (i - 1) % n_base, (i + 1) % n_base
        else:
            if i == 0 or i == n_base - 1:
                continue
            lo, hi = i - 1, i + 1
        si = abs(s[i])
        if si > dip_level or si <= 1e-15 * scale:
            continue
        if not (si <= abs(s[lo]) and si <= abs(s[hi])):
            continue
        if roots and min(abs(ts[i] - r) for r in roots) < 4 * step:
            continue
        t_lo, t_hi = ts[i] - step, ts[i] + step
        try:
            if hp_scalar(t_lo) * hp_scalar(t_hi) >= 0:
                continue
            t_star = float(brentq(hp_scalar, t_lo, t_hi, xtol=1e-15, rtol=8.9e-16))
        except ValueError:
            continue
        if abs(h_scalar(t_star)) <= tol.root * scale:
            touch.append(t_star)

    if closed:
        roots = [((r - span[0]) % period) + span[0] for r in roots]
        touch = [((r - span[0]) % period) + span[0] for r in touch]
    all_roots = sorted(set(roots) | set(touch))
    all_roots = _dedupe_sorted(all_roots, tol.separation)
    if closed and len(all_roots) > 1 and period - (all_roots[-1] - all_roots[0]) < tol.separation:
        all_roots.pop()

    points = tuple(an.classify(r) for r in all_roots)
    swallows = tuple(p.t for p in points if p.kind is SingularityKind.SWALLOWTAIL)
    # a touch point is a root crossed without a sign change of H
    touch_set = [p.t for p in points
                 if abs(p.h) <= tol.root * scale and abs(p.h_prime) <= tol.nonzero]

    min_sep = None
    if len(all_roots) >= 2:
        l1, l2 = curve.lambda1, curve.lambda2
        xs = np.array([[l1(r), l2(r)] for r in all_roots])
        diffs = xs[:, None, :] - xs[None, :, :]
        dist = np.sqrt(np.sum(diffs**2, axis=-1))
        dist[np.diag_indices(len(all_roots))] = np.inf
        min_sep = float(np.min(dist))

    return SingularPointReport(
        points=points, swallowtail_parameters=swallows,
        touch_parameters=tuple(touch_set),
        identically_degenerate=False, min_image_separation=min_sep,
        resolution=resolution)


# ---------------------------------------------------------------------------
# global shapes


def check_shrinking(data: BjorlingData, tol: Tolerances | None = None,
                    samples: int = 1024) -> ShrinkingReport:
    """H identically zero and the dominant turning rate bounded away from 0."""
    tol = tol or Tolerances()
    an = SingularAnalysis(data, tol)
    ts = data.curve.t_grid(samples)
    a3p = np.asarray(an.alpha3p(ts))
    b3 = np.asarray(an.beta3(ts))
    da = np.asarray(an.d_alpha(ts))
    db = np.asarray(an.d_beta(ts))
    d_dom = np.where(np.abs(a3p) >= np.abs(b3), da, db)
    d_min = float(np.min(np.abs(d_dom)))
    residual = an.h.max_abs_coeff()
    return ShrinkingReport(
        is_shrinking=an.identically_degenerate and d_min > tol.nonzero,
        h_residual=residual,
        d_dominant_min=d_min)


def check_generalized_conelike(data: BjorlingData, sol: MaxfaceSolution,
                               tol: Tolerances | None = None,
                               samples: int = 1024) -> ConelikeReport:
    """Shrinking data whose curve image is one point (the cone point)."""
    tol = tol or Tolerances()
    shrink = check_shrinking(data, tol, samples)
    if not shrink.is_shrinking:
        return ConelikeReport(is_conelike=False, shrinking=shrink,
                              max_excursion=float("nan"), cone_point=None)
    ts = data.curve.t_grid(samples)
    pts = sol.on_curve(ts)
    center = pts[0]
    excursion = float(np.max(np.linalg.norm(pts - center, axis=-1)))
    ok = excursion < tol.conelike
    return ConelikeReport(
        is_conelike=ok, shrinking=shrink, max_excursion=excursion,
        cone_point=tuple(float(c) for c in center) if ok else None)
