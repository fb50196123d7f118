"""Scaling deformations of shrinking singular curves.

Starting from data whose curve is a shrinking component (H identically zero),
a scaling function f_n with simple zeros rotates the two null fields into

    alpha_n' = alpha' + f_n beta,      beta_n = beta - f_n alpha',

which leaves admissibility intact (both fields stay proportional to the same
null direction) and turns H into a multiple of f_n: each simple zero of f_n
becomes a swallowtail candidate.  On the holomorphic side the deformation is
a rank-one update

    psi_n = phi + i gamma_n,   gamma_n = extension of f_n (alpha' - i beta),

so the deformed surface differs from the cone-like base by
Re integral of i gamma_n, and sup-norm convergence X_n -> X on a fixed domain
is certified by path length times a rigorous coefficient bound for gamma_n.

The two stock families:

* circle:   f_n(t) = cos(nt) / (2^{n+2} n), zeros (2k+1)pi/(2n), 2n of them;
* segment:  f_n(t) = prod_{i<=n} (t - 1/i) / ((r+1)^n n), zeros 1/i,
            r = max(|a|, |b|).
"""

from __future__ import annotations

import dataclasses
import math
from typing import Callable, Sequence

import numpy as np

from .bjorling import (
    BjorlingData,
    InvalidDataError,
    MaxfaceError,
    PhiForm,
    build_phi,
    check_periods,
    solve,
    validate,
)
from .laurent import (
    Annulus,
    Domain,
    LaurentPoly,
    RealPoly,
    Rectangle,
    TrigPoly,
    coefficient_bound,
)
from .singularities import Tolerances, check_shrinking, find_swallowtails


# ---------------------------------------------------------------------------
# scaling families


@dataclasses.dataclass(frozen=True)
class ScalingFamily:
    """Indexed scalar factors f_n on the curve with their prescribed zeros."""

    kind: str
    scalar_of: Callable[[int], object]
    zeros_of: Callable[[int], tuple[float, ...]]

    def scalar(self, n: int):
        if n < 1:
            raise ValueError("family index n must be >= 1")
        return self.scalar_of(n)

    def zeros(self, n: int) -> tuple[float, ...]:
        if n < 1:
            raise ValueError("family index n must be >= 1")
        return self.zeros_of(n)


def circle_family() -> ScalingFamily:
    def scalar(n: int) -> TrigPoly:
        return TrigPoly.cosine(n, 1.0 / (2 ** (n + 2) * n))

    def zeros(n: int) -> tuple[float, ...]:
        return tuple((2 * k + 1) * math.pi / (2 * n) for k in range(2 * n))

    return ScalingFamily(kind="circle", scalar_of=scalar, zeros_of=zeros)


def segment_family(a: float, b: float) -> ScalingFamily:
    r = max(abs(a), abs(b))

    def scalar(n: int) -> RealPoly:
        p = RealPoly.constant(1.0 / ((r + 1.0) ** n * n))
        for i in range(1, n + 1):
            p = p * RealPoly([-1.0 / i, 1.0])
        return p

    def zeros(n: int) -> tuple[float, ...]:
        return tuple(1.0 / i for i in range(n, 0, -1))

    return ScalingFamily(kind="segment", scalar_of=scalar, zeros_of=zeros)


def custom_family(scalar_of: Callable[[int], object],
                  zeros_of: Callable[[int], tuple[float, ...]]) -> ScalingFamily:
    return ScalingFamily(kind="custom", scalar_of=scalar_of, zeros_of=zeros_of)


# ---------------------------------------------------------------------------
# axioms


@dataclasses.dataclass(frozen=True)
class AxiomRow:
    n: int
    zeros: tuple[float, ...]
    zeros_in_span: bool
    max_abs_at_zeros: float
    min_abs_deriv_at_zeros: float
    zeros_distinct: bool
    restriction_residual: float
    loop_obstruction: float
    norm_bound: float

    def ok(self, tol: Tolerances) -> bool:
        return (self.zeros_in_span
                and self.max_abs_at_zeros <= 1e-12
                and self.min_abs_deriv_at_zeros > tol.nonzero
                and self.zeros_distinct
                and self.restriction_residual <= 1e-10
                and self.loop_obstruction <= 1e-12)


@dataclasses.dataclass(frozen=True)
class AxiomReport:
    rows: tuple[AxiomRow, ...]
    norms_decreasing: bool
    ok: bool


def _gamma_components(base: BjorlingData, fn) -> tuple[LaurentPoly, ...]:
    curve = base.curve
    return tuple(
        curve.extend(fn * ca) + (-1j) * curve.extend(fn * cb)
        for ca, cb in zip(base.alpha_prime.components, base.beta.components))


def verify_scaling_axioms(fam: ScalingFamily, base: BjorlingData, domain: Domain,
                          n_values: Sequence[int],
                          tol: Tolerances | None = None) -> AxiomReport:
    """Check the family against the base data on the given domain.

    Per index: zeros lie in the parameter span, are simple (f_n = 0 and
    f_n' != 0 there) and are distinct points of the curve; the holomorphic
    extension of f_n (alpha' - i beta) restricts back to it; its loop
    obstruction (Im of z^-1 coefficients) vanishes.  Across indices the
    rigorous sup bounds must decrease strictly.
    """
    tol = tol or Tolerances()
    curve = base.curve
    span = curve.param_span()
    ts = curve.t_grid(512)
    zs = curve.z_of_t(ts)
    field = base.alpha_prime(ts) - 1j * base.beta(ts)

    rows = []
    for n in sorted(n_values):
        fn = fam.scalar(n)
        zeros = fam.zeros(n)
        in_span = all(span[0] - 1e-12 <= z <= span[1] + 1e-12 for z in zeros)
        at_zeros = np.array([fn(z) for z in zeros])
        deriv = fn.differentiate()
        deriv_at = np.array([deriv(z) for z in zeros])

        pts = np.array([[curve.lambda1(z), curve.lambda2(z)] for z in zeros])
        dist = np.linalg.norm(pts[:, None, :] - pts[None, :, :], axis=-1)
        dist[np.diag_indices(len(zeros))] = np.inf
        distinct = bool(np.min(dist) > tol.separation) if len(zeros) > 1 else True

        gamma = _gamma_components(base, fn)
        target = np.asarray(fn(ts))[:, None] * field
        got = np.stack([g(zs) for g in gamma], axis=-1)
        restriction = float(np.max(np.abs(got - target)))
        if isinstance(domain, Annulus):
            obstruction = max(abs(g.c(-1).imag) for g in gamma)
        else:
            obstruction = 0.0
        norm_bound = max(coefficient_bound(g, domain) for g in gamma)

        rows.append(AxiomRow(
            n=n, zeros=zeros, zeros_in_span=in_span,
            max_abs_at_zeros=float(np.max(np.abs(at_zeros))),
            min_abs_deriv_at_zeros=float(np.min(np.abs(deriv_at))),
            zeros_distinct=distinct, restriction_residual=restriction,
            loop_obstruction=obstruction, norm_bound=norm_bound))

    bounds = [r.norm_bound for r in rows]
    decreasing = all(b2 < b1 for b1, b2 in zip(bounds, bounds[1:]))
    ok = decreasing and all(r.ok(tol) for r in rows)
    return AxiomReport(rows=tuple(rows), norms_decreasing=decreasing, ok=ok)


# ---------------------------------------------------------------------------
# deformation


@dataclasses.dataclass(frozen=True)
class DeformedData:
    """The n-th deformation of a shrinking base, with its holomorphic update."""

    n: int
    base: BjorlingData
    data: BjorlingData
    f_n: object
    gamma: tuple[LaurentPoly, LaurentPoly, LaurentPoly]
    phi: PhiForm
    psi: PhiForm


DEFORM_IDENTITY_TOL = 1e-12


def deform(base: BjorlingData, fam: ScalingFamily, n: int) -> DeformedData:
    """Apply the n-th scaling deformation to a shrinking base."""
    shrink = check_shrinking(base)
    if not shrink.is_shrinking:
        raise InvalidDataError(
            "deformation requires a shrinking base "
            f"(H residual {shrink.h_residual:.3e}, "
            f"min dominant D {shrink.d_dominant_min:.3e})")
    fn = fam.scalar(n)
    data_n = BjorlingData(
        curve=base.curve,
        alpha_prime=base.alpha_prime + base.beta.scale(fn),
        beta=base.beta - base.alpha_prime.scale(fn),
    )
    report = validate(data_n)
    if not report.ok:
        raise InvalidDataError(
            "deformed data became inadmissible: " + ", ".join(report.failures()))
    phi = build_phi(base)
    psi = build_phi(data_n)
    gamma = _gamma_components(base, fn)
    scale = max(1.0, max(c.max_abs_coeff() for c in psi.components))
    for p_c, q_c, g_c in zip(psi.components, phi.components, gamma):
        residual = (p_c - q_c).coeff_distance(1j * g_c)
        if residual > DEFORM_IDENTITY_TOL * scale:
            raise MaxfaceError(
                f"deformation identity psi - phi = i gamma failed ({residual:.3e})")
    return DeformedData(n=n, base=base, data=data_n, f_n=fn, gamma=gamma,
                        phi=phi, psi=psi)


def swallowtail_census(dd: DeformedData, tol: Tolerances | None = None,
                       resolution: int = 2048) -> int:
    """Number of swallowtail points on the deformed singular curve."""
    return find_swallowtails(dd.data, tol=tol, resolution=resolution).swallowtail_count


# ---------------------------------------------------------------------------
# convergence certificates


def path_length_bound(domain: Domain, z0: complex) -> float:
    """Length bound for the radial-then-arc (annulus) or straight (rectangle)
    integration path from z0 to the worst point of the domain."""
    z0 = complex(z0)
    if isinstance(domain, Annulus):
        r0 = abs(z0)
        candidates = [abs(r - r0) + math.pi * r
                      for r in (domain.r_in, domain.r_out)]
        return max(candidates)
    corners = [complex(domain.u_min, domain.v_min), complex(domain.u_min, domain.v_max),
               complex(domain.u_max, domain.v_min), complex(domain.u_max, domain.v_max)]
    return max(abs(c - z0) for c in corners)


@dataclasses.dataclass(frozen=True)
class ConvergenceRow:
    n: int
    swallowtail_count: int
    gamma_norm_bound: float
    path_bound: float
    certified: float
    measured: float

    @property
    def certificate_holds(self) -> bool:
        return self.measured <= self.certified + 1e-8


@dataclasses.dataclass(frozen=True)
class ConvergenceReport:
    rows: tuple[ConvergenceRow, ...]
    z0: complex
    domain: Domain

    @property
    def all_certified(self) -> bool:
        return all(r.certificate_holds for r in self.rows)

    @property
    def certified_decreasing(self) -> bool:
        cs = [r.certified for r in self.rows]
        return all(b < a for a, b in zip(cs, cs[1:]))


def convergence_report(base: BjorlingData, fam: ScalingFamily, domain: Domain,
                       n_values: Sequence[int], t0: float = 0.0,
                       samples: int = 128, tol: Tolerances | None = None,
                       resolution: int = 2048,
                       count_swallowtails: bool = True) -> ConvergenceReport:
    """Measure and certify the sup distance between each X_n and the base X.

    The difference X_n - X equals Re of the integral of i gamma_n along the
    canonical path (radial then arc on an annulus, straight on a rectangle),
    which is evaluated exactly from the antiderivative; the certificate is
    path length times the rigorous coefficient bound of gamma_n, valid
    whether or not X_n itself is single-valued on the domain.
    """
    # the base itself must be solvable; raises PeriodError otherwise
    sol = solve(base, domain, t0=t0)
    z0 = sol.z0
    zs = domain.grid(samples)
    rows = []
    for n in sorted(n_values):
        dd = deform(base, fam, n)
        count = (swallowtail_census(dd, tol=tol, resolution=resolution)
                 if count_swallowtails else -1)
        bound = max(coefficient_bound(g, domain) for g in dd.gamma)
        L = path_length_bound(domain, z0)
        measured = 0.0
        for g in dd.gamma:
            anti = (1j * g).antiderivative()
            vals = np.abs(anti.re_integral(zs, z0))
            measured = max(measured, float(np.max(vals)))
        rows.append(ConvergenceRow(
            n=n, swallowtail_count=count, gamma_norm_bound=bound,
            path_bound=L, certified=L * bound, measured=measured))
    return ConvergenceReport(rows=tuple(rows), z0=z0, domain=domain)
