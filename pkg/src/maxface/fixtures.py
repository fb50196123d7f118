"""Ready-made singular Bjorling data sets used by tests, scripts and configs.

All circle fixtures share the null direction pattern (cos t, sin t, -1) or
(cos(kt+c), sin(kt+c), 1): any field proportional to such a direction is
automatically lightlike, and two fields proportional to the same direction are
automatically orthogonal, so admissibility reduces to the nonvanishing check.
"""

from __future__ import annotations

import math

import numpy as np

from .bjorling import BjorlingData, Segment, UnitCircle, Vec3Field
from .laurent import RealPoly, TrigPoly


def _circle_direction() -> Vec3Field:
    return Vec3Field(TrigPoly.cosine(1), TrigPoly.sine(1), TrigPoly.constant(-1.0))


def catenoid_data() -> BjorlingData:
    """The circle collapsing to a cone point on the Lorentzian catenoid.

    alpha' = cos t (cos t, sin t, -1), beta = sin t (cos t, sin t, -1);
    the resulting pair is g = z, f = z^-2 and the unit circle maps to the
    origin.
    """
    v = _circle_direction()
    return BjorlingData(
        curve=UnitCircle(),
        alpha_prime=v.scale(TrigPoly.cosine(1)),
        beta=v.scale(TrigPoly.sine(1)),
    )


def swallowtail_ring_data(n: int) -> BjorlingData:
    """Circle data whose singular curve carries isolated swallowtails.

    beta perturbs the catenoid field by (cos nt)/n along the same null
    direction; the degeneracy function becomes -(cos t)(cos nt)/n.
    """
    if n < 1:
        raise ValueError("harmonic order n must be >= 1")
    v = _circle_direction()
    wobble = TrigPoly.sine(1) + TrigPoly.cosine(n, 1.0 / n)
    return BjorlingData(
        curve=UnitCircle(),
        alpha_prime=v.scale(TrigPoly.cosine(1)),
        beta=v.scale(wobble),
    )


def circle_graph_data() -> BjorlingData:
    """Cuspidal-edge circle data (beta = 0) whose loop period obstructs Re X.

    alpha' = (cos t, sin t, 1) gives phi with a z^-1 coefficient of i/2 in the
    second component, so the surface is multivalued on any annulus; the
    fixture exercises validation, extension and the period check, not solve.
    """
    return BjorlingData(
        curve=UnitCircle(),
        alpha_prime=Vec3Field(TrigPoly.cosine(1), TrigPoly.sine(1),
                              TrigPoly.constant(1.0)),
        beta=Vec3Field.zero(TrigPoly),
    )


def shrinking_segment_data(a: float = -1.0, b: float = 1.0) -> BjorlingData:
    """A segment collapsing to a point: alpha' = 0, beta = (1-t^2, 2t, 1+t^2)."""
    return BjorlingData(
        curve=Segment(a, b),
        alpha_prime=Vec3Field.zero(RealPoly),
        beta=Vec3Field(RealPoly([1.0, 0.0, -1.0]), RealPoly([0.0, 2.0]),
                       RealPoly([1.0, 0.0, 1.0])),
    )


def random_circle_data(rng: np.random.Generator, max_harmonic: int = 2,
                       min_magnitude: float = 0.05,
                       max_tries: int = 200) -> BjorlingData:
    """Random admissible circle data for property tests.

    Both fields are scalar multiples a(t), b(t) of one rotating null direction
    (cos(kt+c), sin(kt+c), 1); rejection sampling enforces
    min(a^2 + b^2) > min_magnitude so no common zero occurs.
    """
    for _ in range(max_tries):
        k = int(rng.integers(1, 3))
        c = float(rng.uniform(0.0, 2.0 * math.pi))
        cos_c, sin_c = math.cos(c), math.sin(c)
        # cos(kt+c) and sin(kt+c) from the same two floats, so the null
        # identity cancels to machine zero symbolically
        direction = Vec3Field(
            TrigPoly(cos={k: cos_c}, sin={k: -sin_c}),
            TrigPoly(cos={k: sin_c}, sin={k: cos_c}),
            TrigPoly.constant(1.0),
        )

        def rand_scalar() -> TrigPoly:
            p = TrigPoly.constant(float(rng.uniform(-1.0, 1.0)))
            for m in range(1, max_harmonic + 1):
                p = p + TrigPoly.cosine(m, float(rng.uniform(-1.0, 1.0)))
                p = p + TrigPoly.sine(m, float(rng.uniform(-1.0, 1.0)))
            return p

        a, b = rand_scalar(), rand_scalar()
        ts = np.linspace(0.0, 2.0 * math.pi, 512, endpoint=False)
        if float(np.min(a(ts) ** 2 + b(ts) ** 2)) <= min_magnitude:
            continue
        return BjorlingData(
            curve=UnitCircle(),
            alpha_prime=direction.scale(a),
            beta=direction.scale(b),
        )
    raise RuntimeError("rejection sampling failed to produce admissible data")
