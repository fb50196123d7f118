import math

import numpy as np
import pytest

from maxface.bjorling import (
    BjorlingData,
    UnitCircle,
    Vec3Field,
    build_phi,
    solve,
    weierstrass_from_phi,
)
from maxface.fixtures import (
    catenoid_data,
    random_circle_data,
    shrinking_segment_data,
    swallowtail_ring_data,
)
from maxface.laurent import Annulus, Rectangle, TrigPoly
from maxface.singularities import (
    DegenerateDirection,
    SingularAnalysis,
    SingularityKind,
    Tolerances,
    a_function,
    check_generalized_conelike,
    check_shrinking,
    classify_point,
    find_swallowtails,
    h_and_h_prime,
    h_function,
    null_direction,
    null_direction_residual,
)

ANN = Annulus(0.5, 2.0)


# ---------------------------------------------------------------------------
# H and the null direction


def test_h_function_ring_coefficients():
    # H = -(cos t)(cos nt)/n = -(cos(n+1)t + cos(n-1)t)/(2n)
    n = 4
    h = h_function(swallowtail_ring_data(n))
    assert h.const == pytest.approx(0.0, abs=1e-14)
    assert h.cos_coeffs == pytest.approx({n + 1: -1 / (2 * n), n - 1: -1 / (2 * n)})
    assert h.sin_coeffs == pytest.approx({})


def test_h_vanishes_for_shrinking_fixtures():
    assert h_function(catenoid_data()).max_abs_coeff() < 1e-15
    assert h_function(shrinking_segment_data()).max_abs_coeff() < 1e-15


def test_h_prime_matches_finite_difference(rng):
    for _ in range(5):
        data = random_circle_data(rng)
        h, hp = h_and_h_prime(data)
        ts = np.linspace(0.3, 6.0, 41)
        eps = 1e-6
        fd = (h(ts + eps) - h(ts - eps)) / (2 * eps)
        assert np.max(np.abs(hp(ts) - fd)) < 1e-6 * max(1.0, h.max_abs_coeff())


def test_null_direction_catenoid():
    eta = null_direction(catenoid_data())
    t = math.pi / 3
    # eta = -b3 + i a3' = sin t - i cos t
    assert eta(t) == pytest.approx(math.sin(t) - 1j * math.cos(t))
    vals = eta(np.array([0.0, math.pi / 2]))
    assert vals == pytest.approx([-1j, 1.0])


def test_null_direction_degenerate():
    flat = BjorlingData(
        curve=UnitCircle(),
        alpha_prime=Vec3Field(TrigPoly.cosine(1), TrigPoly.sine(1), TrigPoly.zero()),
        beta=Vec3Field.zero(TrigPoly),
    )
    with pytest.raises(DegenerateDirection):
        null_direction(flat)


def test_null_direction_annihilates_dX(rng):
    # dX in direction eta vanishes along the curve for admissible data
    for data in (catenoid_data(), swallowtail_ring_data(5),
                 shrinking_segment_data(), random_circle_data(rng)):
        assert null_direction_residual(data) < 1e-12


# ---------------------------------------------------------------------------
# the A-function


def test_a_function_catenoid_constant():
    w = weierstrass_from_phi(build_phi(catenoid_data()))
    A = a_function(w)
    zs = np.exp(1j * np.linspace(0, 6, 9)) * np.linspace(0.6, 1.8, 9)
    assert np.max(np.abs(A(zs) - 1.0)) < 1e-14


def test_a_function_ring_values():
    # A(e^{it}) = 1 / (1 - (i/n) e^{it} cos nt)
    n = 4
    w = weierstrass_from_phi(build_phi(swallowtail_ring_data(n)))
    A = a_function(w)
    ts = np.linspace(0, 2 * math.pi, 33)
    zs = np.exp(1j * ts)
    expected = 1.0 / (1.0 - (1j / n) * zs * np.cos(n * ts))
    assert np.max(np.abs(A(zs) - expected)) < 1e-13


def test_a_function_quotient_g():
    w = weierstrass_from_phi(build_phi(shrinking_segment_data()))
    A = a_function(w)
    assert A(0.0) == pytest.approx(2.0)


def test_a_fields_matches_direct(rng):
    for data in (swallowtail_ring_data(3), swallowtail_ring_data(4),
                 random_circle_data(rng), random_circle_data(rng)):
        an = SingularAnalysis(data)
        ts = data.curve.t_grid(257)
        direct = an.a_rational(data.curve.z_of_t(ts))
        fields = an.a_fields(ts)
        assert np.max(np.abs(direct - fields)) < 1e-9 * max(
            1.0, float(np.max(np.abs(direct))))


# ---------------------------------------------------------------------------
# pointwise classification


def test_classify_swallowtail_on_lattice():
    d = classify_point(swallowtail_ring_data(4), math.pi / 8)
    assert d.kind is SingularityKind.SWALLOWTAIL
    assert d.h == pytest.approx(0.0, abs=1e-15)
    assert d.h_prime == pytest.approx(math.cos(math.pi / 8))
    assert d.a_direct == pytest.approx(1.0, abs=1e-12)
    assert d.branch == "alpha"
    assert d.d_alpha == pytest.approx(math.cos(math.pi / 8) ** 2)


def test_classify_extra_swallowtail_even_order():
    # even n has genuine degeneracy roots off the usual lattice at t = pi/2
    d = classify_point(swallowtail_ring_data(4), math.pi / 2)
    assert d.kind is SingularityKind.SWALLOWTAIL
    assert d.h_prime == pytest.approx(0.25)
    assert d.branch == "beta"
    assert d.a_direct == pytest.approx(0.8, abs=1e-12)


def test_classify_double_zero_odd_order():
    # odd n: t = pi/2 is a double zero of H; front but no swallowtail
    d = classify_point(swallowtail_ring_data(3), math.pi / 2)
    assert d.kind is SingularityKind.FRONT_NON_SWALLOWTAIL
    assert abs(d.h) < 1e-15
    assert abs(d.h_prime) < 1e-15
    assert d.a_direct == pytest.approx(1.0, abs=1e-12)


def test_classify_ordinary_front_point():
    d = classify_point(swallowtail_ring_data(4), 0.3)
    assert d.kind is SingularityKind.FRONT_NON_SWALLOWTAIL
    assert abs(d.h) > 1e-3


def test_classify_gray_zone_is_indeterminate():
    # just off a root: |H| lands between the root and nonzero thresholds
    d = classify_point(swallowtail_ring_data(4), math.pi / 8 + 1e-10)
    assert d.kind is SingularityKind.INDETERMINATE


def test_classify_shrinking_pointwise_is_front():
    # on a shrinking circle every point has H = H' = 0 and A = 1
    d = classify_point(catenoid_data(), 1.234)
    assert d.kind is SingularityKind.FRONT_NON_SWALLOWTAIL
    assert d.a_direct == pytest.approx(1.0)


# ---------------------------------------------------------------------------
# find_swallowtails


RING_TOTALS = {1: 0, 2: 6, 3: 4, 4: 10, 5: 8, 10: 22}
RING_LATTICE = {3: 4, 4: 8, 5: 8, 10: 20}


def lattice_points(n):
    return [(2 * k + 1) * math.pi / (2 * n) for k in range(2 * n)]


@pytest.mark.parametrize("n", sorted(RING_TOTALS))
def test_ring_swallowtail_totals(n):
    rep = find_swallowtails(swallowtail_ring_data(n))
    assert rep.swallowtail_count == RING_TOTALS[n]
    assert not rep.identically_degenerate


@pytest.mark.parametrize("n", sorted(RING_LATTICE))
def test_ring_lattice_counts(n):
    rep = find_swallowtails(swallowtail_ring_data(n))
    lat = lattice_points(n)
    on_lattice = [t for t in rep.swallowtail_parameters
                  if min(abs(t - l) for l in lat) < 1e-9]
    assert len(on_lattice) == RING_LATTICE[n]


def test_ring_even_extras_located():
    rep = find_swallowtails(swallowtail_ring_data(4))
    lat = lattice_points(4)
    extras = sorted(t for t in rep.swallowtail_parameters
                    if min(abs(t - l) for l in lat) > 1e-6)
    assert extras == pytest.approx([math.pi / 2, 3 * math.pi / 2], abs=1e-12)


def test_ring_odd_touch_points():
    rep = find_swallowtails(swallowtail_ring_data(3))
    assert sorted(rep.touch_parameters) == pytest.approx(
        [math.pi / 2, 3 * math.pi / 2], abs=1e-9)
    kinds = {round(p.t, 6): p.kind for p in rep.points}
    assert kinds[round(math.pi / 2, 6)] is SingularityKind.FRONT_NON_SWALLOWTAIL


def test_touch_detection_off_grid_resolution():
    # pi/2 is not a grid point at this resolution; the dip scan must find it
    rep = find_swallowtails(swallowtail_ring_data(3), resolution=2000)
    assert sorted(rep.touch_parameters) == pytest.approx(
        [math.pi / 2, 3 * math.pi / 2], abs=1e-9)
    assert rep.swallowtail_count == 4


def test_segment_endpoint_root():
    # the deformed segment has a root exactly at the right endpoint
    from maxface.laurent import RealPoly
    from maxface.bjorling import Segment
    base = shrinking_segment_data(0.25, 1.0)
    fn = RealPoly([-1.0, 1.0])  # t - 1, zero at the endpoint
    data = BjorlingData(
        curve=base.curve,
        alpha_prime=base.alpha_prime + base.beta.scale(fn),
        beta=base.beta,
    )
    rep = find_swallowtails(data)
    assert rep.swallowtail_count == 1
    assert rep.swallowtail_parameters[0] == pytest.approx(1.0, abs=1e-12)


def test_find_swallowtails_shrinking_flag():
    rep = find_swallowtails(catenoid_data())
    assert rep.identically_degenerate
    assert rep.points == ()
    assert rep.swallowtail_count == 0


def test_find_swallowtails_resolution_guard():
    with pytest.raises(ValueError):
        find_swallowtails(swallowtail_ring_data(3), resolution=100)


def test_report_separation_and_image():
    rep = find_swallowtails(swallowtail_ring_data(10))
    assert len(rep.points) == 22
    assert rep.min_image_separation is not None
    assert rep.min_image_separation > 1e-2
    ts = sorted(rep.swallowtail_parameters)
    assert min(b - a for a, b in zip(ts, ts[1:])) > Tolerances().separation


def test_swallowtail_diagnostics_consistent(rng):
    for _ in range(5):
        data = random_circle_data(rng)
        rep = find_swallowtails(data)
        if rep.identically_degenerate:
            continue
        for p in rep.points:
            assert abs(p.h) < 1e-8
            if p.kind is SingularityKind.SWALLOWTAIL:
                assert abs(p.h_prime) > 1e-8
                d_dom = p.d_alpha if p.branch == "alpha" else p.d_beta
                assert abs(d_dom) > 1e-8
            # Im A has the opposite sign of H near the root, so it is ~0 here
            assert abs(p.a_fields.imag) < 1e-6 * max(1.0, abs(p.a_fields))


# ---------------------------------------------------------------------------
# shrinking and cone-like


def test_check_shrinking_catenoid():
    rep = check_shrinking(catenoid_data())
    assert rep.is_shrinking
    assert rep.h_residual < 1e-15
    assert rep.d_dominant_min == pytest.approx(0.5, abs=1e-5)


def test_check_shrinking_segment():
    rep = check_shrinking(shrinking_segment_data())
    assert rep.is_shrinking
    assert rep.d_dominant_min == pytest.approx(2.0, abs=1e-4)


def test_check_shrinking_rejects_ring():
    assert not check_shrinking(swallowtail_ring_data(4)).is_shrinking


def test_conelike_catenoid():
    sol = solve(catenoid_data(), ANN)
    rep = check_generalized_conelike(catenoid_data(), sol)
    assert rep.is_conelike
    assert rep.max_excursion < 1e-12
    assert rep.cone_point == pytest.approx((0.0, 0.0, 0.0))


def test_conelike_segment():
    data = shrinking_segment_data()
    sol = solve(data, Rectangle(-1.2, 1.2, -0.6, 0.6))
    rep = check_generalized_conelike(data, sol)
    assert rep.is_conelike
    assert rep.cone_point == pytest.approx((0.0, 0.0, 0.0))


def test_conelike_requires_shrinking():
    data = swallowtail_ring_data(4)
    sol = solve(data, ANN)
    rep = check_generalized_conelike(data, sol)
    assert not rep.is_conelike
    assert not rep.shrinking.is_shrinking
    assert math.isnan(rep.max_excursion)
