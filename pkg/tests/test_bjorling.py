import math

import numpy as np
import pytest

from maxface.bjorling import (
    BjorlingData,
    GeneralAnalytic,
    InvalidDataError,
    MaxfaceError,
    PeriodError,
    Segment,
    UnitCircle,
    UnsupportedCurveError,
    Vec3Field,
    build_phi,
    check_periods,
    eval_immersion,
    minkowski_product,
    phi_from_weierstrass,
    singular_set_on_curve,
    solve,
    validate,
    weierstrass_from_phi,
)
from maxface.fixtures import (
    catenoid_data,
    circle_graph_data,
    random_circle_data,
    shrinking_segment_data,
    swallowtail_ring_data,
)
from maxface.laurent import Annulus, LaurentPoly, RationalMap, RealPoly, Rectangle, TrigPoly

ANN = Annulus(0.5, 2.0)


# ---------------------------------------------------------------------------
# validation


def test_validate_catenoid_ok():
    rep = validate(catenoid_data())
    assert rep.ok
    assert rep.failures() == []
    assert rep.lambda_prime_min == pytest.approx(1.0)
    assert rep.alpha_prime_null_residual < 1e-14
    assert rep.beta_null_residual < 1e-14
    assert rep.orthogonality_residual < 1e-14
    # |alpha'|^2 + |beta|^2 = 2 on the catenoid circle
    assert rep.data_min_square == pytest.approx(2.0)


def test_validate_all_fixtures_ok():
    for data in (catenoid_data(), circle_graph_data(), shrinking_segment_data(),
                 swallowtail_ring_data(4)):
        assert validate(data).ok


def test_validate_detects_nonnull_alpha():
    bad = BjorlingData(
        curve=UnitCircle(),
        alpha_prime=Vec3Field(TrigPoly.cosine(1), TrigPoly.sine(1), TrigPoly.zero()),
        beta=Vec3Field.zero(TrigPoly),
    )
    rep = validate(bad)
    assert not rep.ok
    assert "alpha_prime_null" in rep.failures()
    with pytest.raises(InvalidDataError):
        build_phi(bad)


def test_validate_detects_common_zero():
    v = Vec3Field(TrigPoly.cosine(1), TrigPoly.sine(1), TrigPoly.constant(-1.0))
    bad = BjorlingData(
        curve=UnitCircle(),
        alpha_prime=v.scale(TrigPoly.sine(1)),
        beta=v.scale(TrigPoly.sine(1)),
    )
    rep = validate(bad)
    assert not rep.ok
    assert rep.failures() == ["no_common_zero"]


def test_family_mismatch_rejected():
    with pytest.raises(TypeError):
        Vec3Field(TrigPoly.cosine(1), RealPoly.identity(), TrigPoly.zero())
    with pytest.raises(TypeError):
        BjorlingData(
            curve=UnitCircle(),
            alpha_prime=Vec3Field.zero(RealPoly),
            beta=Vec3Field.zero(RealPoly),
        )


def test_general_analytic_refused():
    curve = GeneralAnalytic(lambda1=math.cos, lambda2=math.sin,
                            t_min=0.0, t_max=2 * math.pi, closed=True)
    data = BjorlingData(curve=curve,
                        alpha_prime=Vec3Field.zero(TrigPoly),
                        beta=Vec3Field.zero(TrigPoly))
    with pytest.raises(UnsupportedCurveError):
        validate(data)
    with pytest.raises(UnsupportedCurveError):
        build_phi(data)


def test_random_circle_data_is_admissible(rng):
    for _ in range(20):
        data = random_circle_data(rng)
        rep = validate(data)
        assert rep.ok, rep.failures()


# ---------------------------------------------------------------------------
# phi extension


def test_catenoid_phi_coefficients():
    phi = build_phi(catenoid_data())
    p1, p2, p3 = phi.components
    assert p1.coeffs == pytest.approx({0: 0.5, -2: 0.5})
    assert p2.coeffs == pytest.approx({-2: 0.5j, 0: -0.5j})
    assert p3.coeffs == pytest.approx({-1: -1.0})


def test_shrinking_segment_phi_coefficients():
    phi = build_phi(shrinking_segment_data())
    p1, p2, p3 = phi.components
    assert p1.coeffs == pytest.approx({0: -1j, 2: 1j})
    assert p2.coeffs == pytest.approx({1: -2j})
    assert p3.coeffs == pytest.approx({0: -1j, 2: -1j})


def test_phi_restricts_to_data():
    for data in (catenoid_data(), swallowtail_ring_data(5), shrinking_segment_data()):
        phi = build_phi(data)
        ts = data.curve.t_grid(257)
        zs = data.curve.z_of_t(ts)
        target = data.alpha_prime(ts) - 1j * data.beta(ts)
        assert np.max(np.abs(phi(zs) - target)) < 1e-12


# ---------------------------------------------------------------------------
# periods


def test_catenoid_periods_pass():
    phi = build_phi(catenoid_data())
    rep = check_periods(phi, ANN)
    assert rep.ok
    assert rep.log_coeffs == pytest.approx((0.0, 0.0, -1.0))


def test_circle_graph_period_obstruction():
    phi = build_phi(circle_graph_data())
    rep = check_periods(phi, ANN)
    assert not rep.ok
    # second component carries c_-1 = i/2, so Re of the loop integral is -pi
    assert rep.log_coeffs[1] == pytest.approx(0.5j)
    assert rep.loop_re_periods()[1] == pytest.approx(-math.pi)
    with pytest.raises(PeriodError):
        solve(circle_graph_data(), ANN)


def test_rectangle_period_rules():
    phi = build_phi(shrinking_segment_data())
    assert check_periods(phi, Rectangle(-1.2, 1.2, -0.5, 0.5)).ok
    phi_c = build_phi(catenoid_data())
    rep = check_periods(phi_c, Rectangle(-1.0, 1.0, -1.0, 1.0))
    assert not rep.ok
    assert "pole" in rep.reason


# ---------------------------------------------------------------------------
# the immersion


def test_catenoid_immersion_values():
    sol = solve(catenoid_data(), ANN, t0=0.0)
    x = sol.immersion(2.0)
    assert x == pytest.approx((0.75, 0.0, -math.log(2.0)), abs=1e-12)
    # whole singular circle collapses to the origin
    ts = np.linspace(0, 2 * math.pi, 181)
    on_curve = sol.on_curve(ts)
    assert np.max(np.abs(on_curve)) < 1e-12
    # vector evaluation shape
    zs = np.array([2.0, 1.0 + 0.5j])
    assert sol.immersion(zs).shape == (2, 3)


def test_segment_immersion_values():
    dom = Rectangle(-1.2, 1.2, -0.6, 0.6)
    sol = solve(shrinking_segment_data(), dom, t0=0.0)
    ts = np.linspace(-1, 1, 101)
    assert np.max(np.abs(sol.on_curve(ts))) < 1e-12
    x = sol.immersion(0.5j)
    assert x == pytest.approx((13.0 / 24.0, 0.0, 11.0 / 24.0), abs=1e-12)


def test_immersion_domain_guard():
    sol = solve(catenoid_data(), ANN)
    with pytest.raises(ValueError):
        sol.immersion(3.0)
    assert eval_immersion(sol, 3.0, check_domain=False)[0] == pytest.approx(
        (3 - 1 / 3) / 2 - 0.0, abs=1e-12)


def test_solve_rejects_basepoint_outside_domain():
    with pytest.raises(ValueError):
        solve(shrinking_segment_data(), Rectangle(0.1, 1.2, -0.5, 0.5), t0=0.0)


def test_origin_offset():
    sol = solve(catenoid_data(), ANN, origin=(1.0, 2.0, 3.0))
    assert sol.immersion(1.0) == pytest.approx((1.0, 2.0, 3.0))


# ---------------------------------------------------------------------------
# Weierstrass pair


def test_catenoid_weierstrass():
    w = weierstrass_from_phi(build_phi(catenoid_data()))
    assert isinstance(w.g, LaurentPoly)
    assert w.g.coeffs == pytest.approx({1: 1.0})
    assert w.f.coeffs == pytest.approx({-2: 1.0})
    assert singular_set_on_curve(w, UnitCircle()) < 1e-14
    # metric factor: 0.5 * (|f| (1 - |g|^2))^2 = 0.28125 at z = 2
    assert w.metric_factor(2.0) == pytest.approx(0.28125)
    assert w.metric_factor(np.exp(0.7j)) == pytest.approx(0.0, abs=1e-14)


def test_circle_graph_weierstrass():
    w = weierstrass_from_phi(build_phi(circle_graph_data()))
    assert isinstance(w.g, LaurentPoly)
    assert w.g.coeffs == pytest.approx({1: -1.0})
    assert w.f.coeffs == pytest.approx({-1: 1.0})
    assert singular_set_on_curve(w, UnitCircle()) < 1e-14


def test_segment_weierstrass_is_quotient():
    data = shrinking_segment_data()
    w = weierstrass_from_phi(build_phi(data))
    assert isinstance(w.g, RationalMap)
    assert w.f.coeffs == pytest.approx({2: 1j, 1: -2.0, 0: -1j})
    # g = (z - i)/(z + i) after cancellation; check values instead of form
    assert w.g(0.0) == pytest.approx(-1.0)
    assert w.g(1.0) == pytest.approx((1 - 1j) / (1 + 1j))
    assert singular_set_on_curve(w, data.curve) < 1e-12
    with pytest.raises(MaxfaceError):
        phi_from_weierstrass(w)


def test_weierstrass_phi_roundtrip():
    for data in (catenoid_data(), circle_graph_data(), swallowtail_ring_data(3)):
        phi = build_phi(data)
        w = weierstrass_from_phi(phi)
        if not isinstance(w.g, LaurentPoly):
            continue
        back = phi_from_weierstrass(w)
        for orig, rec in zip(phi.components, back):
            assert orig.isclose(rec, tol=1e-12)


def test_ring_weierstrass_f():
    # w_n = z^-2 - (i/2n)(z^{n-1} + z^{-n-1}) for the swallowtail ring
    n = 4
    w = weierstrass_from_phi(build_phi(swallowtail_ring_data(n)))
    expected = (LaurentPoly.monomial(-2)
                + LaurentPoly.monomial(n - 1, -0.5j / n)
                + LaurentPoly.monomial(-n - 1, -0.5j / n))
    assert w.f.isclose(expected, tol=1e-14)
    assert isinstance(w.g, LaurentPoly)
    assert w.g.coeffs == pytest.approx({1: 1.0})
    assert singular_set_on_curve(w, UnitCircle()) < 1e-12


def test_minkowski_product_numeric():
    assert minkowski_product([1, 2, 3], [4, 5, 6]) == pytest.approx(-4.0)
    u = np.array([[1.0, 0, 0], [0, 0, 1.0]])
    assert minkowski_product(u, u) == pytest.approx([1.0, -1.0])


def test_singular_curve_is_null_for_random_data(rng):
    # the image curve of admissible data is a null curve: <X'(t), X'(t)> = 0
    for _ in range(5):
        data = random_circle_data(rng)
        phi = build_phi(data)
        if not check_periods(phi, ANN).ok:
            continue
        sol = solve(data, ANN)
        ts = np.linspace(0, 2 * math.pi, 400, endpoint=False)
        x = sol.on_curve(ts)
        dt = ts[1] - ts[0]
        xp = np.gradient(x, dt, axis=0)
        q = minkowski_product(xp, xp)
        assert np.max(np.abs(q)) < 1e-2 * max(1.0, float(np.max(np.abs(xp))) ** 2)
