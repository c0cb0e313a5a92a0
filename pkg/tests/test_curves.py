import json
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from archimedean.curves import (
    CurveError,
    GraphCurve,
    check_strict_convexity,
    curvature_analytic,
    curve_from_spec,
    load_curve,
    local_chart,
    make_ellipse,
    make_example10,
    make_family_curve,
    make_offset_graph,
    make_polynomial,
    make_quadratic,
    transform_curve,
)

from conftest import BOTTOM, builtin_curves


def test_make_quadratic():
    q = make_quadratic(1, 0, 0)
    assert q.f(1.5) == 2.25
    assert q.ddf(-0.3) == 2.0
    assert curvature_analytic(q, 0.0) == 2.0
    with pytest.raises(CurveError):
        make_quadratic(0.0)
    with pytest.raises(CurveError):
        make_quadratic(-1.0)


def test_example10_branches_are_quadratics():
    e = make_example10()
    n, p = make_quadratic(9), make_quadratic(9 / 4)
    assert e.f(-1.0) == 9.0 == n.f(-1.0)
    assert e.f(1.0) == 2.25 == p.f(1.0)
    assert e.f(0.0) == 0.0 and e.df(0.0) == 0.0 and e.df(-0.0) == 0.0
    assert e.ddf(-1e-9) == 18.0 and e.ddf(1e-9) == 4.5
    assert not e.c3 and e.kinks == (0.0,)


def test_family_curve_values():
    f = make_family_curve(1.0, 0.5)
    assert f.f(0.75) == pytest.approx(0.125, abs=1e-15)
    assert f.f(0.0) == 0.0 and f.df(0.0) == 0.0
    assert f.ddf(0.0) == pytest.approx(0.25, abs=1e-15)
    # third derivative by central differences of the analytic f''
    step = 1e-5
    d3 = (f.ddf(step) - f.ddf(-step)) / (2 * step)
    assert d3 == pytest.approx(3 * 1.0 * 0.5 ** 3, rel=1e-8)
    # direct form of the family evaluates identically
    x = -1.7
    assert f.f(x) == pytest.approx((1 - 0.5 * x) - math.sqrt(1 - x), rel=1e-13)
    with pytest.raises(CurveError):
        make_family_curve(0.0, 0.5)
    with pytest.raises(CurveError):
        make_family_curve(1.0, 0.0)
    with pytest.raises(CurveError):
        make_family_curve(1.0, 0.5, domain=(-1.0, 2.0))


def test_family_negative_c_domain_is_mirrored():
    f = make_family_curve(2.0, -1.0)
    assert f.lo == pytest.approx(-0.5) and f.hi == pytest.approx(1.5)
    assert f.ddf(0.0) == pytest.approx(2.0)


def test_ellipse_curvatures():
    assert all(curvature_analytic(make_ellipse(1, 1), t) == pytest.approx(1.0)
               for t in np.linspace(0, 6, 13))
    e = make_ellipse(2, 1)
    assert curvature_analytic(e, 0.0) == pytest.approx(2.0)  # a / b^2 at (2, 0)
    assert curvature_analytic(e, math.pi / 2) == pytest.approx(0.25)  # b / a^2 at (0, 1)
    with pytest.raises(CurveError):
        make_ellipse(0.0, 1.0)


def test_ellipse_closes_and_normal_points_inward():
    e = make_ellipse(2, 1)
    p0, p1 = e.position(e.lo), e.position(e.hi)
    assert math.hypot(p0[0] - p1[0], p0[1] - p1[1]) <= 1e-12
    P = e.point(BOTTOM)
    assert P.normal == pytest.approx((0.0, 1.0))


def test_offset_graph():
    q = make_quadratic(1)
    o = make_offset_graph(q, 1.0)
    assert o.f(0.5) == 1.25
    assert all(o.ddf(x) == q.ddf(x) for x in (-1, 0, 1.3))
    v = 0.7
    assert o.df(v) == pytest.approx(2 * v)
    with pytest.raises(CurveError):
        make_offset_graph(q, 0.0)


def test_curvature_analytic_examples():
    q = make_quadratic(1)
    assert curvature_analytic(q, 1.0) == pytest.approx(2 / 5 ** 1.5, abs=1e-15)
    assert 2 / 5 ** 1.5 == pytest.approx(0.178885, abs=1e-6)
    assert curvature_analytic(make_family_curve(1, 0.5), 0.0) == pytest.approx(0.25)
    with pytest.raises(CurveError):
        curvature_analytic(q, 5.0)


def test_fd_fallback_and_switch():
    g = GraphCurve(lambda x: x * x, (-2, 2))
    assert curvature_analytic(g, 0.5) == pytest.approx(2 / 2 ** 1.5, rel=1e-5)
    with pytest.raises(CurveError):
        curvature_analytic(g, 0.5, fd_fallback=False)


@pytest.mark.parametrize("curve, _t", builtin_curves())
def test_analytic_derivatives_match_finite_differences(curve, _t):
    # stay clear of the family branch points, where f' blows up
    ts = curve.sample_params(100, 0.05, 0.95)
    for t in ts:
        if any(abs(t - k) < 1e-3 for k in curve.kinks):
            continue
        step1 = 1e-6 * max(1.0, abs(t))
        step2 = 1e-4 * max(1.0, abs(t))
        p_plus, p_minus, p0 = curve.position(t + step1), curve.position(t - step1), curve.position(t)
        v = curve.velocity(t)
        for i in range(2):
            fd = (p_plus[i] - p_minus[i]) / (2 * step1)
            assert fd == pytest.approx(v[i], rel=1e-6, abs=1e-6)
        q_plus, q_minus = curve.position(t + step2), curve.position(t - step2)
        a = curve.acceleration(t)
        for i in range(2):
            fd2 = (q_plus[i] - 2 * p0[i] + q_minus[i]) / step2 ** 2
            assert fd2 == pytest.approx(a[i], rel=1e-6, abs=1e-6)


def test_strict_convexity():
    ok, margin, where = check_strict_convexity(make_quadratic(1), 11)
    assert ok
    # smallest curvature sits at the widest sample, 2 / W^3
    assert margin == pytest.approx(2 / (1 + (2 * where) ** 2) ** 1.5)
    assert abs(where) == pytest.approx(2.0, rel=1e-5)
    cubic = make_polynomial([0, 0, 0, 1], (-1, 1))
    ok, margin, where = check_strict_convexity(cubic, 21)
    assert not ok and where < 0
    assert curvature_analytic(cubic, -0.5) < 0
    assert check_strict_convexity(make_example10(), 41).convex
    with pytest.raises(ValueError):
        check_strict_convexity(cubic, 2)


def test_local_chart_parabola_vertex_is_identity():
    ch = local_chart(make_quadratic(1), 0.0)
    assert ch.angle == 0.0
    for u in (-1.5, -0.3, 0.4, 1.9):
        assert ch(u) == pytest.approx(u * u, abs=1e-13)


def test_local_chart_circle():
    ch = local_chart(make_ellipse(1, 1), BOTTOM)
    assert ch.u_range[0] == pytest.approx(-1.0, abs=1e-6)
    assert ch.u_range[1] == pytest.approx(1.0, abs=1e-6)
    for u in (-0.9, -0.2, 0.5, 0.99):
        assert ch(u) == pytest.approx(1 - math.sqrt(1 - u * u), abs=1e-12)


@pytest.mark.parametrize("curve, t", builtin_curves())
def test_chart_second_derivative_is_curvature(curve, t):
    ch = local_chart(curve, t)
    d1, d2 = ch.derivatives(0.0)
    assert ch(0.0) == 0.0
    assert abs(d1) < 1e-12
    assert d2 == pytest.approx(curvature_analytic(curve, t), abs=1e-8)


@settings(max_examples=20, deadline=None)
@given(idx=st.integers(0, 6), fracs=st.lists(st.floats(0.02, 0.98), min_size=20, max_size=20))
def test_chart_round_trip(idx, fracs):
    curve, t = builtin_curves()[idx]
    ch = local_chart(curve, t)
    lo, hi = ch.u_range
    for s in fracs:
        u = lo + s * (hi - lo)
        world = ch.to_world(u, ch(u))
        q = curve.position(ch.param_at(u))
        assert math.hypot(world[0] - q[0], world[1] - q[1]) <= 1e-10


def test_local_chart_rejects_boundary():
    q = make_quadratic(1)
    with pytest.raises(CurveError):
        local_chart(q, 2.0)


def test_transform_curve_rigid_motion():
    q = make_quadratic(1)
    th = 0.7
    rot = ((math.cos(th), -math.sin(th)), (math.sin(th), math.cos(th)))
    r = transform_curve(q, rot, (1.0, -2.0))
    for t in (-1.0, 0.0, 0.6):
        assert curvature_analytic(r, t) == pytest.approx(curvature_analytic(q, t), rel=1e-12)
    flip = transform_curve(q, ((-1, 0), (0, 1)))
    assert curvature_analytic(flip, 0.3) == pytest.approx(curvature_analytic(q, 0.3))


def test_curve_specs(tmp_path):
    spec = {"kind": "offset", "k": 1.0, "base": {"kind": "quadratic", "a": 1}}
    path = tmp_path / "c.json"
    path.write_text(json.dumps(spec))
    c = load_curve(str(path))
    assert c.f(0.5) == 1.25
    assert load_curve("builtin:ellipse:a=2,b=1").position(0.0) == (2.0, 0.0)
    assert load_curve("builtin:example10").f(-1.0) == 9.0
    assert load_curve('{"kind": "family", "b": 1, "c": 0.5}').f(0.75) == pytest.approx(0.125)
    poly = curve_from_spec({"kind": "custom_poly", "coefficients": [1, 0, 3], "domain": [-1, 1]})
    assert poly.f(2.0) == 13.0 and poly.ddf(0.1) == 6.0
    for bad in ({"kind": "nope"}, {"kind": "ellipse", "a": 1}, {"a": 1},
                {"kind": "quadratic", "a": -1}):
        with pytest.raises(CurveError):
            curve_from_spec(bad)
