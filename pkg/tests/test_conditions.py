import math

import pytest
from hypothesis import given, settings, strategies as st

from archimedean.chords import ChordError
from archimedean.conditions import (
    ARCHIMEDES_RATIO,
    HYPOTHESIS_VIOLATED,
    SATISFIED,
    VIOLATED,
    SamplingConfig,
    check_condition_A,
    check_condition_B,
    check_condition_C,
    check_condition_D,
    check_condition_E,
    classify_parabola,
    default_k,
    fit_condition_D,
    fit_condition_E,
    phi,
)
from archimedean.curves import (
    CurveError,
    make_ellipse,
    make_family_curve,
    make_offset_graph,
    make_quadratic,
    transform_curve,
)


def test_sampling_config_validation():
    for bad in ({"n_points": 0}, {"n_heights": 0}, {"tol": 0.0}, {"fit_heights": 5}):
        with pytest.raises(ValueError):
            SamplingConfig(**bad)


def test_condition_C_on_parabolas():
    for curve in (make_quadratic(1.0), make_quadratic(4.0, -1.0, 2.0), make_family_curve(1.0, 0.5),
                  make_family_curve(2.0, -1.0)):
        rep = check_condition_C(curve)
        assert rep.verdict == SATISFIED
        assert rep.max_deviation <= 1e-8
        assert len(rep.samples) == 63


def test_condition_C_rejects_ellipse(ellipse21):
    rep = check_condition_C(ellipse21)
    assert rep.verdict == VIOLATED
    assert rep.max_deviation >= 1e-3
    # small chords of any smooth convex curve approach the parabolic ratio
    smallest = min(rep.samples, key=lambda s: s["h"])
    assert abs(smallest["ratio"] - ARCHIMEDES_RATIO) < rep.max_deviation


def test_condition_C_example10(example10):
    rep = check_condition_C(example10)
    assert rep.verdict == HYPOTHESIS_VIOLATED
    assert rep.within_tolerance  # every sampled chord stays on one quadratic branch
    assert rep.to_dict()["condition"] == "C"


@settings(max_examples=10, deadline=None)
@given(theta=st.floats(0.0, 2 * math.pi), dx=st.floats(-3, 3), dy=st.floats(-3, 3))
def test_condition_C_rigid_motion_invariance(theta, dx, dy):
    cfg = SamplingConfig(n_points=3, n_heights=3)
    base = make_ellipse(2.0, 1.0)
    rot = ((math.cos(theta), -math.sin(theta)), (math.sin(theta), math.cos(theta)))
    moved = transform_curve(base, rot, (dx, dy))
    assert check_condition_C(moved, config=cfg).max_deviation == pytest.approx(
        check_condition_C(base, config=cfg).max_deviation, abs=1e-9)


def test_condition_A_on_quadratics():
    for a in (0.5, 1.0, 3.0):
        rep = check_condition_A(make_quadratic(a, 0.3, -1.0))
        assert rep.verdict == SATISFIED
        assert rep.fitted["a"] == pytest.approx(4.0 / (3.0 * math.sqrt(a)), rel=1e-9)


def test_condition_A_rejects_family_and_needs_graph(family, circle):
    rep = check_condition_A(family)
    assert rep.verdict == VIOLATED and rep.max_deviation > 0.1
    with pytest.raises(CurveError):
        check_condition_A(circle)


def test_condition_A_implies_E():
    curve = make_quadratic(2.0, 1.0)
    A = check_condition_A(curve)
    E = check_condition_E(curve)
    assert A.verdict == SATISFIED and E.verdict == SATISFIED
    assert E.fitted["a_spread"] <= 1e-6
    assert E.fitted["a_mean"] == pytest.approx(A.fitted["a"], rel=1e-6)


def test_condition_B_on_parabola():
    wide = make_quadratic(1.0, domain=(-10.0, 10.0))
    ratios = []
    for k in (0.25, 1.0, 4.0):
        rep = check_condition_B(wide, k)
        assert rep.verdict == SATISFIED
        assert rep.max_deviation <= 1e-8
        ratios.append(rep.fitted["phi_over_k32"])
    assert all(r == pytest.approx(4.0 / 3.0, rel=1e-8) for r in ratios)


def test_phi_matches_direct_area(parabola):
    # tangent to y = x^2 + 1 at x = v cuts the chord from v - 1 to v + 1
    assert phi(parabola, 0.5, 1.0) == pytest.approx(4.0 / 3.0, rel=1e-10)
    with pytest.raises(ChordError):
        phi(parabola, 1.9, 1.0)


def test_condition_B_family(family):
    rep = check_condition_B(family, 0.01)
    assert rep.verdict == VIOLATED
    with pytest.raises(ValueError):
        check_condition_B(family, -1.0)
    assert default_k(make_quadratic(1.0)) == pytest.approx(0.16)


def test_condition_B_offset_is_shift_invariant(parabola):
    lifted = make_offset_graph(parabola, 5.0)
    a = check_condition_B(parabola, 0.2).fitted["phi"]
    b = check_condition_B(lifted, 0.2).fitted["phi"]
    assert a == pytest.approx(b, rel=1e-10)


def test_fits_on_parabolas(parabola, family):
    for curve in (parabola, family, make_quadratic(4.0, -1.0, 2.0)):
        for t in curve.sample_params(5, 0.15, 0.85):
            d = fit_condition_D(curve, t)
            assert d.a == pytest.approx(4.0 / 3.0, abs=1e-6)
            assert d.b == pytest.approx(1.0, abs=1e-6)
            e = fit_condition_E(curve, t)
            assert e.b == pytest.approx(1.5, abs=1e-6)
    with pytest.raises(ValueError):
        fit_condition_D(parabola, 0.0, n_heights=4)


def test_condition_E_dichotomy(parabola, family):
    assert check_condition_E(parabola).fitted["a_spread"] <= 1e-6
    rep = check_condition_E(family)
    # still a power law at each point, with a varying coefficient
    assert rep.verdict == SATISFIED
    assert rep.fitted["a_spread"] >= 1e-3


def test_condition_D_on_circle(circle):
    # per-point fits on a circle leave curvature-driven log residuals
    rep = check_condition_D(circle)
    assert rep.verdict == VIOLATED
    assert rep.fitted["b_max_offset"] < 0.1


def test_classify(parabola, ellipse21, example10, family):
    assert classify_parabola(parabola).verdict == "parabola"
    assert classify_parabola(family).verdict == "parabola"
    result = classify_parabola(ellipse21)
    assert result.verdict == "not_parabola"
    assert "fit_D" not in result.evidence
    withheld = classify_parabola(example10)
    assert withheld.verdict == "withheld"
    assert withheld.report.verdict == HYPOTHESIS_VIOLATED
    assert "not C3" in withheld.evidence["note"]


def test_circle_semicircle_sample(circle):
    # closed curves sample from t = lo; at half of h_max the chord is a diameter
    rep = check_condition_C(circle, config=SamplingConfig(n_points=1, n_heights=1, h_lo_frac=0.5,
                                                         h_hi_frac=0.5))
    assert rep.samples[0]["t"] == circle.lo
    assert rep.samples[0]["ratio"] == pytest.approx(math.pi / 2, abs=1e-9)
