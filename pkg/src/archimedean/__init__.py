"""Chord sections of strictly convex plane curves and the Archimedean parabola tests."""

__version__ = "0.1.0"

from .chords import (
    ChordError,
    ChordSection,
    HRange,
    TangentFrame,
    chord_at_height,
    chord_distance,
    foot_point_V,
    h_max,
    section_area,
    section_area_by_layers,
    tangent_parallel_point,
)
from .conditions import (
    ConditionReport,
    SamplingConfig,
    check_condition_A,
    check_condition_B,
    check_condition_C,
    check_condition_D,
    check_condition_E,
    classify_parabola,
    fit_condition_D,
    fit_condition_E,
)
from .curvature import CurvatureEstimate, kappa_chord, kappa_extrapolated, lemma6_ratio
from .curves import (
    CurveError,
    CurvePoint,
    GraphCurve,
    LocalChart,
    ParametricCurve,
    check_strict_convexity,
    curvature_analytic,
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
from .families import (
    ConicCoefficients,
    g_branch,
    implicit_conic,
    lemma7_residuals,
    ode_residual,
    verify_family_on_curve,
)
