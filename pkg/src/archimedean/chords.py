"""Tangent-parallel chords and the areas they cut off.

For a point P on a strictly convex curve and a height h > 0, the line
``{Q : <Q - P, N(P)> = h}`` meets the curve in A (before P) and B (after P).
This module computes those endpoints, the chord length L, the section area S
between arc and chord, the rectangle R = h L (twice the triangle ABP), the
vertical foot V for graphs, and the inverse problem of finding the
tangent-parallel point for a given chord.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .curves import Curve, CurveError, CurvePoint, GraphCurve, Vec, curvature_analytic
from .numerics import adaptive_simpson, find_root, first_sign_change, integrate_pieces

QUAD_TOL = 1e-11  # relative to the rectangle area h * L
H_FLOOR = 1e-12  # in units of the radius of curvature at P


class ChordError(ValueError):
    """The requested chord does not exist inside the curve's domain."""


def _param(P) -> float:
    return P.param if isinstance(P, CurvePoint) else float(P)


@dataclass(frozen=True)
class ChordSection:
    P: CurvePoint
    h: float
    A: Vec
    B: Vec
    tA: float
    tB: float
    L: float
    S: float
    R: float
    triangle: float
    V: Optional[Vec] = None
    PV: Optional[float] = None

    @property
    def ratio(self) -> float:
        """Section area over triangle area (4/3 on a parabola)."""
        return self.S / self.triangle


@dataclass(frozen=True)
class HRange:
    point: CurvePoint
    h_max: float


class TangentFrame:
    """Precomputed geometry for chords parallel to the tangent at one point.

    Finds, on each side of P, the extent over which the normal height
    ``psi(t) = <X(t) - P, N>`` increases: up to the antipodal point on closed
    curves, up to the domain edge on open arcs. Both endpoint solves are then
    monotone brackets.
    """

    def __init__(self, curve: Curve, t: float):
        self.curve = curve
        self.P = curve.point(t)
        self.t0 = t
        self.kappa = curvature_analytic(curve, t)
        if not self.kappa > 0:
            raise CurveError(f"curve is not strictly convex at t={t!r} (kappa={self.kappa!r})")
        self.t_left = self._extent(-1)
        self.t_right = self._extent(+1)
        self.h_left = self.psi(self.t_left)
        self.h_right = self.psi(self.t_right)
        self.h_max = min(self.h_left, self.h_right)
        self.h_floor = H_FLOOR / self.kappa

    def psi(self, t: float) -> float:
        p, n = self.P.location, self.P.normal
        q = self.curve.position(t)
        return (q[0] - p[0]) * n[0] + (q[1] - p[1]) * n[1]

    def _dpsi(self, t: float) -> float:
        v, n = self.curve.velocity(t), self.P.normal
        return v[0] * n[0] + v[1] * n[1]

    def _extent(self, direction: int) -> float:
        c = self.curve
        if c.closed:
            stop = self.t0 + direction * c.width
        else:
            stop = c.reach[1] if direction > 0 else c.reach[0]
        if stop == self.t0:
            raise CurveError(f"point t={self.t0!r} sits on the domain boundary")
        bracket = first_sign_change(self._dpsi, self.t0, stop)
        if bracket is None:
            return stop
        return find_root(self._dpsi, *bracket)

    def endpoints(self, h: float) -> tuple[float, float]:
        """Parameters ``(tA, tB)`` of the chord at normal height ``h``."""
        if not h > 0:
            raise ChordError(f"height must be positive, got {h!r}")
        if h < self.h_floor:
            raise ChordError(
                f"h={h!r} below floor {self.h_floor:.3e}; use the small-h asymptote instead"
            )
        if h >= self.h_max:
            raise ChordError(f"h={h!r} >= h_max={self.h_max!r} at t={self.t0!r}")
        g = lambda t: self.psi(t) - h  # noqa: E731
        tA = find_root(g, self.t_left, self.t0, fa=self.h_left - h, fb=-h)
        tB = find_root(g, self.t0, self.t_right, fa=-h, fb=self.h_right - h)
        return tA, tB

    def length(self, h: float) -> float:
        tA, tB = self.endpoints(h)
        a, b = self.curve.position(tA), self.curve.position(tB)
        return math.hypot(b[0] - a[0], b[1] - a[1])

    def length_or_asymptote(self, h: float) -> float:
        """Chord length, switching to ``2 sqrt(2h / kappa)`` below the height floor."""
        if h < self.h_floor:
            return 2.0 * math.sqrt(2.0 * h / self.kappa)
        return self.length(h)

    def chord(self, h: float) -> ChordSection:
        tA, tB = self.endpoints(h)
        c = self.curve
        A, B = c.position(tA), c.position(tB)
        L = math.hypot(B[0] - A[0], B[1] - A[1])
        R = h * L
        S = _area(c, self.P, tA, tB, A, B, QUAD_TOL * R)
        V = PV = None
        if isinstance(c, GraphCurve):
            V, PV = _foot(self.P, A, B)
        return ChordSection(self.P, h, A, B, tA, tB, L, S, R, 0.5 * R, V, PV)


def _breaks(curve: Curve, a: float, b: float) -> list[float]:
    return [a] + sorted(k for k in curve.kinks if a < k < b) + [b]


def _area(curve: Curve, P: CurvePoint, tA, tB, A, B, tol) -> float:
    if isinstance(curve, GraphCurve):
        slope = (B[1] - A[1]) / (B[0] - A[0])
        return integrate_pieces(lambda x: A[1] + slope * (x - A[0]) - curve.f(x),
                                _breaks(curve, tA, tB), tol)
    # Green's theorem around arc A->B then chord B->A, with P as origin
    px, py = P.location

    def integrand(t):
        x, y = curve.position(t)
        vx, vy = curve.velocity(t)
        return 0.5 * ((x - px) * vy - (y - py) * vx)

    arc = integrate_pieces(integrand, _breaks(curve, tA, tB), tol)
    closing = 0.5 * ((B[0] - px) * (A[1] - py) - (B[1] - py) * (A[0] - px))
    return abs(arc + closing)


def _foot(P: CurvePoint, A: Vec, B: Vec) -> tuple[Vec, float]:
    x = P.location[0]
    y = A[1] + (B[1] - A[1]) * (x - A[0]) / (B[0] - A[0])
    return (x, y), y - P.location[1]


def chord_at_height(curve: Curve, P, h: float) -> ChordSection:
    """Tangent-parallel chord at normal distance ``h`` from ``P`` (a parameter or CurvePoint)."""
    return TangentFrame(curve, _param(P)).chord(h)


def h_max(curve: Curve, P) -> HRange:
    """Largest height for which the chord at ``P`` stays inside the curve's domain."""
    frame = TangentFrame(curve, _param(P))
    return HRange(frame.P, frame.h_max)


def section_area(curve: Curve, chord: ChordSection) -> float:
    """Area between the arc A..B and the chord AB, recomputed by quadrature."""
    return _area(curve, chord.P, chord.tA, chord.tB, chord.A, chord.B, QUAD_TOL * chord.R)


def foot_point_V(curve: Curve, P, chord: ChordSection) -> tuple[Vec, float]:
    """Point V on AB vertically above P and the distance |PV| (equal to h W(x))."""
    if not isinstance(curve, GraphCurve):
        raise CurveError("the vertical foot V is defined for graph curves only")
    if not isinstance(P, CurvePoint):
        P = curve.point(float(P))
    return _foot(P, chord.A, chord.B)


def tangent_parallel_point(curve: Curve, tA: float, tB: float) -> CurvePoint:
    """The point strictly between parameters ``tA < tB`` whose tangent is parallel to AB."""
    if not tA < tB:
        if tA == tB:
            raise ChordError("A and B coincide")
        tA, tB = tB, tA
    A, B = curve.position(tA), curve.position(tB)
    d = (B[0] - A[0], B[1] - A[1])

    def cross(t):
        v = curve.velocity(t)
        return v[0] * d[1] - v[1] * d[0]

    ca, cb = cross(tA), cross(tB)
    if not ca * cb < 0:
        raise ChordError(f"no tangent-parallel point between t={tA!r} and t={tB!r}")
    # the bracket must hold exactly one sign change on a convex arc
    if first_sign_change(cross, tA, tB, samples=32) is None:
        raise ChordError("tangent-parallel bracket is inconsistent")
    return curve.point(find_root(cross, tA, tB, fa=ca, fb=cb))


def _require_chart(chart: GraphCurve) -> None:
    if not isinstance(chart, GraphCurve):
        raise CurveError("expected a graph chart")
    scale = max(1.0, chart.width)
    if abs(chart.f(0.0)) > 1e-12 * scale or abs(chart.df(0.0)) > 1e-12:
        raise CurveError("chart must satisfy f(0) = f'(0) = 0")


def chart_g(chart: GraphCurve, x: float) -> float:
    """Abscissa g(x) of the tangent-parallel point for the chord from the origin to (x, f(x))."""
    _require_chart(chart)
    if x == 0:
        raise ChordError("g is undefined at x = 0 (use g(0) = 0)")
    return tangent_parallel_point(chart, min(0.0, x), max(0.0, x)).param


def chord_distance(chart: GraphCurve, x: float) -> float:
    """Distance from the tangent-parallel point to the chord joining the origin and (x, f(x))."""
    g = chart_g(chart, x)
    fx, fg = chart.f(x), chart.f(g)
    return abs(fx * g - x * fg) / math.hypot(x, fx)


def section_area_by_layers(curve: Curve, P, h: float) -> float:
    """Section area as the integral of chord length over heights 0..h.

    Uses ``y = h s^2`` so the square-root behaviour of L at y = 0 is smoothed.
    """
    frame = TangentFrame(curve, _param(P))
    if not 0 < h < frame.h_max:
        raise ChordError(f"h={h!r} outside (0, {frame.h_max!r})")
    scale = h * frame.length(h)

    def integrand(s):
        if s == 0.0:
            return 0.0
        return 2.0 * h * s * frame.length_or_asymptote(h * s * s)

    return adaptive_simpson(integrand, 0.0, 1.0, QUAD_TOL * scale)
