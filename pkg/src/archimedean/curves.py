"""Strictly convex plane curves.

Two concrete kinds are supported: graphs ``y = f(x)`` over an open interval
(parameter = abscissa, convex side up) and parametric curves ``t -> (x, y)``,
optionally closed. Both expose the same parametric surface (position,
velocity, acceleration, convex-side frame), which is all the chord machinery
needs.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, NamedTuple, Sequence

import numpy as np

from .numerics import EPS, find_root, first_sign_change

Vec = tuple[float, float]

DEFAULT_MARGIN = 1e-6  # fraction of the parameter interval kept away from open ends


class CurveError(ValueError):
    """Invalid curve construction or a query outside the curve's domain."""


def _cross(u: Vec, v: Vec) -> float:
    return u[0] * v[1] - u[1] * v[0]


def _dot(u: Vec, v: Vec) -> float:
    return u[0] * v[0] + u[1] * v[1]


def _fd1(fn, t):
    step = math.sqrt(EPS) * max(1.0, abs(t))
    return (np.asarray(fn(t + step)) - np.asarray(fn(t - step))) / (2.0 * step)


def _fd2(fn, t):
    step = EPS ** (1.0 / 3.0) * max(1.0, abs(t))
    return (np.asarray(fn(t + step)) - 2.0 * np.asarray(fn(t))
            + np.asarray(fn(t - step))) / (step * step)


@dataclass(frozen=True)
class CurvePoint:
    """A point on a curve with its unit tangent and convex-side unit normal."""

    location: Vec
    tangent: Vec
    normal: Vec
    param: float


class Curve:
    """Common parametric interface. Subclasses provide the raw callables."""

    label: str
    lo: float
    hi: float
    closed: bool = False
    orientation: int = 1  # +1: convex side lies to the left of the velocity
    c3: bool = True
    kinks: tuple[float, ...] = ()
    has_derivatives: bool = True
    margin_fraction: float = DEFAULT_MARGIN

    # raw evaluators, set by subclasses
    def _pos(self, t: float) -> Vec:
        raise NotImplementedError

    def _vel(self, t: float) -> Vec:
        raise NotImplementedError

    def _acc(self, t: float) -> Vec:
        raise NotImplementedError

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def margin(self) -> float:
        return 0.0 if self.closed else self.margin_fraction * self.width

    @property
    def t_min(self) -> float:
        return self.lo + self.margin

    @property
    def t_max(self) -> float:
        return self.hi - self.margin

    @property
    def reach(self) -> tuple[float, float]:
        """Parameter span chord endpoints may use: the open interval minus a 1e-12 sliver."""
        d = 1e-12 * self.width
        return self.lo + d, self.hi - d

    def _wrap(self, t: float) -> float:
        if self.closed:
            return self.lo + (t - self.lo) % self.width
        return t

    def contains(self, t: float) -> bool:
        return self.closed or self.t_min <= t <= self.t_max

    def require(self, t: float) -> None:
        if not self.contains(t):
            raise CurveError(
                f"parameter {t!r} outside ({self.t_min!r}, {self.t_max!r}) of {self.label!r}"
            )

    def position(self, t: float) -> Vec:
        return self._pos(self._wrap(t))

    def velocity(self, t: float) -> Vec:
        return self._vel(self._wrap(t))

    def acceleration(self, t: float) -> Vec:
        return self._acc(self._wrap(t))

    def point(self, t: float) -> CurvePoint:
        self.require(t)
        vx, vy = self.velocity(t)
        speed = math.hypot(vx, vy)
        if speed == 0.0:
            raise CurveError(f"singular parametrization at t={t!r}")
        tx, ty = vx / speed, vy / speed
        s = self.orientation
        return CurvePoint(self.position(t), (tx, ty), (-s * ty, s * tx), t)

    def signed_curvature(self, t: float) -> float:
        """Curvature with respect to the convex-side normal (positive if convex)."""
        v = self.velocity(t)
        a = self.acceleration(t)
        return self.orientation * _cross(v, a) / math.hypot(*v) ** 3

    def sample_params(self, n: int, lo_frac: float = 0.0, hi_frac: float = 1.0) -> list[float]:
        if self.closed:
            return [self.lo + self.width * i / n for i in range(n)]
        a = self.t_min + lo_frac * (self.t_max - self.t_min)
        b = self.t_min + hi_frac * (self.t_max - self.t_min)
        return [float(v) for v in np.linspace(a, b, n)]


class GraphCurve(Curve):
    """Graph of ``f`` over the open interval ``domain``; the convex side is up."""

    def __init__(self, f, domain, df=None, ddf=None, label="graph", c3=True, kinks=(),
                 margin_fraction=DEFAULT_MARGIN, spec=None):
        lo, hi = map(float, domain)
        if not (math.isfinite(lo) and math.isfinite(hi)) or lo >= hi:
            raise CurveError(f"graph domain must be a finite open interval, got {domain!r}")
        self.f = f
        self._df = df
        self._ddf = ddf
        self.lo, self.hi = lo, hi
        self.label = label
        self.c3 = c3
        self.kinks = tuple(float(k) for k in kinks)
        self.has_derivatives = df is not None and ddf is not None
        self.margin_fraction = margin_fraction
        self.spec = spec

    def df(self, x: float) -> float:
        if self._df is not None:
            return float(self._df(x))
        return float(_fd1(self.f, x))

    def ddf(self, x: float) -> float:
        if self._ddf is not None:
            return float(self._ddf(x))
        return float(_fd2(self.f, x))

    def W(self, x: float) -> float:
        return math.sqrt(1.0 + self.df(x) ** 2)

    def _pos(self, t):
        return (t, float(self.f(t)))

    def _vel(self, t):
        return (1.0, self.df(t))

    def _acc(self, t):
        return (0.0, self.ddf(t))

    def __repr__(self):
        return f"GraphCurve({self.label!r}, domain=({self.lo!r}, {self.hi!r}))"


class ParametricCurve(Curve):
    """Parametric curve ``t -> (x, y)`` on [lo, hi]; closed loops wrap periodically."""

    def __init__(self, position, interval, velocity=None, acceleration=None, closed=False,
                 label="parametric", orientation=None, c3=True,
                 margin_fraction=DEFAULT_MARGIN, spec=None):
        lo, hi = map(float, interval)
        if lo >= hi:
            raise CurveError(f"empty parameter interval {interval!r}")
        self._position = position
        self._velocity = velocity
        self._acceleration = acceleration
        self.lo, self.hi = lo, hi
        self.closed = closed
        self.label = label
        self.c3 = c3
        self.has_derivatives = velocity is not None and acceleration is not None
        self.margin_fraction = margin_fraction
        self.spec = spec
        if closed:
            p0, p1 = position(lo), position(hi)
            if math.hypot(p0[0] - p1[0], p0[1] - p1[1]) > 1e-12:
                raise CurveError(f"closed curve does not close: {p0!r} != {p1!r}")
        if orientation is None:
            mid = 0.5 * (lo + hi)
            orientation = 1 if _cross(self._vel(mid), self._acc(mid)) >= 0 else -1
        self.orientation = orientation

    def _pos(self, t):
        x, y = self._position(t)
        return (float(x), float(y))

    def _vel(self, t):
        if self._velocity is not None:
            x, y = self._velocity(t)
        else:
            x, y = _fd1(self._position, t)
        return (float(x), float(y))

    def _acc(self, t):
        if self._acceleration is not None:
            x, y = self._acceleration(t)
        else:
            x, y = _fd2(self._position, t)
        return (float(x), float(y))

    def __repr__(self):
        return f"ParametricCurve({self.label!r}, [{self.lo!r}, {self.hi!r}], closed={self.closed})"


# ---------------------------------------------------------------------------
# constructors


def make_quadratic(a: float, b: float = 0.0, c: float = 0.0, domain=(-2.0, 2.0)) -> GraphCurve:
    """``y = a x^2 + b x + c`` with analytic derivatives."""
    if not a > 0:
        raise CurveError(f"quadratic needs a > 0, got {a!r}")
    return GraphCurve(
        lambda x: (a * x + b) * x + c,
        domain,
        df=lambda x: 2.0 * a * x + b,
        ddf=lambda x: 2.0 * a,
        label=f"quadratic(a={a!r}, b={b!r}, c={c!r})",
        spec={"kind": "quadratic", "a": a, "b": b, "c": c, "domain": list(domain)},
    )


def family_domain(c: float) -> tuple[float, float]:
    """Default working interval for the family curve: 4/(2|c|) wide, ending at the branch point."""
    edge = 1.0 / (2.0 * c)
    return (edge - 4.0 * edge, edge) if c > 0 else (edge, edge - 4.0 * edge)


def make_family_curve(b: float, c: float, domain=None) -> GraphCurve:
    """``f(x) = b((1 - cx) - sqrt(1 - 2cx))``, an arc of a tilted parabola.

    Evaluated in the cancellation-free form ``2 b c^2 x^2 / (1 + s)^2`` with
    ``s = sqrt(1 - 2cx)``.
    """
    if not b > 0:
        raise CurveError(f"family curve needs b > 0, got {b!r}")
    if c == 0:
        raise CurveError("family curve needs c != 0")
    if domain is None:
        domain = family_domain(c)
    edge = 1.0 / (2.0 * c)
    lo, hi = domain
    if (c > 0 and hi > edge) or (c < 0 and lo < edge):
        raise CurveError(f"domain {domain!r} crosses the branch point x = {edge!r}")

    def s(x):
        return math.sqrt(1.0 - 2.0 * c * x)

    def f(x):
        return 2.0 * b * c * c * x * x / (1.0 + s(x)) ** 2

    def df(x):
        r = s(x)
        return 2.0 * b * c * c * x / (r * (1.0 + r))

    def ddf(x):
        return b * c * c / s(x) ** 3

    return GraphCurve(f, domain, df=df, ddf=ddf, label=f"family(b={b!r}, c={c!r})",
                      spec={"kind": "family", "b": b, "c": c, "domain": list(domain)})


def make_example10(domain=(-2.0, 2.0)) -> GraphCurve:
    """Piecewise ``9x^2`` (x < 0) / ``(9/4) x^2`` (x >= 0): C^2 fails at the origin."""

    def f(x):
        return 9.0 * x * x if x < 0 else 2.25 * x * x

    def df(x):
        return 18.0 * x if x < 0 else 4.5 * x

    def ddf(x):
        return 18.0 if x < 0 else 4.5

    return GraphCurve(f, domain, df=df, ddf=ddf, label="example10", c3=False, kinks=(0.0,),
                      spec={"kind": "example10", "domain": list(domain)})


def make_ellipse(a: float, b: float) -> ParametricCurve:
    """Counter-clockwise ellipse ``(a cos t, b sin t)``, t in [0, 2 pi]."""
    if not (a > 0 and b > 0):
        raise CurveError(f"ellipse axes must be positive, got ({a!r}, {b!r})")
    return ParametricCurve(
        lambda t: (a * math.cos(t), b * math.sin(t)),
        (0.0, 2.0 * math.pi),
        velocity=lambda t: (-a * math.sin(t), b * math.cos(t)),
        acceleration=lambda t: (-a * math.cos(t), -b * math.sin(t)),
        closed=True,
        label=f"ellipse(a={a!r}, b={b!r})",
        orientation=1,
        spec={"kind": "ellipse", "a": a, "b": b},
    )


def make_offset_graph(base: GraphCurve, k: float) -> GraphCurve:
    """Vertical translate ``y = f(x) + k`` of a graph."""
    if not k > 0:
        raise CurveError(f"offset needs k > 0, got {k!r}")
    return GraphCurve(
        lambda x: base.f(x) + k,
        (base.lo, base.hi),
        df=base.df,
        ddf=base.ddf,
        label=f"offset({base.label}, k={k!r})",
        c3=base.c3,
        kinks=base.kinks,
        spec={"kind": "offset", "k": k, "base": base.spec},
    )


def make_polynomial(coefficients: Sequence[float], domain) -> GraphCurve:
    """Polynomial graph; ``coefficients`` in ascending powers."""
    poly = np.polynomial.Polynomial([float(v) for v in coefficients])
    d1, d2 = poly.deriv(1), poly.deriv(2)
    return GraphCurve(lambda x: float(poly(x)), domain,
                      df=lambda x: float(d1(x)), ddf=lambda x: float(d2(x)),
                      label=f"poly{list(poly.coef)!r}",
                      spec={"kind": "custom_poly", "coefficients": list(coefficients),
                            "domain": list(domain)})


def transform_curve(curve: Curve, matrix, offset=(0.0, 0.0), label=None) -> ParametricCurve:
    """Image of ``curve`` under the affine map ``X -> M X + offset`` as a parametric curve."""
    (m00, m01), (m10, m11) = matrix
    det = m00 * m11 - m01 * m10
    if det == 0:
        raise CurveError("affine map is singular")
    ox, oy = offset

    def lin(v):
        return (m00 * v[0] + m01 * v[1], m10 * v[0] + m11 * v[1])

    def pos(t):
        x, y = lin(curve.position(t))
        return (x + ox, y + oy)

    out = ParametricCurve(
        pos, (curve.lo, curve.hi),
        velocity=lambda t: lin(curve.velocity(t)),
        acceleration=lambda t: lin(curve.acceleration(t)),
        closed=curve.closed,
        label=label or f"affine({curve.label})",
        orientation=curve.orientation * (1 if det > 0 else -1),
        c3=curve.c3,
        margin_fraction=curve.margin_fraction,
    )
    out.kinks = curve.kinks
    return out


# ---------------------------------------------------------------------------
# pointwise geometry


def curvature_analytic(curve: Curve, t: float, fd_fallback: bool = True) -> float:
    """Curvature at parameter ``t`` toward the convex side.

    For graphs this is ``f''(x) / W(x)^3`` with ``W = sqrt(1 + f'^2)``.
    """
    curve.require(t)
    if not curve.has_derivatives and not fd_fallback:
        raise CurveError(f"{curve.label!r} has no analytic derivatives and fallback is disabled")
    if isinstance(curve, GraphCurve):
        return curve.ddf(t) / curve.W(t) ** 3
    return curve.signed_curvature(t)


class ConvexityCheck(NamedTuple):
    convex: bool
    margin: float  # smallest sampled curvature
    where: float  # parameter of the smallest sample


def check_strict_convexity(curve: Curve, n_samples: int = 101) -> ConvexityCheck:
    """Sample curvature at ``n_samples`` parameters; convex iff all are positive."""
    if n_samples < 3:
        raise ValueError("n_samples must be >= 3")
    ts = curve.sample_params(n_samples)
    ks = [curvature_analytic(curve, t) for t in ts]
    i = int(np.argmin(ks))
    return ConvexityCheck(bool(ks[i] > 0), float(ks[i]), float(ts[i]))


@dataclass(frozen=True)
class LocalChart:
    """The curve near ``origin`` written as ``v = chart(u)`` in its tangent frame.

    ``u`` runs along the tangent, ``v`` along the convex-side normal. The frame
    is a rigid motion of the plane: rotation by ``angle`` then translation.
    """

    curve: Curve
    origin: CurvePoint
    angle: float
    u_range: tuple[float, float]
    t_range: tuple[float, float]

    def _frame(self, q: Vec) -> Vec:
        p = self.origin.location
        d = (q[0] - p[0], q[1] - p[1])
        return (_dot(d, self.origin.tangent), _dot(d, self.origin.normal))

    def param_at(self, u: float) -> float:
        lo, hi = self.u_range
        if not lo <= u <= hi:
            raise CurveError(f"chart abscissa {u!r} outside {self.u_range!r}")
        t0 = self.origin.param
        if u == 0.0:
            return t0
        a, b = (t0, self.t_range[1]) if u > 0 else (self.t_range[0], t0)
        return find_root(lambda t: self._frame(self.curve.position(t))[0] - u, a, b)

    def __call__(self, u: float) -> float:
        return self._frame(self.curve.position(self.param_at(u)))[1]

    def derivatives(self, u: float) -> tuple[float, float]:
        """``(v'(u), v''(u))`` from the parametric derivatives."""
        t = self.param_at(u)
        T, N = self.origin.tangent, self.origin.normal
        d1, d2 = self.curve.velocity(t), self.curve.acceleration(t)
        xt, yt = _dot(d1, T), _dot(d1, N)
        xtt, ytt = _dot(d2, T), _dot(d2, N)
        return yt / xt, (ytt * xt - yt * xtt) / xt ** 3

    def to_world(self, u: float, v: float) -> Vec:
        p, T, N = self.origin.location, self.origin.tangent, self.origin.normal
        return (p[0] + u * T[0] + v * N[0], p[1] + u * T[1] + v * N[1])

    def as_graph(self) -> "GraphCurve":
        """The chart as a graph curve with ``f(0) = f'(0) = 0``."""
        lo, hi = self.t_range
        kinks = tuple(sorted(self._frame(self.curve.position(k))[0]
                             for k in self.curve.kinks if lo < k < hi))
        return GraphCurve(self, self.u_range,
                          df=lambda u: self.derivatives(u)[0],
                          ddf=lambda u: self.derivatives(u)[1],
                          label=f"chart({self.curve.label}, t={self.origin.param!r})",
                          c3=self.curve.c3, kinks=kinks)


def _chart_side_limit(curve: Curve, t0: float, tangent: Vec, direction: int) -> float:
    """Parameter where the curve stops advancing along ``tangent`` (or the domain end)."""
    if curve.closed:
        stop = t0 + direction * 0.5 * curve.width
    else:
        stop = curve.t_max if direction > 0 else curve.t_min
    if stop == t0:
        return t0
    bracket = first_sign_change(lambda t: _dot(curve.velocity(t), tangent), t0, stop)
    if bracket is None:
        return stop
    lo, hi = bracket
    t_turn = find_root(lambda t: _dot(curve.velocity(t), tangent), lo, hi)
    # keep strictly inside the monotone part
    return t0 + (t_turn - t0) * (1.0 - 1e-9)


def local_chart(curve: Curve, t: float) -> LocalChart:
    """Tangent-aligned chart at parameter ``t`` (origin at P, x-axis along the tangent)."""
    P = curve.point(t)
    if not curve.closed and (t - curve.t_min < curve.margin or curve.t_max - t < curve.margin):
        raise CurveError(f"chart at {t!r} is degenerate: too close to the domain boundary")
    t_lo = _chart_side_limit(curve, t, P.tangent, -1)
    t_hi = _chart_side_limit(curve, t, P.tangent, +1)
    if t_lo == t or t_hi == t:
        raise CurveError(f"chart at {t!r} has an empty range")
    angle = math.atan2(P.tangent[1], P.tangent[0])
    p = P.location

    def u_of(s):
        q = curve.position(s)
        return (q[0] - p[0]) * P.tangent[0] + (q[1] - p[1]) * P.tangent[1]

    return LocalChart(curve, P, angle, (u_of(t_lo), u_of(t_hi)), (t_lo, t_hi))


# ---------------------------------------------------------------------------
# curve specification files

BUILTIN_KINDS = ("quadratic", "family", "example10", "ellipse", "offset", "custom_poly")


def curve_from_spec(spec: dict) -> Curve:
    """Build a curve from a JSON-style mapping ``{"kind": ..., parameters...}``."""
    if not isinstance(spec, dict) or "kind" not in spec:
        raise CurveError("curve spec must be an object with a 'kind' field")
    kind = spec["kind"]
    try:
        if kind == "quadratic":
            return make_quadratic(float(spec.get("a", 1.0)), float(spec.get("b", 0.0)),
                                  float(spec.get("c", 0.0)),
                                  domain=tuple(spec.get("domain", (-2.0, 2.0))))
        if kind == "family":
            dom = spec.get("domain")
            return make_family_curve(float(spec["b"]), float(spec["c"]),
                                     domain=tuple(dom) if dom is not None else None)
        if kind == "example10":
            return make_example10(domain=tuple(spec.get("domain", (-2.0, 2.0))))
        if kind == "ellipse":
            return make_ellipse(float(spec["a"]), float(spec["b"]))
        if kind == "offset":
            base = curve_from_spec(spec["base"])
            if not isinstance(base, GraphCurve):
                raise CurveError("offset base must be a graph curve")
            return make_offset_graph(base, float(spec["k"]))
        if kind == "custom_poly":
            return make_polynomial(spec["coefficients"], tuple(spec["domain"]))
    except KeyError as exc:
        raise CurveError(f"curve spec {kind!r} is missing parameter {exc.args[0]!r}") from None
    raise CurveError(f"unknown curve kind {kind!r}; expected one of {BUILTIN_KINDS}")


def parse_builtin(text: str) -> dict:
    """Parse ``name[:key=value,...]`` (e.g. ``ellipse:a=2,b=1``) into a spec mapping."""
    name, _, rest = text.partition(":")
    spec: dict = {"kind": name.strip()}
    for item in filter(None, (s.strip() for s in rest.split(","))):
        key, sep, value = item.partition("=")
        if not sep:
            raise CurveError(f"builtin parameter {item!r} is not key=value")
        spec[key.strip()] = float(value)
    return spec


def load_curve(source: str) -> Curve:
    """Load a curve from ``builtin:<name>[:params]``, a JSON file path, or inline JSON."""
    if source.startswith("builtin:"):
        return curve_from_spec(parse_builtin(source[len("builtin:"):]))
    if source.lstrip().startswith("{"):
        return curve_from_spec(json.loads(source))
    return curve_from_spec(json.loads(Path(source).read_text()))
