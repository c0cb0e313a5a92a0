"""Numerical checks of the five area conditions that characterize parabolas.

  A  S = a |PV|^(3/2), one constant a for the whole graph
  B  chords tangent to the lifted graph y = f + k cut off a constant area phi(k)
  C  S = (4/3) |triangle ABP|
  D  S = a(P) |triangle ABP|^b(P)
  E  S = a(P) |PV|^b(P)

Each check samples points and heights, measures a dimensionless deviation and
reports ``satisfied`` when it is within tolerance. Curves flagged as not C^3
get ``hypothesis_violated`` whatever the numbers say; the raw outcome is kept
in ``within_tolerance``.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import NamedTuple, Optional

import numpy as np

from .chords import ChordError, TangentFrame
from .curves import Curve, CurveError, GraphCurve
from .numerics import geometric_grid, loglog_fit

SATISFIED = "satisfied"
VIOLATED = "violated"
HYPOTHESIS_VIOLATED = "hypothesis_violated"

ARCHIMEDES_RATIO = 4.0 / 3.0


@dataclass(frozen=True)
class SamplingConfig:
    n_points: int = 9
    n_heights: int = 7
    tol: float = 1e-6
    h_lo_frac: float = 1.0 / 2048.0
    h_hi_frac: float = 1.0 / 8.0
    fit_heights: int = 8
    fit_lo_frac: float = 1.0 / 4096.0
    fit_hi_frac: float = 1.0 / 8.0
    point_lo_frac: float = 0.15
    point_hi_frac: float = 0.85

    def __post_init__(self):
        if self.n_points < 1 or self.n_heights < 1:
            raise ValueError("sampling counts must be positive")
        if self.fit_heights < 8:
            raise ValueError("power-law fits need at least 8 heights")
        if not self.tol > 0:
            raise ValueError("tolerance must be positive")


@dataclass
class ConditionReport:
    condition: str
    curve: str
    samples: list[dict]
    fitted: dict
    max_deviation: float
    within_tolerance: bool
    verdict: str
    tolerance: float
    grid: dict = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return asdict(self)


class PowerFit(NamedTuple):
    a: float
    b: float
    residual: float  # max |log-space residual|


def _verdict(curve: Curve, deviation: float, tol: float) -> tuple[bool, str]:
    ok = bool(deviation <= tol)
    if not curve.c3:
        return ok, HYPOTHESIS_VIOLATED
    return ok, SATISFIED if ok else VIOLATED


def _need_graph(curve: Curve, condition: str) -> None:
    if not isinstance(curve, GraphCurve):
        raise CurveError(f"condition {condition} is defined for graph curves only")


def _height_cap(frame: TangentFrame) -> float:
    """Usable height range at a point: h_max, cut below any non-C3 point not at P itself.

    On a curve with a kink away from P only chords that stay clear of it are
    meaningful ("sufficiently small h").
    """
    cap = frame.h_max
    for k in frame.curve.kinks:
        if abs(k - frame.t0) > 1e-12 * frame.curve.width and frame.curve.contains(k):
            cap = min(cap, frame.psi(k))
    return cap


def _frames(curve: Curve, cfg: SamplingConfig) -> list[TangentFrame]:
    ts = curve.sample_params(cfg.n_points, cfg.point_lo_frac, cfg.point_hi_frac)
    return [TangentFrame(curve, t) for t in ts]


def _grid_note(cfg: SamplingConfig, lo: float, hi: float) -> dict:
    return {"points": cfg.n_points, "heights": cfg.n_heights,
            "h_from": f"h_cap*{lo!r}", "h_to": f"h_cap*{hi!r}"}


def _sections(curve: Curve, cfg: SamplingConfig):
    for frame in _frames(curve, cfg):
        cap = _height_cap(frame)
        for h in geometric_grid(cap * cfg.h_lo_frac, cap * cfg.h_hi_frac, cfg.n_heights):
            yield frame, frame.chord(h)


def check_condition_C(curve: Curve, n_points: int = 9, n_heights: int = 7, tol: float = 1e-6,
                      config: Optional[SamplingConfig] = None) -> ConditionReport:
    """Archimedes ratio S / |triangle ABP| against 4/3 over a point x height grid."""
    cfg = config or SamplingConfig(n_points=n_points, n_heights=n_heights, tol=tol)
    samples = []
    worst = 0.0
    for frame, sec in _sections(curve, cfg):
        dev = abs(sec.ratio - ARCHIMEDES_RATIO)
        samples.append({"t": frame.t0, "h": sec.h, "L": sec.L, "S": sec.S,
                        "triangle": sec.triangle, "ratio": sec.ratio, "deviation": dev})
        worst = max(worst, dev)
    ok, verdict = _verdict(curve, worst, cfg.tol)
    i = int(np.argmax([s["deviation"] for s in samples]))
    fitted = {"ratio_min": min(s["ratio"] for s in samples),
              "ratio_max": max(s["ratio"] for s in samples),
              "worst_t": samples[i]["t"], "worst_h": samples[i]["h"]}
    return ConditionReport("C", curve.label, samples, fitted, worst, ok, verdict, cfg.tol,
                           _grid_note(cfg, cfg.h_lo_frac, cfg.h_hi_frac))


def check_condition_A(curve: GraphCurve, n_points: int = 9, n_heights: int = 7,
                      tol: float = 1e-6, config: Optional[SamplingConfig] = None
                      ) -> ConditionReport:
    """Is ``S / |PV|^(3/2)`` one constant over all sampled points and heights?"""
    _need_graph(curve, "A")
    cfg = config or SamplingConfig(n_points=n_points, n_heights=n_heights, tol=tol)
    samples = []
    for frame, sec in _sections(curve, cfg):
        a = sec.S / sec.PV ** 1.5
        samples.append({"t": frame.t0, "h": sec.h, "PV": sec.PV, "S": sec.S, "a": a})
    values = np.array([s["a"] for s in samples])
    mean = float(values.mean())
    spread = float(np.max(np.abs(values - mean)) / mean)
    ok, verdict = _verdict(curve, spread, cfg.tol)
    return ConditionReport("A", curve.label, samples, {"a": mean}, spread, ok, verdict, cfg.tol,
                           _grid_note(cfg, cfg.h_lo_frac, cfg.h_hi_frac))


def default_k(curve: GraphCurve) -> float:
    """``1e-2 * width^2 * f''(mid) / 2``."""
    mid = 0.5 * (curve.lo + curve.hi)
    return 1e-2 * curve.width ** 2 * curve.ddf(mid) / 2.0


def phi(curve: GraphCurve, v: float, k: float) -> float:
    """Area cut from the graph by the tangent to ``y = f + k`` at abscissa ``v``.

    That tangent is the chord parallel to the tangent at P = (v, f(v)) at
    normal height ``k / W(v)``.
    """
    frame = TangentFrame(curve, v)
    h = k / curve.W(v)
    if h >= frame.h_max:
        raise ChordError(f"tangent at V=({v!r}, f+{k!r}) does not meet the curve twice in its domain")
    return frame.chord(h).S


def _lifted_tangent_ok(curve: GraphCurve, v: float, k: float) -> bool:
    try:
        return k / curve.W(v) < TangentFrame(curve, v).h_max
    except CurveError:
        return False


def _feasible_span(curve: GraphCurve, k: float, iterations: int = 50) -> tuple[float, float]:
    """Abscissa interval around the domain midpoint where the lifted tangent cuts the graph twice."""
    mid = 0.5 * (curve.lo + curve.hi)
    if not _lifted_tangent_ok(curve, mid, k):
        raise ChordError(f"k={k!r} too large: tangent to the lifted graph misses the curve at the midpoint")
    ends = []
    for edge in (curve.t_min, curve.t_max):
        if _lifted_tangent_ok(curve, edge, k):
            ends.append(edge)
            continue
        good, bad = mid, edge
        for _ in range(iterations):
            trial = 0.5 * (good + bad)
            if _lifted_tangent_ok(curve, trial, k):
                good = trial
            else:
                bad = trial
        ends.append(good)
    return ends[0], ends[1]


def check_condition_B(curve: GraphCurve, k: Optional[float] = None, n_points: int = 9,
                      tol: float = 1e-6, config: Optional[SamplingConfig] = None
                      ) -> ConditionReport:
    """Is the area phi(k) cut by tangents to the lifted graph independent of the tangency point?"""
    _need_graph(curve, "B")
    cfg = config or SamplingConfig(n_points=n_points, tol=tol)
    if k is None:
        k = default_k(curve)
    if not k > 0:
        raise ValueError(f"k must be positive, got {k!r}")
    lo, hi = _feasible_span(curve, k)
    samples = []
    for v in np.linspace(lo + cfg.point_lo_frac * (hi - lo), lo + cfg.point_hi_frac * (hi - lo),
                         cfg.n_points):
        samples.append({"v": float(v), "k": k, "area": phi(curve, float(v), k)})
    areas = np.array([s["area"] for s in samples])
    mean = float(areas.mean())
    spread = float(np.max(np.abs(areas - mean)) / mean)
    ok, verdict = _verdict(curve, spread, cfg.tol)
    fitted = {"phi": mean, "k": k, "phi_over_k32": mean / k ** 1.5}
    return ConditionReport("B", curve.label, samples, fitted, spread, ok, verdict, cfg.tol,
                           {"points": cfg.n_points, "k": k})


def _fit_heights(frame: TangentFrame, n_heights: int, cfg: SamplingConfig) -> list[float]:
    cap = _height_cap(frame)
    return geometric_grid(cap * cfg.fit_lo_frac, cap * cfg.fit_hi_frac, n_heights)


def fit_condition_D(curve: Curve, P, n_heights: int = 8,
                    config: Optional[SamplingConfig] = None) -> PowerFit:
    """Fit ``S = a |triangle|^b`` at one point over a geometric height grid."""
    if n_heights < 8:
        raise ValueError("need at least 8 heights")
    cfg = config or SamplingConfig()
    frame = TangentFrame(curve, getattr(P, "param", P))
    secs = [frame.chord(h) for h in _fit_heights(frame, n_heights, cfg)]
    return PowerFit(*loglog_fit([s.triangle for s in secs], [s.S for s in secs]))


def fit_condition_E(curve: GraphCurve, P, n_heights: int = 8,
                    config: Optional[SamplingConfig] = None) -> PowerFit:
    """Fit ``S = a |PV|^b`` at one point of a graph."""
    _need_graph(curve, "E")
    if n_heights < 8:
        raise ValueError("need at least 8 heights")
    cfg = config or SamplingConfig()
    frame = TangentFrame(curve, getattr(P, "param", P))
    secs = [frame.chord(h) for h in _fit_heights(frame, n_heights, cfg)]
    return PowerFit(*loglog_fit([s.PV for s in secs], [s.S for s in secs]))


def _check_power_law(curve, condition, fitter, expected_b, cfg) -> ConditionReport:
    samples = []
    for t in curve.sample_params(cfg.n_points, cfg.point_lo_frac, cfg.point_hi_frac):
        fit = fitter(curve, t, cfg.fit_heights, cfg)
        samples.append({"t": t, "a": fit.a, "b": fit.b, "residual": fit.residual})
    worst = max(s["residual"] for s in samples)
    a_vals = np.array([s["a"] for s in samples])
    b_vals = np.array([s["b"] for s in samples])
    fitted = {
        "b_mean": float(b_vals.mean()),
        "b_max_offset": float(np.max(np.abs(b_vals - expected_b))),
        "a_mean": float(a_vals.mean()),
        "a_spread": float(np.max(np.abs(a_vals - a_vals.mean())) / a_vals.mean()),
    }
    ok, verdict = _verdict(curve, worst, cfg.tol)
    return ConditionReport(condition, curve.label, samples, fitted, worst, ok, verdict, cfg.tol,
                           {"points": cfg.n_points, "heights": cfg.fit_heights,
                            "h_from": f"h_cap*{cfg.fit_lo_frac!r}",
                            "h_to": f"h_cap*{cfg.fit_hi_frac!r}"})


def check_condition_D(curve: Curve, n_points: int = 9, tol: float = 1e-6,
                      config: Optional[SamplingConfig] = None) -> ConditionReport:
    """Per-point power law in the triangle area; deviation is the worst log residual."""
    cfg = config or SamplingConfig(n_points=n_points, tol=tol)
    return _check_power_law(curve, "D", fit_condition_D, 1.0, cfg)


def check_condition_E(curve: GraphCurve, n_points: int = 9, tol: float = 1e-6,
                      config: Optional[SamplingConfig] = None) -> ConditionReport:
    """Per-point power law in |PV|; reports the spread of a(P) across points."""
    _need_graph(curve, "E")
    cfg = config or SamplingConfig(n_points=n_points, tol=tol)
    return _check_power_law(curve, "E", fit_condition_E, 1.5, cfg)


@dataclass
class Classification:
    verdict: str  # parabola | not_parabola | withheld
    report: ConditionReport
    evidence: dict


def classify_parabola(curve: Curve, config: Optional[SamplingConfig] = None) -> Classification:
    """Parabola iff the Archimedes ratio holds on the sampling grid.

    For curves that are not C^3 the check still runs and is recorded, but the
    classification is withheld.
    """
    cfg = config or SamplingConfig()
    report = check_condition_C(curve, config=cfg)
    evidence = {
        "condition_C_max_deviation": report.max_deviation,
        "condition_C_within_tolerance": report.within_tolerance,
        "worst_ratio_t": report.fitted["worst_t"],
        "worst_ratio_h": report.fitted["worst_h"],
        "ratio_range": [report.fitted["ratio_min"], report.fitted["ratio_max"]],
    }
    if isinstance(curve, GraphCurve):
        mid = curve.sample_params(1, 0.5, 0.5)[0]
        for name, fitter in (("D", fit_condition_D), ("E", fit_condition_E)):
            try:
                evidence[f"fit_{name}"] = fitter(curve, mid, cfg.fit_heights, cfg)._asdict()
            except (ChordError, CurveError, ArithmeticError) as exc:
                evidence[f"fit_{name}"] = {"error": str(exc)}
    if not curve.c3:
        verdict = "withheld"
        evidence["note"] = ("curve is not C3; condition C on tested samples: "
                            + ("satisfied" if report.within_tolerance else "violated"))
    else:
        verdict = "parabola" if report.verdict == SATISFIED else "not_parabola"
    return Classification(verdict, report, evidence)
