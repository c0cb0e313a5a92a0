"""Curvature from chord lengths.

As h -> 0 the tangent-parallel chord length behaves like ``2 sqrt(2h / kappa)``,
so ``8h / L(h)^2`` converges to the curvature. This module evaluates that
estimator on a geometric grid of heights and extrapolates to h = 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .chords import ChordError, TangentFrame
from .curves import Curve, CurvePoint, curvature_analytic


@dataclass
class CurvatureEstimate:
    point: CurvePoint
    h_grid: list[float]
    lengths: list[float]
    raw: list[float]
    extrapolated: float
    fitted_order: float
    analytic: Optional[float] = None
    rel_error: Optional[float] = None
    hypothesis_violated: bool = False
    notes: list[str] = field(default_factory=list)

    def rows(self):
        """Convergence table rows: (h, L, L/sqrt(h), kappa_hat, analytic, abs_err)."""
        for h, L, k in zip(self.h_grid, self.lengths, self.raw):
            err = abs(k - self.analytic) if self.analytic is not None else None
            yield h, L, L / math.sqrt(h), k, self.analytic, err


def _frame(curve, P) -> TangentFrame:
    return TangentFrame(curve, P.param if isinstance(P, CurvePoint) else float(P))


def kappa_chord(curve: Curve, P, h: float) -> float:
    """``8h / L(h)^2``."""
    L = _frame(curve, P).length(h)
    return 8.0 * h / (L * L)


def lemma6_ratio(curve: Curve, P, h: float) -> float:
    """``L(h) / sqrt(h)``, which tends to ``2 sqrt(2 / kappa)``."""
    return _frame(curve, P).length(h) / math.sqrt(h)


def default_h0(frame: TangentFrame) -> float:
    """Starting height ``min(0.1 / kappa_hat(h_max / 2), h_max / 4)``."""
    L = frame.length(0.5 * frame.h_max)
    k_half = 8.0 * 0.5 * frame.h_max / (L * L)
    return min(0.1 / k_half, 0.25 * frame.h_max)


def _crosses_kink(curve: Curve, frame: TangentFrame, h: float) -> bool:
    if not curve.kinks:
        return False
    tA, tB = frame.endpoints(h)
    return any(tA <= k <= tB for k in curve.kinks)


def kappa_extrapolated(curve: Curve, P, h0: Optional[float] = None, levels: int = 6,
                       ratio: float = 4.0) -> CurvatureEstimate:
    """Estimate curvature on the grid ``h_j = h0 / 4^j`` and extrapolate to h = 0.

    The estimator has an expansion in integer powers of h (odd powers of
    sqrt(h) cancel between the two chord ends), so the fit model is
    ``kappa + c1 h + c2 h^2`` by least squares. ``fitted_order`` is the
    log-log slope of ``|kappa_hat(h) - kappa_hat(h_finest)|`` against h.
    """
    if levels < 4:
        raise ValueError("need at least 4 levels")
    frame = _frame(curve, P)
    if h0 is None:
        h0 = default_h0(frame)
    if not 0 < h0 < frame.h_max:
        raise ChordError(f"h0={h0!r} outside (0, h_max={frame.h_max!r})")
    grid = [h0 / ratio ** j for j in range(levels)]
    if grid[-1] < frame.h_floor:
        raise ChordError(f"grid underflows the height floor {frame.h_floor:.3e}")
    lengths = [frame.length(h) for h in grid]
    raw = [8.0 * h / (L * L) for h, L in zip(grid, lengths)]

    hs = np.asarray(grid)
    design = np.column_stack([np.ones_like(hs), hs, hs * hs])
    coef, *_ = np.linalg.lstsq(design, np.asarray(raw), rcond=None)
    extrapolated = float(coef[0])

    diffs = np.abs(np.asarray(raw[:-1]) - raw[-1])
    keep = diffs > 0
    if keep.sum() >= 2:
        slope = np.polyfit(np.log(hs[:-1][keep]), np.log(diffs[keep]), 1)[0]
        order = float(slope)
    else:
        order = math.nan  # estimator exact on the grid

    violated = not curve.c3 and _crosses_kink(curve, frame, grid[0])
    notes = []
    if violated:
        notes.append("chord spans a non-C3 point: the limit need not equal the curvature")
        analytic = None
    else:
        analytic = curvature_analytic(curve, frame.t0)
    rel = abs(extrapolated - analytic) / abs(analytic) if analytic is not None else None
    return CurvatureEstimate(frame.P, grid, lengths, raw, extrapolated, order,
                             analytic, rel, violated, notes)
