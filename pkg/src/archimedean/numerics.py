"""Small numerical kernels shared by the geometry modules.

Adaptive Simpson quadrature, bracketed root finding and a few sampling
helpers. Everything here works on plain Python floats.
"""

from __future__ import annotations

import math
import sys
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import brentq

EPS = sys.float_info.epsilon


class QuadratureError(ArithmeticError):
    """Adaptive quadrature hit its depth cap without meeting tolerance."""


class RootError(ArithmeticError):
    """A bracketed root solve failed (no sign change or no convergence)."""


def adaptive_simpson(
    func: Callable[[float], float],
    a: float,
    b: float,
    tol: float = 1e-11,
    max_depth: int = 40,
) -> float:
    """Integrate ``func`` over [a, b] by adaptive Simpson with Richardson correction.

    A panel is accepted when ``|S_left + S_right - S_whole| <= 15 * tol_panel``,
    or when that difference is at rounding level relative to the panel's
    absolute integral. Panels split the tolerance in half.

    Raises:
        QuadratureError: if a panel reaches ``max_depth`` unconverged.
    """
    if a == b:
        return 0.0
    fa, fm, fb = func(a), func(0.5 * (a + b)), func(b)
    whole = (b - a) * (fa + 4.0 * fm + fb) / 6.0
    return _simpson_panel(func, a, b, fa, fm, fb, whole, tol, max_depth)


def _simpson_panel(func, a, b, fa, fm, fb, whole, tol, depth):
    m = 0.5 * (a + b)
    lm, rm = 0.5 * (a + m), 0.5 * (m + b)
    flm, frm = func(lm), func(rm)
    left = (m - a) * (fa + 4.0 * flm + fm) / 6.0
    right = (b - m) * (fm + 4.0 * frm + fb) / 6.0
    delta = left + right - whole
    noise = 64.0 * EPS * (abs(m - a) * (abs(fa) + 4 * abs(flm) + abs(fm))
                          + abs(b - m) * (abs(fm) + 4 * abs(frm) + abs(fb))) / 6.0
    if abs(delta) <= 15.0 * tol or abs(delta) <= noise:
        return left + right + delta / 15.0
    if depth <= 0:
        raise QuadratureError(
            f"adaptive Simpson depth cap reached on [{a!r}, {b!r}], "
            f"error estimate {abs(delta) / 15.0:.3e} > tol {tol:.3e}"
        )
    return (_simpson_panel(func, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + _simpson_panel(func, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1))


def integrate_pieces(func, breakpoints: Sequence[float], tol: float = 1e-11) -> float:
    """Adaptive Simpson over consecutive ``breakpoints`` with the tolerance shared by length."""
    total_len = abs(breakpoints[-1] - breakpoints[0])
    if total_len == 0.0:
        return 0.0
    acc = 0.0
    for lo, hi in zip(breakpoints[:-1], breakpoints[1:]):
        acc += adaptive_simpson(func, lo, hi, tol * abs(hi - lo) / total_len)
    return acc


def find_root(func: Callable[[float], float], a: float, b: float,
              fa: float | None = None, fb: float | None = None) -> float:
    """Root of ``func`` in the bracket [a, b] (Brent: safeguarded bisection/secant/IQI)."""
    fa = func(a) if fa is None else fa
    fb = func(b) if fb is None else fb
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if math.copysign(1.0, fa) == math.copysign(1.0, fb):
        raise RootError(f"no sign change on [{a!r}, {b!r}] (f={fa!r}, {fb!r})")
    xtol = EPS * max(abs(a), abs(b))
    root, info = brentq(func, a, b, xtol=xtol, rtol=4 * EPS, maxiter=500,
                        full_output=True, disp=False)
    if not info.converged:
        raise RootError(f"root solve did not converge on [{a!r}, {b!r}]: {info.flag}")
    return root


def first_sign_change(func, start: float, stop: float, samples: int = 128):
    """Scan (start, stop] for the first sign change of ``func``.

    ``func(start)`` is not evaluated; the sign reference is the first interior
    sample. Returns ``(lo, hi)`` bracketing the change, or ``None``.
    """
    ts = np.linspace(start, stop, samples + 1)[1:]
    prev_t, prev_v = ts[0], func(ts[0])
    for t in ts[1:]:
        v = func(t)
        if v == 0.0 or (v > 0) != (prev_v > 0):
            return float(prev_t), float(t)
        prev_t, prev_v = t, v
    return None


def geometric_grid(lo: float, hi: float, n: int) -> list[float]:
    """``n`` geometrically spaced values from ``hi`` down to ``lo`` (decreasing)."""
    if n == 1:
        return [hi]
    return [float(v) for v in np.geomspace(hi, lo, n)]


def loglog_fit(x: Sequence[float], y: Sequence[float]):
    """Least-squares fit of ``log y = log a + b log x``.

    Returns ``(a, b, residual)`` where ``residual`` is the max absolute
    residual in log space (dimensionless).
    """
    lx = np.log(np.asarray(x, dtype=float))
    ly = np.log(np.asarray(y, dtype=float))
    if np.ptp(lx) == 0.0:
        raise ValueError("degenerate power-law fit: all abscissae identical")
    design = np.column_stack([np.ones_like(lx), lx])
    coef, *_ = np.linalg.lstsq(design, ly, rcond=None)
    resid = ly - design @ coef
    return float(math.exp(coef[0])), float(coef[1]), float(np.max(np.abs(resid)))
