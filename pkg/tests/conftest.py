import math

import numpy as np
import pytest

from archimedean.curves import (
    make_ellipse,
    make_example10,
    make_family_curve,
    make_quadratic,
)

BOTTOM = 1.5 * math.pi  # parameter of (0, -b) on the built-in ellipse


def circle_segment_area(r, h):
    """Area of the circular segment of height h (closed form)."""
    return r * r * math.acos((r - h) / r) - (r - h) * math.sqrt(2 * r * h - h * h)


def polygon_section_area(curve, tA, tB, n=20001):
    """Brute-force section area: shoelace over a dense polyline of the arc closed by the chord."""
    ts = np.linspace(tA, tB, n)
    pts = np.array([curve.position(t) for t in ts])
    x, y = pts[:, 0], pts[:, 1]
    return 0.5 * abs(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))


@pytest.fixture
def parabola():
    return make_quadratic(1.0)


@pytest.fixture
def circle():
    return make_ellipse(1.0, 1.0)


@pytest.fixture
def ellipse21():
    return make_ellipse(2.0, 1.0)


@pytest.fixture
def family():
    return make_family_curve(1.0, 0.5)


@pytest.fixture
def example10():
    return make_example10()


def builtin_curves():
    """The full built-in set with a representative parameter for each."""
    return [
        (make_quadratic(1.0), 0.3),
        (make_quadratic(4.0, -1.0, 2.0), 0.2),
        (make_family_curve(1.0, 0.5), -0.4),
        (make_family_curve(2.0, -1.0), 0.2),
        (make_ellipse(1.0, 1.0), BOTTOM),
        (make_ellipse(2.0, 1.0), 0.7),
        (make_example10(), 0.8),
    ]
