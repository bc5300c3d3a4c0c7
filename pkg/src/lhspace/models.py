"""The two standard models of hyperbolic 3-space and the map between them.

Upper half space:  {(x0, x1, x2) : x0 > 0} with metric
    ds^2 = (dx0^2 + dx1^2 + dx2^2) / x0^2,
written here as (t, z) with t = x0 and z = x1 + i x2.

Poincare ball:  {y in R^3 : |y| < 1} with metric
    ds^2 = 4 (dy1^2 + dy2^2 + dy3^2) / (1 - |y|^2)^2.

The conversion (t, z) -> y is the rational map

    y1 = 2 x1 / D,   y2 = 2 x2 / D,   y3 = (t^2 + |z|^2 - 1) / D,

with D = (t + 1)^2 + |z|^2; it sends t -> infinity to the north pole
(0, 0, 1) and is an isometry of the two metrics above.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NearBoundary

# Guard for ball -> half-space conversion: the denominators of the inverse
# map degenerate on the ideal boundary |y| = 1.
EPS_CHART = 1e-9


@dataclass(frozen=True)
class UpperHalfPoint:
    """A point of the upper half space model: height t > 0 and z = x1 + i x2."""

    t: float
    z: complex

    def __post_init__(self):
        if not self.t > 0.0:
            raise ValueError(f"upper-half-space point needs t > 0, got t={self.t}")

    @property
    def xyz(self) -> np.ndarray:
        """Coordinates in the order (x0, x1, x2)."""
        return np.array([self.t, self.z.real, self.z.imag])


@dataclass(frozen=True)
class BallPoint:
    """A point of the Poincare ball model, |y| < 1."""

    y: tuple[float, float, float]

    def __post_init__(self):
        if not float(np.dot(self.y, self.y)) < 1.0:
            raise ValueError(f"ball point needs |y| < 1, got {self.y}")

    @property
    def vec(self) -> np.ndarray:
        return np.asarray(self.y, dtype=float)


def uhs_to_ball(p: UpperHalfPoint) -> BallPoint:
    """Convert an upper-half-space point to the Poincare ball."""
    t, x1, x2 = p.t, p.z.real, p.z.imag
    den = (t + 1.0) ** 2 + x1 * x1 + x2 * x2
    y1 = 2.0 * x1 / den
    y2 = 2.0 * x2 / den
    y3 = (t * t + x1 * x1 + x2 * x2 - 1.0) / den
    return BallPoint((y1, y2, y3))


def ball_to_uhs(q: BallPoint) -> UpperHalfPoint:
    """Convert a ball point to the upper half space.

    Inverts the rational map above:

        t = (1 - |y|^2) / E,    z = 2 (y1 + i y2) / E,

    with E = (1 - y3)^2 + y1^2 + y2^2, which vanishes only as y approaches
    the north pole (the image of t -> infinity).
    """
    y1, y2, y3 = q.y
    s = y1 * y1 + y2 * y2 + y3 * y3
    if s > (1.0 - EPS_CHART) ** 2:
        raise NearBoundary(f"|y| = {np.sqrt(s):.17g} is within {EPS_CHART} of the boundary")
    e = (1.0 - y3) ** 2 + y1 * y1 + y2 * y2
    t = (1.0 - s) / e
    z = complex(2.0 * y1 / e, 2.0 * y2 / e)
    return UpperHalfPoint(t, z)


def metric_tensor(point: UpperHalfPoint | BallPoint) -> np.ndarray:
    """Hyperbolic metric as a 3x3 matrix at the given point.

    Both models are conformal to the Euclidean metric: 1/t^2 times the
    identity in the half space (coordinate order x0, x1, x2), and
    4/(1-|y|^2)^2 times the identity in the ball.
    """
    if isinstance(point, UpperHalfPoint):
        return np.eye(3) / point.t**2
    if isinstance(point, BallPoint):
        s = float(np.dot(point.y, point.y))
        return np.eye(3) * 4.0 / (1.0 - s) ** 2
    raise TypeError(f"unsupported point type {type(point).__name__}")


def uhs_inner(p: UpperHalfPoint, u: np.ndarray, w: np.ndarray) -> float:
    """Hyperbolic inner product of tangent vectors (du0, du1, du2) at p."""
    return float(np.dot(u, w)) / p.t**2


def uhs_norm(p: UpperHalfPoint, u: np.ndarray) -> float:
    return float(np.sqrt(max(uhs_inner(p, u, u), 0.0)))
