import math

import numpy as np

from core.errors import InvalidInputError
from core.types import BoolArray, FloatArray, Point
from geometry.models import TOL, AnisoRect, Cone, unit


def project(p: Point, theta: float) -> float:
    """
    PURPOSE: Orthogonal projection pi_theta(p) = e_theta . p
    ARGUMENTS:
        p: Point - Planar point
        theta: float - Direction in turns
    RETURNS: float - Scalar projection; the perpendicular projection is project(p, theta + 1/4)
    """
    c, s = unit(theta)
    return c * p[0] + s * p[1]


def project_points(points: FloatArray, theta: float) -> FloatArray:
    c, s = unit(theta)
    return c * points[:, 0] + s * points[:, 1]


def cone_mask(cone: Cone, points: FloatArray) -> BoolArray:
    """
    PURPOSE: Vectorized cone membership of many points
    DESCRIPTION: Applies the algebraic test of the cone's direction filter to the displacements
    y - apex, then the radius test open at r_in and closed at r_out (both with tolerance TOL).
    ARGUMENTS:
        cone: Cone - The cone X(x, I, r_in, r_out)
        points: FloatArray - (n, 2) array of candidate points
    RETURNS: BoolArray - Membership flags
    """
    dx = points[:, 0] - cone.apex[0]
    dy = points[:, 1] - cone.apex[1]
    distance = np.hypot(dx, dy)
    inside = cone.directions.line_mask(dx, dy)
    if cone.r_in > 0:
        inside &= distance > cone.r_in + TOL
    if math.isfinite(cone.r_out):
        inside &= distance <= cone.r_out + TOL
    return inside


def cone_contains(cone: Cone, y: Point) -> bool:
    """
    PURPOSE: Membership of one point in a truncated cone
    DESCRIPTION: For an AngleInterval [theta - a, theta + a] this is
    |pi_perp(y) - pi_perp(x)| <= sin(2 pi a) |x - y| together with r_in < |x - y| <= r_out.
    ARGUMENTS:
        cone: Cone - The cone
        y: Point - Candidate point
    RETURNS: bool - True when y lies in the cone
    """
    return bool(cone_mask(cone, np.array([y], dtype=float))[0])


def aniso_metric(p: Point, q: Point, aspect: float) -> float:
    """
    PURPOSE: The anisotropic metric max(|x1 - x2|, aspect |y1 - y2|)
    DESCRIPTION: Balls of radius r in this metric are the rectangles R(x, 2r).
    ARGUMENTS:
        p: Point - First point
        q: Point - Second point
        aspect: float - H(J), positive
    RETURNS: float - Distance
    CONTRACTS:
        RAISES:
            - InvalidInputError - when aspect is not positive
    """
    if aspect <= 0:
        raise InvalidInputError("aspect", f"{aspect} must be positive")
    return max(abs(p[0] - q[0]), aspect * abs(p[1] - q[1]))


def scaled(points: FloatArray, aspect: float) -> FloatArray:
    """Coordinates (x, aspect * y), in which the anisotropic metric is the Chebyshev metric."""
    return np.column_stack([points[:, 0], aspect * points[:, 1]])


def rect_mask(rect: AnisoRect, points: FloatArray) -> BoolArray:
    cos_t, sin_t = unit(rect.orientation)
    dx = points[:, 0] - rect.center[0]
    dy = points[:, 1] - rect.center[1]
    along = cos_t * dx + sin_t * dy
    across = -sin_t * dx + cos_t * dy
    return (np.abs(along) <= rect.long / 2 + TOL) & (np.abs(across) <= rect.short / 2 + TOL)


def rect_contains(rect: AnisoRect, p: Point) -> bool:
    """
    PURPOSE: Membership in a closed anisotropic rectangle
    DESCRIPTION: Rotates p into the rectangle frame and compares with the half-sides.
    RETURNS: bool - True when p lies in the closed rectangle
    """
    return bool(rect_mask(rect, np.array([p], dtype=float))[0])


def rect_projection(rect: AnisoRect, theta: float) -> tuple[float, float]:
    """
    PURPOSE: The interval pi_theta(rect)
    RETURNS: tuple[float, float] - Closed interval (lo, hi)
    """
    center = project(rect.center, theta)
    cos_d = abs(math.cos(2 * math.pi * (theta - rect.orientation)))
    sin_d = abs(math.sin(2 * math.pi * (theta - rect.orientation)))
    half = rect.long / 2 * cos_d + rect.short / 2 * sin_d
    return center - half, center + half
