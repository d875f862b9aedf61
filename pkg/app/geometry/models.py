import logging
import math
from dataclasses import dataclass
from typing import Protocol

import numpy as np

from core.models import Model
from core.types import BoolArray, FloatArray, Point

logger = logging.getLogger(__name__)

# Absolute tolerance of every length comparison at geometry level.
TOL = 1e-12


def wrap(theta: float) -> float:
    """Reduce a turn-valued angle to [0, 1)."""
    value = theta % 1.0
    return 0.0 if value == 1.0 else value


def angle_distance(a: float, b: float) -> float:
    """
    PURPOSE: Distance of two directions on T = R/Z
    RETURNS: float - min(|a - b|, 1 - |a - b|) in [0, 1/2]
    """
    diff = abs(wrap(a) - wrap(b))
    return min(diff, 1.0 - diff)


def perp(theta: float) -> float:
    return wrap(theta + 0.25)


def unit(theta: float) -> tuple[float, float]:
    """e_theta = (cos 2 pi theta, sin 2 pi theta)."""
    return math.cos(2 * math.pi * theta), math.sin(2 * math.pi * theta)


class DirectionFilter(Protocol):
    """
    PURPOSE: Anything that decides which lines through an apex belong to a cone
    DESCRIPTION: Implemented by AngleInterval, AngleBand and directions.DirectionSet. A displacement
    (dx, dy) is accepted when the line through the apex with that direction belongs to the family,
    so both (dx, dy) and (-dx, -dy) give the same answer.
    """
    @property
    def measure(self) -> float:
        ...

    def line_mask(self, dx: FloatArray, dy: FloatArray) -> BoolArray:
        ...


@dataclass(frozen=True, kw_only=True)
class AngleInterval(Model):
    """
    PURPOSE: Closed interval of directions [center - halfwidth, center + halfwidth] on T
    ATTRIBUTES:
        center: float - Center direction in turns
        halfwidth: float - Half-width in turns, in (0, 1/4]
    """
    center: float
    halfwidth: float

    def __post_init__(self):
        if not 0 < self.halfwidth <= 0.25 + TOL:
            raise AngleInterval.InvalidError(f"halfwidth {self.halfwidth} outside (0, 1/4]")
        object.__setattr__(self, "center", wrap(self.center))

    @property
    def measure(self) -> float:
        return 2 * self.halfwidth

    def dilate(self, factor: float) -> "AngleInterval":
        """
        PURPOSE: The interval C*I with the same center
        DESCRIPTION: Half-widths beyond 1/4 are clamped, since a cone of half-width 1/4 already
        covers every line through its apex.
        ARGUMENTS:
            factor: float - Dilation factor C > 0
        RETURNS: AngleInterval - Dilated interval
        """
        halfwidth = factor * self.halfwidth
        if halfwidth > 0.25:
            logger.debug("clamping dilated halfwidth %s to 1/4", halfwidth)
            halfwidth = 0.25
        return AngleInterval(center=self.center, halfwidth=halfwidth)

    def perp(self) -> "AngleInterval":
        return AngleInterval(center=self.center + 0.25, halfwidth=self.halfwidth)

    def contains(self, theta: float) -> bool:
        """Direction membership; theta and theta + 1/2 are different directions here."""
        return angle_distance(theta, self.center) <= self.halfwidth + TOL

    def line_mask(self, dx: FloatArray, dy: FloatArray) -> BoolArray:
        cos_c, sin_c = unit(self.center)
        across = np.abs(-sin_c * dx + cos_c * dy)
        return across <= math.sin(2 * math.pi * self.halfwidth) * np.hypot(dx, dy) + TOL

    def bounds(self) -> tuple[float, float]:
        return self.center - self.halfwidth, self.center + self.halfwidth


@dataclass(frozen=True, kw_only=True)
class AngleBand(Model):
    """
    PURPOSE: Difference outer \\ inner of two concentric angle intervals, e.g. 3J \\ 0.5J
    DESCRIPTION: The inner interval is removed with its closure, so the line masks of inner and
    band partition the line mask of outer exactly.
    """
    outer: AngleInterval
    inner: AngleInterval

    def __post_init__(self):
        if angle_distance(self.outer.center, self.inner.center) > TOL or self.inner.halfwidth > self.outer.halfwidth:
            raise AngleBand.InvalidError("inner interval must be concentric and not wider than outer")

    @property
    def measure(self) -> float:
        return self.outer.measure - self.inner.measure

    def line_mask(self, dx: FloatArray, dy: FloatArray) -> BoolArray:
        return self.outer.line_mask(dx, dy) & ~self.inner.line_mask(dx, dy)


@dataclass(frozen=True, kw_only=True)
class Cone(Model):
    """
    PURPOSE: Truncated cone X(x, I, r_in, r_out)
    DESCRIPTION: Union of the lines through apex with directions in `directions`, restricted to
    the annulus r_in < |y - x| <= r_out. With r_in = 0 the apex itself is a member (for a direction
    set, only when the set is nonempty).
    ATTRIBUTES:
        apex: Point - Cone apex x
        directions: DirectionFilter - AngleInterval, AngleBand or DirectionSet
        r_in: float - Inner radius, open boundary
        r_out: float - Outer radius, closed boundary, may be inf
    """
    apex: Point
    directions: DirectionFilter
    r_in: float = 0.0
    r_out: float = math.inf

    def __post_init__(self):
        if self.r_in < 0 or not self.r_out > self.r_in:
            raise Cone.InvalidError(f"radii must satisfy 0 <= r_in < r_out, got {self.r_in}, {self.r_out}")
        object.__setattr__(self, "apex", (float(self.apex[0]), float(self.apex[1])))


@dataclass(frozen=True, kw_only=True)
class AnisoRect(Model):
    """
    PURPOSE: Closed rectangle with sides l(R) <= L(R) and orientation theta(R)
    DESCRIPTION: The long side runs along e_theta, the short side along e_{theta + 1/4}. The standard
    family R(x, r) has orientation 1/4, short side r and long side r / H(J), so its pi_0 image is
    pi_0(x) + [-r/2, r/2].
    ATTRIBUTES:
        center: Point - Rectangle center
        short: float - Length l(R) of the short side
        long: float - Length L(R) of the long side
        orientation: float - Direction theta(R) of the long side, in turns
    """
    center: Point
    short: float
    long: float
    orientation: float = 0.25

    def __post_init__(self):
        if self.short < 0 or self.long + TOL < self.short:
            raise AnisoRect.InvalidError(f"sides must satisfy 0 <= short <= long, got {self.short}, {self.long}")
        object.__setattr__(self, "center", (float(self.center[0]), float(self.center[1])))
        object.__setattr__(self, "orientation", wrap(self.orientation))

    def dilate(self, factor: float) -> "AnisoRect":
        return AnisoRect(center=self.center, short=factor * self.short, long=factor * self.long,
                         orientation=self.orientation)

    @classmethod
    def standard(cls, center: Point, r: float, aspect: float) -> "AnisoRect":
        """The rectangle R(x, r) = x + [-r/2, r/2] x [-r/(2 aspect), r/(2 aspect)]."""
        return cls(center=center, short=r, long=r / aspect, orientation=0.25)
