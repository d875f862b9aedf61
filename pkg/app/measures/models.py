import enum
from core.compat import StrEnum
import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.spatial import ConvexHull, QhullError
from scipy.spatial.distance import pdist

from core.models import Model
from core.types import FloatArray, Point


class PrimitiveKind(StrEnum):
    SEGMENT = "segment"
    BOX = "box"


@dataclass(frozen=True, kw_only=True)
class Segment(Model):
    """Closed segment [a, b] carrying `mass`; a == b is a single point."""
    a: Point
    b: Point
    mass: float

    kind = PrimitiveKind.SEGMENT

    def __post_init__(self):
        if not self.mass >= 0:
            raise Segment.InvalidError(f"mass {self.mass} must be nonnegative")
        object.__setattr__(self, "a", (float(self.a[0]), float(self.a[1])))
        object.__setattr__(self, "b", (float(self.b[0]), float(self.b[1])))

    @property
    def length(self) -> float:
        return math.hypot(self.b[0] - self.a[0], self.b[1] - self.a[1])

    def vertices(self) -> list[Point]:
        return [self.a, self.b]


@dataclass(frozen=True, kw_only=True)
class Box(Model):
    """Axis-aligned closed square of side `side` around `center` carrying `mass`."""
    center: Point
    side: float
    mass: float

    kind = PrimitiveKind.BOX

    def __post_init__(self):
        if not self.mass >= 0 or not self.side >= 0:
            raise Box.InvalidError(f"side {self.side} and mass {self.mass} must be nonnegative")
        object.__setattr__(self, "center", (float(self.center[0]), float(self.center[1])))

    def vertices(self) -> list[Point]:
        cx, cy = self.center
        half = self.side / 2
        return [(cx - half, cy - half), (cx + half, cy - half), (cx - half, cy + half), (cx + half, cy + half)]


Primitive = Segment | Box


def exact_diameter(points: FloatArray) -> float:
    """
    PURPOSE: Diameter of a finite point set
    DESCRIPTION: The farthest pair lies on the convex hull, so distances are taken over hull
    vertices only; degenerate (collinear or tiny) inputs fall back to all pairs.
    """
    points = np.unique(points, axis=0)
    if len(points) < 2:
        return 0.0
    if len(points) > 3:
        try:
            points = points[ConvexHull(points).vertices]
        except QhullError:
            lo = np.argmin(points[:, 0] + 1e-3 * points[:, 1])
            hi = np.argmax(points[:, 0] + 1e-3 * points[:, 1])
            lo_y = np.argmin(points[:, 1])
            hi_y = np.argmax(points[:, 1])
            points = points[np.unique([lo, hi, lo_y, hi_y])]
    return float(pdist(points).max()) if len(points) > 1 else 0.0


@dataclass(frozen=True, eq=False)
class PlanarSet(Model):
    """
    PURPOSE: Exact planar support made of segments and boxes, each with a 1-dimensional mass
    DESCRIPTION: Source of truth for projections. total_mass and diameter are computed at
    construction; the diameter is the exact diameter of the union of primitives.
    ATTRIBUTES:
        primitives: tuple[Primitive, ...] - Segments and boxes
        total_mass: float - Sum of primitive masses, positive
        diameter: float - Diameter of the union
    """
    primitives: tuple[Primitive, ...]
    total_mass: float = field(init=False)
    diameter: float = field(init=False)

    def __post_init__(self):
        primitives = tuple(self.primitives)
        if not primitives:
            raise PlanarSet.InvalidError("a planar set needs at least one primitive")
        total = math.fsum(primitive.mass for primitive in primitives)
        if not total > 0:
            raise PlanarSet.InvalidError("total mass must be positive")
        object.__setattr__(self, "primitives", primitives)
        object.__setattr__(self, "total_mass", total)
        object.__setattr__(self, "diameter", exact_diameter(self.vertices()))

    def vertices(self) -> FloatArray:
        return np.array([vertex for primitive in self.primitives for vertex in primitive.vertices()], dtype=float)

    def normalized(self) -> "PlanarSet":
        """Copy with masses scaled so total_mass == 1."""
        scale = 1.0 / self.total_mass
        return PlanarSet(tuple(_with_mass(primitive, primitive.mass * scale) for primitive in self.primitives))

    def transformed(self, angle: float, shift: Point = (0.0, 0.0)) -> "PlanarSet":
        """Rigid motion: rotation by `angle` turns around the origin, then translation."""
        c, s = math.cos(2 * math.pi * angle), math.sin(2 * math.pi * angle)

        def move(p: Point) -> Point:
            return c * p[0] - s * p[1] + shift[0], s * p[0] + c * p[1] + shift[1]

        moved = []
        for primitive in self.primitives:
            if isinstance(primitive, Segment):
                moved.append(Segment(a=move(primitive.a), b=move(primitive.b), mass=primitive.mass))
            elif angle % 0.25 == 0:
                moved.append(Box(center=move(primitive.center), side=primitive.side, mass=primitive.mass))
            else:
                raise PlanarSet.InvalidError("boxes stay axis-aligned only under quarter-turn rotations")
        return PlanarSet(tuple(moved))

    @cached_property
    def segment_array(self) -> tuple[FloatArray, FloatArray, FloatArray]:
        """Endpoints a, b as (n, 2) arrays and masses, for vectorised projections."""
        segments = [primitive for primitive in self.primitives if isinstance(primitive, Segment)]
        a = np.array([segment.a for segment in segments], dtype=float).reshape(-1, 2)
        b = np.array([segment.b for segment in segments], dtype=float).reshape(-1, 2)
        return a, b, np.array([segment.mass for segment in segments], dtype=float)

    @cached_property
    def box_array(self) -> tuple[FloatArray, FloatArray, FloatArray]:
        boxes = [primitive for primitive in self.primitives if isinstance(primitive, Box)]
        centers = np.array([box.center for box in boxes], dtype=float).reshape(-1, 2)
        return centers, np.array([box.side for box in boxes], dtype=float), np.array([box.mass for box in boxes])

    def boundary_points(self) -> FloatArray:
        """Segment endpoints; used to tell interior cubes from boundary cubes."""
        points = [vertex for primitive in self.primitives if isinstance(primitive, Segment)
                  for vertex in primitive.vertices()]
        return np.array(points, dtype=float).reshape(-1, 2)


def _with_mass(primitive: Primitive, mass: float) -> Primitive:
    if isinstance(primitive, Segment):
        return Segment(a=primitive.a, b=primitive.b, mass=mass)
    return Box(center=primitive.center, side=primitive.side, mass=mass)


@dataclass(frozen=True, eq=False)
class DiscreteMeasure(Model):
    """
    PURPOSE: Weighted point sample of a planar set
    DESCRIPTION: Source of truth for cone-mass integrals. Arrays are read-only.
    ATTRIBUTES:
        points: FloatArray - (n, 2) sample points
        weights: FloatArray - (n,) positive weights
        spacing: float - Sampling resolution h the sample was built with
        total: float - Sum of weights (compensated summation)
    """
    points: FloatArray
    weights: FloatArray
    spacing: float
    total: float = field(init=False)

    def __post_init__(self):
        points = np.array(self.points, dtype=float).reshape(-1, 2)
        weights = np.array(self.weights, dtype=float).reshape(-1)
        if len(points) != len(weights):
            raise DiscreteMeasure.InvalidError("points and weights differ in length")
        if (weights <= 0).any():
            raise DiscreteMeasure.InvalidError("weights must be positive")
        if not self.spacing > 0:
            raise DiscreteMeasure.InvalidError("spacing must be positive")
        points.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "total", math.fsum(weights.tolist()))

    def __len__(self) -> int:
        return len(self.weights)

    def with_points(self, points: FloatArray, weights: FloatArray) -> "DiscreteMeasure":
        """Copy with extra atoms appended (used to corrupt samples on purpose)."""
        return DiscreteMeasure(np.vstack([self.points, np.asarray(points, dtype=float).reshape(-1, 2)]),
                               np.concatenate([self.weights, np.asarray(weights, dtype=float).reshape(-1)]),
                               self.spacing)

    def mass(self, mask: np.ndarray) -> float:
        return math.fsum(self.weights[mask].tolist())


@dataclass(frozen=True, kw_only=True, eq=False)
class DensityProfile(Model):
    """
    PURPOSE: Histogram density of a projected measure
    DESCRIPTION: bins[i] is the mass per unit length on [origin + i bw, origin + (i + 1) bw).
    sup_norm lower-bounds the true L-infinity norm and converges as the bin width shrinks
    together with the sample spacing. degenerate flags a bin carrying more than half the mass.
    """
    theta: float
    bin_width: float
    origin: float
    bins: FloatArray
    sup_norm: float
    l2_norm_sq: float
    degenerate: bool

    @property
    def mass(self) -> float:
        return math.fsum((self.bins * self.bin_width).tolist())


@dataclass(frozen=True)
class QuadratureParams:
    """Log-midpoint rule settings for integrals in dr/r."""
    nodes_per_decade: int = 16
    min_nodes: int = 16


@dataclass(frozen=True, kw_only=True)
class ConeEnergyReport:
    lhs: float
    rhs: float
    ratio: float
    r_min: float
    r_max: float


@dataclass(frozen=True, kw_only=True)
class CubeMassReport:
    """Measured constants of the rectangle mass bounds, per cube and aggregated."""
    theta: float
    density_sup: float
    upper_ratios: tuple[float, ...]
    lower_ratios: tuple[float, ...]
    interior: tuple[bool, ...]
    max_upper_constant: float
    min_lower_constant: float
