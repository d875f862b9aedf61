import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree

from core.types import FloatArray, IndexArray, Point
from geometry.models import TOL, DirectionFilter
from geometry.operations import scaled
from measures.models import DiscreteMeasure
from measures.quadrature import LogQuadrature


@dataclass(frozen=True)
class ConeRow:
    """Sample points inside X(x, I) seen from one apex, sorted by distance."""
    distances: FloatArray
    indices: IndexArray
    cumulative: FloatArray


class ConeProfile:
    """
    PURPOSE: Per-apex radial mass profiles of cones with a fixed direction family
    DESCRIPTION: For an apex x (a sample point) keeps the points of X(x, I) farther than the
    exclusion radius, sorted by distance, together with their cumulative weights. Every
    truncated cone mass mu(X(x, I, r, R)) is then two binary searches. Rows are built lazily and
    memoised when `cache` is set.
    ATTRIBUTES:
        mu: DiscreteMeasure - Sampled measure
        directions: DirectionFilter - Direction family I of the cones
        exclude_radius: float - Points with |y - x| <= exclude_radius are ignored
    """
    def __init__(self, mu: DiscreteMeasure, directions: DirectionFilter, exclude_radius: float, cache: bool = True):
        self.mu = mu
        self.directions = directions
        self.exclude_radius = exclude_radius
        self.cache = cache
        self._rows: dict[int, ConeRow] = {}

    def row(self, i: int) -> ConeRow:
        row = self._rows.get(i)
        if row is None:
            row = self._build(i)
            if self.cache:
                self._rows[i] = row
        return row

    def _build(self, i: int) -> ConeRow:
        points = self.mu.points
        dx = points[:, 0] - points[i, 0]
        dy = points[:, 1] - points[i, 1]
        distance = np.hypot(dx, dy)
        inside = self.directions.line_mask(dx, dy) & (distance > self.exclude_radius)
        indices = np.flatnonzero(inside)
        order = np.argsort(distance[indices], kind="stable")
        indices = indices[order]
        weights = self.mu.weights[indices]
        return ConeRow(distances=distance[indices], indices=indices,
                       cumulative=np.concatenate([[0.0], np.cumsum(weights)]))

    def mass_within(self, i: int, r: float | FloatArray) -> float | FloatArray:
        """mu(X(x_i, I, exclude_radius, r)); vectorised over r."""
        row = self.row(i)
        position = np.searchsorted(row.distances, np.asarray(r) + TOL, side="right")
        return row.cumulative[position]

    def mass_between(self, i: int, r_in: float | FloatArray, r_out: float | FloatArray) -> float | FloatArray:
        """mu(X(x_i, I, max(r_in, exclude_radius), r_out)) with r_in open."""
        row = self.row(i)
        lo = np.searchsorted(row.distances, np.asarray(r_in) + TOL, side="right")
        hi = np.searchsorted(row.distances, np.asarray(r_out) + TOL, side="right")
        return np.maximum(row.cumulative[hi] - row.cumulative[lo], 0.0)

    def max_within(self, i: int, radius: float) -> tuple[float, int] | None:
        """Farthest cone point within `radius` of the apex, as (distance, sample index)."""
        row = self.row(i)
        position = int(np.searchsorted(row.distances, radius + TOL, side="right"))
        if position == 0:
            return None
        return float(row.distances[position - 1]), int(row.indices[position - 1])

    def energy(self, i: int, a: float, b: float, quadrature: LogQuadrature, inner: float | None = None) -> float:
        """
        PURPOSE: int_a^b mu(X(x_i, I, r)) / r dr/r by the log-midpoint rule
        DESCRIPTION: With `inner` set the cone is doubly truncated to radii in (inner * r, r], the
        variant behind the truncated exterior energies.
        """
        radii, weight = quadrature.nodes(a, b)
        if len(radii) == 0:
            return 0.0
        if inner is None:
            masses = self.mass_within(i, radii)
        else:
            masses = self.mass_between(i, inner * radii, radii)
        return math.fsum((masses / radii).tolist()) * weight


class RectIndex:
    """
    PURPOSE: Mass queries of standard rectangles R(x, r) over a sample
    DESCRIPTION: In the coordinates (x, aspect * y) the rectangle x + [-r/2, r/2] x [-r/(2 aspect),
    r/(2 aspect)] is the Chebyshev ball of radius r/2, answered by a k-d tree.
    """
    def __init__(self, mu: DiscreteMeasure, aspect: float):
        self.mu = mu
        self.aspect = aspect
        self.tree = cKDTree(scaled(mu.points, aspect))

    def members(self, center: Point, side: float) -> IndexArray:
        query = (center[0], self.aspect * center[1])
        return np.array(sorted(self.tree.query_ball_point(query, r=side / 2 + TOL, p=np.inf)), dtype=np.intp)

    def mass(self, center: Point, side: float) -> float:
        return math.fsum(self.mu.weights[self.members(center, side)].tolist())
