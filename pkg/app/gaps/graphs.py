import logging

import numpy as np
from dishka import FromDishka

from core.errors import CheckFailure, PreconditionViolation
from core.settings import Settings
from directions.models import DirectionSet
from energy.models import RatioReport, ratio
from gaps.errors import NotAGraph
from gaps.models import GraphExtraction
from geometry.models import TOL, AngleInterval, angle_distance
from geometry.operations import project_points
from measures.models import PlanarSet, Segment
from measures.services import MeasureService

logger = logging.getLogger(__name__)

# Bound on s * sup of the perpendicular pushforward density.
DENSITY_CONSTANT = 4.0


def segment_direction(planar_set: PlanarSet) -> float:
    """Common direction theta_0 in [0, 1/2) of a union of parallel segments."""
    if not all(isinstance(primitive, Segment) for primitive in planar_set.primitives):
        raise PlanarSet.InvalidError("graph extraction needs a union of segments")
    a, b, _ = planar_set.segment_array
    angles = np.mod(np.arctan2(b[:, 1] - a[:, 1], b[:, 0] - a[:, 0]) / (2 * np.pi), 0.5)
    theta0 = float(angles[0])
    if any(min(angle_distance(float(angle), theta0), angle_distance(float(angle) + 0.5, theta0)) > 1e-9
           for angle in angles):
        raise PlanarSet.InvalidError("segments are not parallel")
    return theta0


class GraphService:
    """
    PURPOSE: Graph structure of unions of parallel segments over a good direction
    DESCRIPTION: For a set whose good directions G_T(E) cover at least s, any direction of G_T
    away from the segments makes the set a graph over the perpendicular line, with Lipschitz
    constant and projection density controlled by 1/s.
    """
    def __init__(self, settings: Settings, measures: FromDishka[MeasureService]):
        self.settings = settings
        self.measures = measures

    def admissible_directions(self, theta0: float, G_T: DirectionSet, s: float) -> DirectionSet:
        """G_T with the windows theta_0 +- 0.1 s and theta_0 + 1/2 +- 0.1 s removed."""
        window = DirectionSet.from_angle_interval(AngleInterval(center=theta0, halfwidth=0.1 * s), G_T.depth)
        antipode = DirectionSet.from_angle_interval(AngleInterval(center=theta0 + 0.5, halfwidth=0.1 * s), G_T.depth)
        return G_T.difference(window.union(antipode))

    @staticmethod
    def graph_violation(planar_set: PlanarSet, theta: float) -> NotAGraph | None:
        """
        PURPOSE: First pair of segments whose pi_theta_perp images overlap
        DESCRIPTION: Images touching at an endpoint are allowed. A segment collapsing to a point
        under the projection is reported with its two endpoints.
        """
        a, b, _ = planar_set.segment_array
        normal = theta + 0.25
        ua, ub = project_points(a, normal), project_points(b, normal)
        lo, hi = np.minimum(ua, ub), np.maximum(ua, ub)
        for i in range(len(a)):
            if hi[i] - lo[i] <= TOL and np.hypot(*(b[i] - a[i])) > TOL:
                return NotAGraph(tuple(a[i]), tuple(b[i]))
            for j in range(i + 1, len(a)):
                start, end = max(lo[i], lo[j]), min(hi[i], hi[j])
                if end - start > TOL:
                    middle = (start + end) / 2
                    points = []
                    for k in (i, j):
                        t = 0.0 if ub[k] == ua[k] else (middle - ua[k]) / (ub[k] - ua[k])
                        points.append(tuple(float(c) for c in a[k] + t * (b[k] - a[k])))
                    return NotAGraph(points[0], points[1])
        return None

    def extract_graph_parallel_segments(self, planar_set: PlanarSet, G_T: DirectionSet, s: float,
                                        theta: float | None = None) -> GraphExtraction:
        """
        PURPOSE: Exhibit a union of parallel segments as a Lipschitz graph
        DESCRIPTION: Picks theta = theta_0 + 1/4 when it is admissible, otherwise the midpoint of
        the longest admissible run. The sample is ordered along l_theta_perp and lip is the largest
        slope between neighbours, which equals the largest slope over all pairs.
        ARGUMENTS:
            planar_set: PlanarSet - Union of parallel segments
            G_T: DirectionSet - Good directions of the set
            s: float - Lower bound on H(G_T)
            theta: float | None - Explicit direction; must be admissible
        RETURNS: GraphExtraction - theta, lip and the density constant s * sup pi_theta_perp mu
        CONTRACTS:
            RAISES:
                - PreconditionViolation - when H(G_T) < s or no admissible direction remains
                - NotAGraph - with a pair of points sharing their perpendicular projection
                - CheckFailure - when lip > C_lip / s or the density constant exceeds 4
        """
        if G_T.is_empty() or float(G_T.measure) + TOL < s:
            raise PreconditionViolation("segments_window", f"H(G_T) = {float(G_T.measure)} < s = {s}")
        theta0 = segment_direction(planar_set)
        G = self.admissible_directions(theta0, G_T, s)
        if G.is_empty():
            raise PreconditionViolation("segments_window", "no good direction away from the segments")
        if theta is None:
            theta = theta0 + 0.25
            if not G.contains_angle(theta):
                theta = max(G.run_intervals(), key=lambda run: run.halfwidth).center
        elif not G.contains_angle(theta):
            raise PreconditionViolation("segments_window", f"theta = {theta} is not an admissible direction")

        violation = self.graph_violation(planar_set, theta)
        if violation is not None:
            raise violation
        mu = self.measures.sample(planar_set)
        u = project_points(mu.points, theta + 0.25)
        v = project_points(mu.points, theta)
        order = np.argsort(u, kind="stable")
        du, dv = np.diff(u[order]), np.abs(np.diff(v[order]))
        steps = du > TOL
        lip = float((dv[steps] / du[steps]).max()) if steps.any() else 0.0
        lip_bound = self.settings.C_LIP / s
        density = self.measures.pushforward_density(mu, theta + 0.25).sup_norm * s
        logger.info("graph over theta=%.6g: lip=%.6g (bound %.6g), density constant %.6g", theta, lip, lip_bound, density)
        if lip > lip_bound:
            raise CheckFailure("segments_lipschitz", f"lip = {lip} > C_lip / s = {lip_bound}", {"theta": theta})
        if density > DENSITY_CONSTANT:
            raise CheckFailure("segments_density", f"s * sup density = {density} > {DENSITY_CONSTANT}",
                               {"theta": theta})
        return GraphExtraction(theta=theta, segment_direction=theta0, lip=lip, lip_bound=lip_bound,
                               density_constant=density)

    @staticmethod
    def check_lipschitz_graph(planar_set: PlanarSet, lip: float) -> RatioReport:
        """Largest slope over all pairs of graph nodes against the requested bound."""
        nodes = np.unique(planar_set.vertices(), axis=0)
        dx = np.subtract.outer(nodes[:, 0], nodes[:, 0])
        dy = np.subtract.outer(nodes[:, 1], nodes[:, 1])
        upper = np.triu(np.abs(dx) > TOL, k=1)
        slope = float((np.abs(dy[upper]) / np.abs(dx[upper])).max()) if upper.any() else 0.0
        return RatioReport(name="lipschitz_graph", lhs=slope, rhs=lip, ratio=ratio(slope, lip))
