import logging
import math

import numpy as np
from dishka import FromDishka
from scipy.spatial import cKDTree

from core.errors import CheckFailure
from core.settings import Settings
from geometry.models import AngleInterval
from geometry.operations import scaled
from lattice.errors import AspectError, EmptySample
from lattice.models import CubeLattice, DyadicCube, LatticeInvariants, k_top
from measures.cones import RectIndex
from measures.errors import HypothesisUnverified
from measures.models import CubeMassReport, DiscreteMeasure, PlanarSet
from measures.services import MeasureService

logger = logging.getLogger(__name__)

# Below this rho the strict sandwich constants (0.4, 2) are asserted.
RHO_STRICT = 1e-3


def _nearest(tree: cKDTree, points: np.ndarray) -> np.ndarray:
    """Nearest tree point in the Chebyshev metric; equidistant candidates go to the smaller index."""
    k = min(2, tree.n)
    distance, index = tree.query(points, k=k, p=np.inf)
    if k == 1:
        return np.asarray(index).reshape(-1)
    tie = distance[:, 1] <= distance[:, 0]
    return np.where(tie, np.minimum(index[:, 0], index[:, 1]), index[:, 0])


class LatticeService:
    """
    PURPOSE: Builds and checks the anisotropic cube lattice of a sampled set
    DESCRIPTION: Levels are maximal rho^k-separated nets in the metric max(|dx|, H(J) |dy|),
    each seeded with the coarser centres, so the nets are nested. Points go to the nearest
    centre of the deepest level and every centre to the nearest centre one level up; cubes
    are unions along this tree, which makes every level a partition and the levels nested.
    ATTRIBUTES:
        settings: Settings - Lattice ratio rho
        measures: MeasureService - Density witnesses for the rectangle mass bounds
    """
    def __init__(self, settings: Settings, measures: FromDishka[MeasureService]):
        self.settings = settings
        self.measures = measures

    def build_lattice(self, mu: DiscreteMeasure, aspect: float, depth: int, rho: float | None = None,
                      top_level: int | None = None) -> CubeLattice:
        """
        PURPOSE: Hierarchical-net construction of D_k for k = k(J) .. k(J) + depth - 1
        ARGUMENTS:
            mu: DiscreteMeasure - Sample to partition
            aspect: float - H(J) in (0, 1]
            depth: int - Number of levels
            rho: float | None - Lattice ratio; settings.RHO when omitted
            top_level: int | None - Explicit top level instead of k(J)
        RETURNS: CubeLattice - Levels with ids assigned level-major in net order
        CONTRACTS:
            RAISES:
                - AspectError - when aspect is outside (0, 1]
                - EmptySample - when mu has no points
        """
        rho = self.settings.RHO if rho is None else rho
        if not 0 < aspect <= 1:
            raise AspectError(aspect)
        if len(mu) == 0:
            raise EmptySample()
        if depth < 1:
            raise CubeLattice.InvalidError("a lattice needs at least one level")
        top = k_top(aspect, rho) if top_level is None else top_level
        coords = scaled(mu.points, aspect)
        order = np.lexsort((mu.points[:, 1], mu.points[:, 0]))
        tree = cKDTree(coords)

        nets: list[list[int]] = []
        centers: list[int] = []
        for j in range(depth):
            separation = rho ** (top + j)
            covered = np.zeros(len(mu), dtype=bool)
            radius = np.nextafter(separation, 0)
            for center in centers:
                covered[tree.query_ball_point(coords[center], r=radius, p=np.inf)] = True
            for candidate in order:
                if not covered[candidate]:
                    centers.append(int(candidate))
                    covered[tree.query_ball_point(coords[candidate], r=radius, p=np.inf)] = True
            nets.append(list(centers))

        # parents[j][c] = position in nets[j - 1] of the parent of the c-th centre of nets[j]
        parents = [np.full(len(nets[0]), -1)]
        for j in range(1, depth):
            parents.append(_nearest(cKDTree(coords[nets[j - 1]]), coords[nets[j]]))

        assignment = np.zeros((depth, len(mu)), dtype=np.intp)
        assignment[-1] = _nearest(cKDTree(coords[nets[-1]]), coords)
        for j in range(depth - 1, 0, -1):
            assignment[j - 1] = parents[j][assignment[j]]

        offsets = np.concatenate([[0], np.cumsum([len(net) for net in nets])])
        cubes: list[DyadicCube] = []
        levels = []
        for j, net in enumerate(nets):
            k = top + j
            side = 4 * rho ** k
            members_by_center = _group(assignment[j], len(net))
            children_by_center = _group(parents[j + 1], len(net)) if j + 1 < depth else [np.empty(0, np.intp)] * len(net)
            for position, center in enumerate(net):
                members = members_by_center[position]
                cubes.append(DyadicCube(
                    level=k,
                    id=int(offsets[j] + position),
                    center=(float(mu.points[center, 0]), float(mu.points[center, 1])),
                    center_index=center,
                    members=members,
                    parent=None if j == 0 else int(offsets[j - 1] + parents[j][position]),
                    children=tuple(int(offsets[j + 1] + c) for c in children_by_center[position]),
                    side=side,
                    tall=side / aspect,
                    mass=mu.mass(members),
                ))
            levels.append(tuple(range(int(offsets[j]), int(offsets[j + 1]))))
            assignment[j] += offsets[j]

        lattice = CubeLattice(aspect, rho, top, tuple(cubes), tuple(levels), assignment)
        logger.info("built lattice: levels %d..%d, %d cubes over %d points", top, lattice.bottom_level,
                    len(cubes), len(mu))
        return lattice

    def check_lattice_invariants(self, lattice: CubeLattice, mu: DiscreteMeasure) -> LatticeInvariants:
        """
        PURPOSE: Verify partition and nesting, and measure the sandwich constants
        DESCRIPTION: c_in is the largest c (capped at 1) with every sample point within c rho^k of
        x_Q in Q; C_out the smallest C with Q inside the ball of radius C rho^k. Both are minimised
        and maximised over all cubes. For rho <= 1/1000 the constants 0.4 and 2 are asserted.
        RETURNS: LatticeInvariants - Flags and achieved constants
        CONTRACTS:
            RAISES:
                - CheckFailure - when a level is not a partition, nesting fails, a member leaves
                  its ball, or the strict constants fail
        """
        coords = scaled(mu.points, lattice.aspect)
        for k in range(lattice.top_level, lattice.bottom_level + 1):
            counts = np.zeros(len(mu), dtype=np.intp)
            for cube in lattice.level(k):
                counts[cube.members] += 1
            if not (counts == 1).all():
                raise CheckFailure("partition", f"level {k} does not partition the sample", {"level": k})
        for cube in lattice.cubes:
            if len(cube.members) == 0:
                raise CheckFailure("partition", f"cube {cube.id} is empty", {"cube": cube.id})
            if cube.children:
                union = np.sort(np.concatenate([lattice.cubes[c].members for c in cube.children]))
                if not np.array_equal(union, cube.members):
                    raise CheckFailure("nesting", f"children of cube {cube.id} do not tile it", {"cube": cube.id})

        c_in, c_out = 1.0, 0.0
        point_tree = cKDTree(coords)
        for k in range(lattice.top_level, lattice.bottom_level + 1):
            scale = lattice.rho ** k
            cubes = lattice.level(k)
            centers = coords[[cube.center_index for cube in cubes]]
            for position, cube in enumerate(cubes):
                spread = np.abs(coords[cube.members] - centers[position]).max() if len(cube.members) else 0.0
                c_out = max(c_out, float(spread) / scale)
            pairs = cKDTree(centers).sparse_distance_matrix(point_tree, max_distance=scale, p=np.inf,
                                                            output_type="ndarray")
            if len(pairs):
                own = lattice.assignment[k - lattice.top_level, pairs["j"]] - lattice.levels[k - lattice.top_level][0]
                foreign = pairs["v"][own != pairs["i"]]
                if len(foreign):
                    c_in = min(c_in, float(foreign.min()) / scale)

        invariants = LatticeInvariants(partition=True, nesting=True, c_in=c_in, C_out=c_out,
                                       levels=lattice.depth, cubes=len(lattice.cubes))
        if lattice.rho <= RHO_STRICT and (c_in < 0.4 or c_out > 2):
            raise CheckFailure("sandwich", f"achieved (c_in, C_out) = ({c_in}, {c_out}) outside (0.4, 2)",
                               {"c_in": c_in, "C_out": c_out})
        if c_out >= 1 / (1 - lattice.rho) + 1e-9:
            raise CheckFailure("sandwich", f"C_out = {c_out} exceeds 1 / (1 - rho)", {"C_out": c_out})
        logger.info("lattice invariants hold: c_in=%.4g C_out=%.4g", c_in, c_out)
        return invariants

    def cube_mass_bounds(self, lattice: CubeLattice, mu: DiscreteMeasure, planar_set: PlanarSet,
                         M: float | None = None, C0: float | None = None) -> CubeMassReport:
        """
        PURPOSE: Measure the constants of mu(R_Q) <= C M l(Q) and mu(Q) >= c l(Q) / C0
        DESCRIPTION: The upper bound needs a direction within 2 H(J) of 1/4 whose perpendicular
        pushforward has a verified density bound M. Lower ratios mu(Q) C0 / l(Q) are reported
        for cubes whose rectangle holds no boundary point of the set.
        RETURNS: CubeMassReport - Per-cube ratios in cube id order and their extremes
        CONTRACTS:
            RAISES:
                - HypothesisUnverified - when no direction of the window passes the density check
        """
        M = self.settings.M if M is None else M
        C0 = self.settings.C0 if C0 is None else C0
        window = AngleInterval(center=0.25, halfwidth=min(2 * lattice.aspect, 0.25))
        witness = self.measures.density_witness(mu, window, M)
        if witness is None:
            raise HypothesisUnverified("projection_density", f"no direction within {window.halfwidth} of 1/4 "
                                                             f"has a non-degenerate density bounded by {M}")
        theta, profile = witness
        index = RectIndex(mu, lattice.aspect)
        boundary = planar_set.boundary_points()
        boundary_index = cKDTree(scaled(boundary, lattice.aspect)) if len(boundary) else None

        upper, lower, interior = [], [], []
        for cube in lattice.cubes:
            upper.append(index.mass(cube.center, cube.side) / (M * cube.side))
            scaled_center = (cube.center[0], lattice.aspect * cube.center[1])
            inside = boundary_index is None or not boundary_index.query_ball_point(scaled_center, r=cube.side / 2,
                                                                                   p=np.inf)
            interior.append(bool(inside))
            lower.append(cube.mass * C0 / cube.side)
        interior_lower = [ratio for ratio, flag in zip(lower, interior) if flag]
        report = CubeMassReport(
            theta=theta,
            density_sup=profile.sup_norm,
            upper_ratios=tuple(upper),
            lower_ratios=tuple(lower),
            interior=tuple(interior),
            max_upper_constant=max(upper),
            min_lower_constant=min(interior_lower) if interior_lower else math.inf,
        )
        logger.info("cube mass bounds at theta=%.6g: max upper %.4g, min interior lower %.4g", theta,
                    report.max_upper_constant, report.min_lower_constant)
        return report


def _group(labels: np.ndarray, size: int) -> list[np.ndarray]:
    """Indices of labels grouped by label value 0 .. size - 1, each group sorted."""
    order = np.argsort(labels, kind="stable")
    bounds = np.searchsorted(labels[order], np.arange(size + 1))
    return [order[bounds[i]:bounds[i + 1]].astype(np.intp) for i in range(size)]
