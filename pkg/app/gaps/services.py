import logging

import numpy as np
from dishka import FromDishka

from core.parallel import ordered_map
from core.settings import Settings
from core.types import FloatArray, Point
from energy.models import CoronaDecomposition
from energy.services import EnergyService
from gaps.models import (
    BadCube,
    EmptyConeReport,
    Gap,
    GapSet,
    GapVerdict,
    LeftistTrace,
    SearchStatus,
    VerdictStatus,
)
from geometry.models import TOL, AngleBand, AngleInterval
from lattice.models import CubeLattice, DyadicCube
from measures.cones import RectIndex
from measures.models import DiscreteMeasure

logger = logging.getLogger(__name__)

# Strips thinner than this many sample spacings cannot resolve leftmost points.
MIN_STRIP_SPACINGS = 4


def strip_order(N: int) -> list[int]:
    """Scan order 0, 1, -1, 2, -2, ..., N - 1, -(N - 1)."""
    return [0] + [sign * k for k in range(1, N) for sign in (1, -1)]


def reflection(x: Point, y: Point) -> tuple[float, float]:
    """Signs (sx, sy) moving y to the right of x and below it."""
    sx = 1.0 if y[0] >= x[0] else -1.0
    sy = 1.0 if x[1] > y[1] else -1.0
    return sx, sy


def complement(lo: FloatArray, hi: FloatArray, span: tuple[float, float]) -> list[Gap]:
    """Open components of span \\ union of the closed intervals [lo_i, hi_i]."""
    order = np.argsort(lo, kind="stable")
    lo, hi = lo[order], hi[order]
    gaps, cursor = [], span[0]
    for start, end in zip(lo.tolist(), np.maximum.accumulate(hi).tolist()):
        if start > cursor:
            gaps.append(Gap(cursor, min(start, span[1])))
        cursor = max(cursor, end)
        if cursor >= span[1]:
            break
    if cursor < span[1]:
        gaps.append(Gap(cursor, span[1]))
    return [gap for gap in gaps if gap.length > 0]


class GapService:
    """
    PURPOSE: Gaps in projections of root rectangles and the key geometric lemma
    DESCRIPTION: Finds the gaps K(R) of pi_0(A R_R n E), checks the empty-cone condition of every
    tree, detects Bad cubes and, for each of them, runs the leftist-rectangle search and
    verifies the extracted gap. "E n rect" always means sample points in the closed rectangle.
    """
    def __init__(self, settings: Settings, energies: FromDishka[EnergyService]):
        self.settings = settings
        self.energies = energies

    def _A(self, A: float | None) -> float:
        return self.settings.a_effective if A is None else A

    def find_gaps(self, R: DyadicCube, lattice: CubeLattice, mu: DiscreteMeasure, A: float | None = None) -> GapSet:
        """
        PURPOSE: Connected components of U(R) \\ pi_0(A R_R n E)
        DESCRIPTION: Each projected sample point is thickened to [p - h, p + h] so the gaps of the
        sample approximate those of the continuum set from inside.
        ARGUMENTS:
            R: DyadicCube - Root cube
            lattice: CubeLattice - Lattice of R
            mu: DiscreteMeasure - Sampled measure
            A: float | None - Dilation constant; settings.a_effective when omitted
        RETURNS: GapSet - Sorted disjoint open gaps
        """
        A = self._A(A)
        members = RectIndex(mu, lattice.aspect).members(R.center, A * R.side)
        span = (R.center[0] - A * R.side / 2, R.center[0] + A * R.side / 2)
        projected = mu.points[members, 0]
        gaps = complement(projected - mu.spacing, projected + mu.spacing, span)
        logger.debug("root %d: %d gaps, total length %.6g", R.id, len(gaps), sum(g.length for g in gaps))
        return GapSet(root=R.id, span=span, gaps=tuple(gaps))

    def check_empty_cones(self, corona: CoronaDecomposition, lattice: CubeLattice, mu: DiscreteMeasure,
                          J: AngleInterval, A: float | None = None) -> EmptyConeReport:
        """
        PURPOSE: Test X(x, 0.5J, L(Q)/A, A^2 L(R)) n E = {} for x in A R_Q, Q in Tree(R) \\ BCE(R)
        DESCRIPTION: For a fixed apex the condition is hardest for the cube with the smallest
        L(Q), so every apex is tested once against its smallest inner radius. The first witness
        of each failing tree is reported.
        RETURNS: EmptyConeReport - Per-root verdicts; failing trees are excluded downstream
        """
        A = self._A(A)
        profile = self.energies.profile(mu, J.dilate(0.5))
        index = RectIndex(mu, lattice.aspect)
        bce = corona.is_bce()
        passed, witnesses = {}, []
        for tree in corona.trees:
            outer = A * A * lattice.cubes[tree.root].tall
            inner = np.full(len(mu), np.inf)
            for cube_id in tree.tree:
                if bce[cube_id]:
                    continue
                cube = lattice.cubes[cube_id]
                members = index.members(cube.center, A * cube.side)
                inner[members] = np.minimum(inner[members], cube.tall / A)
            passed[tree.root] = True
            for i in np.flatnonzero(np.isfinite(inner)).tolist():
                hit = profile.max_within(i, outer)
                if hit is not None and hit[0] > inner[i] + TOL:
                    passed[tree.root] = False
                    witnesses.append({"root": tree.root, "x": i, "y": hit[1], "distance": hit[0],
                                      "r_in": float(inner[i]), "r_out": outer})
                    logger.info("empty cones fail in tree %d: x=%d y=%d |x-y|=%.6g", tree.root, i, hit[1], hit[0])
                    break
        return EmptyConeReport(passed=passed, witnesses=tuple(witnesses))

    def find_bad_cubes(self, corona: CoronaDecomposition, lattice: CubeLattice, mu: DiscreteMeasure,
                       J: AngleInterval, roots: set[int] | None = None, tree_only: bool = False) -> list[BadCube]:
        """
        PURPOSE: Bad(R) for every root R, with one witness pair per cube
        DESCRIPTION: Q is bad when some x in Q sees a sample point y in X(x, 3J \\ 0.5J, rho L(Q),
        L(Q)); the witness is the first such x by sample index and its farthest y. Badness does
        not depend on R, so it is decided once per cube.
        ARGUMENTS:
            roots: set[int] | None - Restrict to these roots
            tree_only: bool - Search T(R) = Tree(R) \\ BCE(R) instead of every cube below R
        """
        profile = self.energies.profile(mu, AngleBand(outer=J.dilate(3), inner=J.dilate(0.5)))
        witness: dict[int, tuple[int, int] | None] = {}

        def witness_of(cube: DyadicCube) -> tuple[int, int] | None:
            if cube.id not in witness:
                witness[cube.id] = None
                for i in cube.members.tolist():
                    hit = profile.max_within(i, cube.tall)
                    if hit is not None and hit[0] > lattice.rho * cube.tall + TOL:
                        witness[cube.id] = (i, hit[1])
                        break
            return witness[cube.id]

        bad = []
        for tree in corona.trees:
            if roots is not None and tree.root not in roots:
                continue
            if tree_only:
                stopped = set(tree.bce)
                cubes = [lattice.cubes[cube_id] for cube_id in tree.tree if cube_id not in stopped]
            else:
                cubes = lattice.descendants(tree.root)
            for cube in cubes:
                pair = witness_of(cube)
                if pair is not None:
                    bad.append(BadCube(root=tree.root, cube=cube.id, x=pair[0], y=pair[1]))
        logger.info("%d bad cubes over %d trees", len(bad), len(corona.trees))
        return bad

    def leftist_search(self, x: Point, y: Point, mu: DiscreteMeasure, N: int | None = None) -> LeftistTrace:
        """
        PURPOSE: Find a leftist strip of the gray rectangle spanned by a Bad pair
        DESCRIPTION: Works in the frame reflected so that y lies to the right of x and below it.
        G_i is leftist when its leftmost point z_i exists and neither neighbour holds a sample
        point strictly to the left of z_i; an empty neighbour never beats z_i. Strips are scanned
        outward from G_0 over |i| <= N - 1.
        ARGUMENTS:
            x: Point - Witness x
            y: Point - Witness y, in a non-vertical cone of x
            mu: DiscreteMeasure - Sampled measure
            N: int | None - Strip half-count; settings.n_strips when omitted
        RETURNS: LeftistTrace - status unresolved when a strip is thinner than 4 h, not_found
            when no strip qualifies
        """
        N = self.settings.n_strips if N is None else N
        sx, sy = reflection(x, y)
        xr, yr = (sx * x[0], sy * x[1]), (sx * y[0], sy * y[1])
        points = np.column_stack([sx * mu.points[:, 0], sy * mu.points[:, 1]])
        height = (xr[1] - yr[1]) / (2 * N + 1)
        offsets = np.arange(-N, N + 1)
        bounds = np.column_stack([yr[1] + (2 * offsets - 1) * height / 2, yr[1] + (2 * offsets + 1) * height / 2])
        across = (points[:, 0] >= xr[0] - TOL) & (points[:, 0] <= yr[0] + TOL)
        leftmost: list[Point | None] = []
        for lo, hi in bounds.tolist():
            inside = np.flatnonzero(across & (points[:, 1] >= lo - TOL) & (points[:, 1] <= hi + TOL))
            if len(inside) == 0:
                leftmost.append(None)
                continue
            best = inside[np.lexsort((points[inside, 1], points[inside, 0]))[0]]
            leftmost.append((float(points[best, 0]), float(points[best, 1])))
        trace = dict(x=xr, y=yr, sx=sx, sy=sy, N=N, strip_bounds=bounds, leftmost=tuple(leftmost))
        if height < MIN_STRIP_SPACINGS * mu.spacing:
            return LeftistTrace(**trace, index=None, status=SearchStatus.UNRESOLVED)

        def is_leftist(i: int) -> bool:
            z = leftmost[i + N]
            if z is None:
                return False
            return all(leftmost[j + N] is None or leftmost[j + N][0] >= z[0] for j in (i - 1, i + 1))

        for i in strip_order(N):
            if is_leftist(i):
                return LeftistTrace(**trace, index=i, status=SearchStatus.FOUND)
        logger.debug("no leftist strip among %d", 2 * N + 1)
        return LeftistTrace(**trace, index=None, status=SearchStatus.NOT_FOUND)

    def evaluate_verdict(self, trace: LeftistTrace, gaps: GapSet, mu: DiscreteMeasure, Q: DyadicCube,
                         R: DyadicCube, bad: BadCube, A: float | None = None) -> GapVerdict:
        """
        PURPOSE: Check the gap extracted from a leftist strip
        DESCRIPTION: With z = z_i, B spans pi_0 in [pi_0(x), pi_0(z)] and its width is measured
        against l(Q). A = [pi_0(z) - l(Q)/A, pi_0(z)] x [pi_0perp(z) +- 2A L(R)] must have no
        sample point in its interior. The gap K of U(R) containing pi_0(int A), shrunk by h on
        both sides, must satisfy |K| + 2h >= l(Q)/A and pi_0(R_Q) c A^3 K. The sample passed here
        may differ from the one the trace was built on.
        ARGUMENTS:
            trace: LeftistTrace - Result of leftist_search
            gaps: GapSet - find_gaps(R)
            mu: DiscreteMeasure - Sample the set relations are tested on
            Q: DyadicCube - The Bad cube
            R: DyadicCube - Its root
            bad: BadCube - Witness record
            A: float | None - Dilation constant
        RETURNS: GapVerdict - pass, fail or skipped with every check and measured constant
        """
        A = self._A(A)
        h, ell = mu.spacing, Q.side
        verdict = dict(root=R.id, cube=Q.id, witness=(bad.x, bad.y))
        if ell / (self.settings.RESOLUTION_FACTOR * A) < h:
            return GapVerdict(**verdict, status=VerdictStatus.SKIPPED, reason="resolution")
        if trace.status is SearchStatus.UNRESOLVED:
            return GapVerdict(**verdict, status=VerdictStatus.SKIPPED, reason="strip_height")
        if trace.status is SearchStatus.NOT_FOUND:
            return GapVerdict(**verdict, status=VerdictStatus.FAIL, checks={"leftist_found": False},
                              reason="no leftist strip")
        z, i, N = trace.z, trace.index, trace.N
        points = trace.reflect(mu.points)
        checks: dict[str, bool] = {"leftist_found": True}
        measured = {"B_width_ratio": (z[0] - trace.x[0]) / ell}

        rows = trace.strip_bounds[max(i - 1 + N, 0):i + 2 + N]
        near = (points[:, 1] >= rows[0, 0] - TOL) & (points[:, 1] <= rows[-1, 1] + TOL)
        near &= (points[:, 0] >= trace.x[0] - TOL) & (points[:, 0] <= trace.y[0] + TOL)
        checks["leftist_rescan"] = not bool(np.any(near & (points[:, 0] < z[0])))

        interior = (points[:, 0] > z[0] - ell / A) & (points[:, 0] < z[0])
        interior &= np.abs(points[:, 1] - z[1]) < 2 * A * R.tall
        checks["A_interior_empty"] = not bool(interior.any())
        measured["A_interior_points"] = float(np.count_nonzero(interior))

        target = trace.unreflect_interval(z[0] - ell / A + h, z[0] - h)
        K = gaps.containing(*target)
        checks["gap_found"] = K is not None
        if K is not None:
            lo, hi = K.dilate(A ** 3)
            checks["gap_length"] = K.length + 2 * h >= ell / A
            checks["rect_in_dilated_gap"] = lo - TOL <= Q.center[0] - ell / 2 and Q.center[0] + ell / 2 <= hi + TOL
            measured["gap_ratio"] = K.length / ell
        status = VerdictStatus.PASS if all(checks.values()) else VerdictStatus.FAIL
        return GapVerdict(**verdict, status=status, leftist_index=i, gap=(K.lo, K.hi) if K else None,
                          checks=checks, measured=measured)

    def verify_gap_lemma(self, R: DyadicCube, Q: DyadicCube, bad: BadCube | None, gaps: GapSet,
                         mu: DiscreteMeasure, A: float | None = None,
                         N: int | None = None) -> tuple[LeftistTrace | None, GapVerdict]:
        if bad is None:
            return None, GapVerdict(root=R.id, cube=Q.id, witness=(-1, -1), status=VerdictStatus.NOT_APPLICABLE)
        trace = self.leftist_search(tuple(mu.points[bad.x]), tuple(mu.points[bad.y]), mu, N)
        return trace, self.evaluate_verdict(trace, gaps, mu, Q, R, bad, A)

    def run_gap_lemma(self, corona: CoronaDecomposition, lattice: CubeLattice, mu: DiscreteMeasure,
                      J: AngleInterval, eligible: set[int], A: float | None = None,
                      N: int | None = None) -> list[tuple[BadCube, LeftistTrace | None, GapVerdict]]:
        """
        PURPOSE: Verify the gap lemma for every Bad cube of T(R), R an eligible root
        DESCRIPTION: Only T(R) carries the empty-cone hypothesis checked by check_empty_cones, so
        BCE cubes and everything below them are left out. Pairs are processed in parallel; the
        result order follows the Bad cube list.
        """
        bad_cubes = self.find_bad_cubes(corona, lattice, mu, J, eligible, tree_only=True)
        gap_sets = {root: self.find_gaps(lattice.cubes[root], lattice, mu, A) for root in sorted(eligible)}

        def verify(bad: BadCube) -> tuple[BadCube, LeftistTrace | None, GapVerdict]:
            trace, verdict = self.verify_gap_lemma(lattice.cubes[bad.root], lattice.cubes[bad.cube], bad,
                                                   gap_sets[bad.root], mu, A, N)
            return bad, trace, verdict

        results = ordered_map(verify, bad_cubes, self.settings.THREADS)
        counts: dict[str, int] = {}
        for _, _, verdict in results:
            counts[verdict.status.value] = counts.get(verdict.status.value, 0) + 1
        logger.info("gap lemma verdicts: %s", counts)
        return results
