import logging
import math

import numpy as np
from dishka import FromDishka

from core.errors import CheckFailure, PreconditionViolation
from core.settings import Settings
from directions.models import DirectionSet
from energy.errors import WitnessMissing
from energy.models import (
    CoronaDecomposition,
    EnergyReport,
    IntervalCountReport,
    OverlapReport,
    RatioReport,
    TrialReport,
    ratio,
)
from energy.services import EnergyService
from geometry.models import AngleInterval
from lattice.models import CubeLattice
from measures.models import DiscreteMeasure
from measures.quadrature import LogQuadrature
from measures.services import MeasureService

logger = logging.getLogger(__name__)

# Relative slack of E_J = E_J_int + E_J_ext.
ADDITIVITY_RTOL = 1e-12


def max_overlap(lo: np.ndarray, hi: np.ndarray) -> tuple[int, float]:
    """
    PURPOSE: Deepest point of a family of closed intervals
    DESCRIPTION: Sweep over endpoints; at equal coordinates openings are processed before
    closings, so touching intervals count as overlapping.
    RETURNS: tuple[int, float] - Largest count and a coordinate where it is attained
    """
    if len(lo) == 0:
        return 0, math.nan
    coords = np.concatenate([lo, hi])
    deltas = np.concatenate([np.ones(len(lo), dtype=np.intp), -np.ones(len(hi), dtype=np.intp)])
    order = np.lexsort((-deltas, coords))
    running = np.cumsum(deltas[order])
    best = int(np.argmax(running))
    return int(running[best]), float(coords[order][best])


class EnergyChecks:
    """
    PURPOSE: Numerical checkers of the energy and corona inequalities
    DESCRIPTION: Inequalities with an explicit constant or a construction tautology behind them
    raise CheckFailure; the others return measured ratios. Random trials are drawn from
    settings.SEED so reports are reproducible.
    """
    def __init__(self, settings: Settings, energies: FromDishka[EnergyService], measures: FromDishka[MeasureService]):
        self.settings = settings
        self.energies = energies
        self.measures = measures

    def trivial_bound_check(self, report: EnergyReport, aspect: float, M: float | None = None,
                            C0: float | None = None) -> float:
        """
        PURPOSE: Assert E_G(Q) <= 10 A^4 M C0 H(J) for every cube
        RETURNS: float - Largest E_G(Q) / bound
        CONTRACTS:
            RAISES:
                - CheckFailure - naming the first cube above the bound
        """
        M = self.settings.M if M is None else M
        C0 = self.settings.C0 if C0 is None else C0
        bound = self.settings.TRIVIAL_BOUND_CONSTANT * report.A ** 4 * M * C0 * aspect
        above = np.flatnonzero(report.E_G > bound)
        if len(above):
            cube = int(above[0])
            raise CheckFailure("trivial_bound", f"E_G({cube}) = {report.E_G[cube]} > {bound}",
                               {"cube": cube, "bound": bound})
        return float(report.E_G.max() / bound) if len(report) else 0.0

    def additivity_check(self, report: EnergyReport) -> float:
        """Assert E_J = E_J_int + E_J_ext per cube; returns the largest relative deviation."""
        total = report.E_J_int + report.E_J_ext
        scale = np.maximum(np.abs(report.E_J), np.finfo(float).tiny)
        deviation = np.where(report.E_J == total, 0.0, np.abs(report.E_J - total) / scale)
        worst = int(np.argmax(deviation)) if len(deviation) else 0
        if len(deviation) and deviation[worst] > ADDITIVITY_RTOL:
            raise CheckFailure("additivity", f"E_J({worst}) != E_J_int + E_J_ext",
                               {"cube": worst, "deviation": float(deviation[worst])})
        return float(deviation.max()) if len(deviation) else 0.0

    def est3_ratio(self, report: EnergyReport, mu: DiscreteMeasure, J: AngleInterval,
                   quad: LogQuadrature | None = None) -> RatioReport:
        """sum_Q E_J(Q) mu(Q) against the global 3J energy over r in [h, 1]."""
        lhs = math.fsum((report.E_J * report.masses).tolist())
        rhs = self.energies.global_energy(mu, J.dilate(3), mu.spacing, 1.0, quad)
        return RatioReport(name="est3", lhs=lhs, rhs=rhs, ratio=ratio(lhs, rhs))

    @staticmethod
    def est4_ratio(report: EnergyReport) -> RatioReport:
        lhs = math.fsum((report.E_J_ext * report.masses).tolist())
        rhs = math.fsum((report.E_J_ext_tilde * report.masses).tolist())
        return RatioReport(name="est4", lhs=lhs, rhs=rhs, ratio=ratio(lhs, rhs))

    def energy_to_cubes_ratio(self, report: EnergyReport, mu: DiscreteMeasure, G: DirectionSet, aspect: float,
                              quad: LogQuadrature | None = None) -> RatioReport:
        """(H(J) mu(E) + sum E_G(Q) mu(Q)) against (H(J) mu(E) + global G-energy over [h, 1])."""
        base = aspect * mu.total
        lhs = base + math.fsum((report.E_G * report.masses).tolist())
        rhs = base + self.energies.global_energy(mu, G, mu.spacing, 1.0, quad)
        return RatioReport(name="energy_to_cubes", lhs=lhs, rhs=rhs, ratio=ratio(lhs, rhs))

    def _trials(self, mu: DiscreteMeasure, trials: int | None) -> list[tuple[int, float]]:
        rng = np.random.default_rng(self.settings.SEED)
        count = self.settings.TRIALS if trials is None else trials
        diameter = max(float(np.ptp(mu.points[:, 0])), float(np.ptp(mu.points[:, 1])), 20 * mu.spacing)
        lo, hi = math.log(10 * mu.spacing), math.log(diameter)
        points = rng.integers(0, len(mu), count)
        radii = np.exp(rng.uniform(lo, hi, count))
        return [(int(i), float(r)) for i, r in zip(points, radii)]

    def check_littlemeas(self, mu: DiscreteMeasure, J: AngleInterval, G: DirectionSet, M: float | None = None,
                         trials: int | None = None) -> TrialReport:
        """
        PURPOSE: Measure mu(X(x, J \\ G, r)) <= C M H(J \\ G) r on random (x, r)
        DESCRIPTION: Every maximal run I of J \\ G must carry a density witness in 3I first.
        RETURNS: TrialReport - Largest C seen
        CONTRACTS:
            RAISES:
                - WitnessMissing - when a gap has no verified direction
        """
        M = self.settings.M if M is None else M
        J_cells = DirectionSet.from_angle_interval(J, G.depth)
        rest = J_cells.difference(G)
        for gap in rest.run_intervals():
            if self.measures.density_witness(mu, gap.dilate(3), M) is None:
                raise WitnessMissing(gap.bounds())
        samples = self._trials(mu, trials)
        if rest.is_empty():
            return TrialReport(name="littlemeas", trials=len(samples), max_ratio=0.0)
        profile = self.energies.profile(mu, rest)
        scale = M * float(rest.measure)
        ratios = [float(profile.mass_within(i, r)) / (scale * r) for i, r in samples]
        return TrialReport(name="littlemeas", trials=len(samples), max_ratio=max(ratios))

    def check_filling_gaps(self, mu: DiscreteMeasure, J: AngleInterval, G: DirectionSet,
                           trials: int | None = None, epsilon: float | None = None) -> TrialReport:
        """
        PURPOSE: Measure mu(X(x, 0.9J, r)) / mu(X(x, G, 2r)) on random (x, r)
        DESCRIPTION: Trials with a positive numerator and an empty denominator falsify the bound
        outright and are returned as violations.
        CONTRACTS:
            RAISES:
                - PreconditionViolation - when H(J \\ G) > eps H(J)
        """
        epsilon = self.settings.epsilon if epsilon is None else epsilon
        J_cells = DirectionSet.from_angle_interval(J, G.depth)
        missing = J_cells.difference(G).measure
        if missing > epsilon * J_cells.measure:
            raise PreconditionViolation("filling_gaps_window",
                                        f"H(J \\ G) = {float(missing)} > eps H(J) = {epsilon * float(J_cells.measure)}")
        narrow = self.energies.profile(mu, J.dilate(0.9))
        wide = self.energies.profile(mu, G)
        worst, violations = 0.0, []
        samples = self._trials(mu, trials)
        for i, r in samples:
            numerator = float(narrow.mass_within(i, r))
            denominator = float(wide.mass_within(i, 2 * r))
            if denominator > 0:
                worst = max(worst, numerator / denominator)
            elif numerator > 0:
                violations.append({"point": i, "r": r, "numerator": numerator})
        return TrialReport(name="filling_gaps", trials=len(samples), max_ratio=worst, violations=tuple(violations))

    def check_projection_overlap(self, corona: CoronaDecomposition, lattice: CubeLattice,
                                 eligible: set[int] | None = None) -> OverlapReport:
        """
        PURPOSE: Bounded overlap of the projections pi_0(R_P), P in T_k(R)
        DESCRIPTION: Trees whose root is not in `eligible` (failing the empty-cone check) are
        skipped. For the others the count is asserted to stay at most C_OVERLAP.
        CONTRACTS:
            RAISES:
                - CheckFailure - with the violating (R, k, x)
        """
        per_tree: dict[int, dict[int, int] | None] = {}
        skipped, overall = [], 0
        for tree in corona.trees:
            if eligible is not None and tree.root not in eligible:
                per_tree[tree.root] = None
                skipped.append(tree.root)
                continue
            by_level: dict[int, list] = {}
            for cube_id in tree.tree:
                cube = lattice.cubes[cube_id]
                by_level.setdefault(cube.level, []).append(cube)
            counts = {}
            for level, cubes in sorted(by_level.items()):
                centers = np.array([cube.center[0] for cube in cubes])
                half = cubes[0].side / 2
                count, x = max_overlap(centers - half, centers + half)
                counts[level] = count
                if count > self.settings.C_OVERLAP:
                    raise CheckFailure("projection_overlap", f"{count} projections overlap at x={x} in T_{level}",
                                       {"root": tree.root, "level": level, "x": x, "count": count})
                overall = max(overall, count)
            per_tree[tree.root] = counts
        return OverlapReport(max_overlap=overall, per_tree=per_tree, skipped=tuple(skipped))

    @staticmethod
    def interval_count_check(corona: CoronaDecomposition, lattice: CubeLattice) -> IntervalCountReport:
        """
        PURPOSE: Count #{P in T_k(R): pi_0(R_P) c K} against H(K) / rho^k
        DESCRIPTION: The windows K are the projections pi_0(R_S) of the tree cubes S, tested
        against every finer level of the same tree.
        RETURNS: IntervalCountReport - Largest measured constant over all windows
        """
        worst, windows = 0.0, 0
        for tree in corona.trees:
            cubes = [lattice.cubes[cube_id] for cube_id in tree.tree]
            levels = sorted({cube.level for cube in cubes})
            by_level = {level: np.array([cube.center[0] for cube in cubes if cube.level == level]) for level in levels}
            for window in cubes:
                lo, hi = window.center[0] - window.side / 2, window.center[0] + window.side / 2
                for level in levels:
                    if level <= window.level:
                        continue
                    half = 2 * lattice.rho ** level
                    centers = by_level[level]
                    count = int(np.count_nonzero((centers - half >= lo) & (centers + half <= hi)))
                    worst = max(worst, count * lattice.rho ** level / (hi - lo))
                    windows += 1
        return IntervalCountReport(max_constant=worst, windows=windows)
