import logging
import math
from collections import Counter, deque

import numpy as np
from dishka import FromDishka

from core.errors import CheckFailure
from core.settings import Settings
from directions.models import DirectionSet
from energy.models import CoronaDecomposition, CoronaTree, EnergyReport, PackingReport, TreeBound, ratio
from energy.services import EnergyService
from lattice.models import CubeLattice
from measures.models import DiscreteMeasure
from measures.quadrature import LogQuadrature

logger = logging.getLogger(__name__)

# Relative slack of the stopping-time tautologies (floating summation order).
TREE_RTOL = 1e-9


class CoronaService:
    """
    PURPOSE: Stopping-time corona decomposition of a cube lattice and its consistency checks
    DESCRIPTION: Top_0 is the top level. For a root R, BCE(R) are the maximal cubes Q below R whose
    ancestor sum sum_{Q c S c R} E_G(S) reaches delta H(J); Tree(R) are the cubes of D(R) not
    strictly below a BCE cube; the children of BCE cubes form the next layer of roots.
    """
    def __init__(self, settings: Settings, energies: FromDishka[EnergyService]):
        self.settings = settings
        self.energies = energies

    def build_corona(self, lattice: CubeLattice, report: EnergyReport, aspect: float,
                     delta: float | None = None) -> CoronaDecomposition:
        """
        PURPOSE: Top/Tree/BCE decomposition
        ARGUMENTS:
            lattice: CubeLattice - The lattice D*
            report: EnergyReport - Precomputed E_G per cube
            aspect: float - H(J)
            delta: float | None - Threshold delta; settings.DELTA when omitted
        RETURNS: CoronaDecomposition - Trees layer by layer, every cube in exactly one tree
        """
        delta = self.settings.DELTA if delta is None else delta
        threshold = delta * aspect
        trees: list[CoronaTree] = []
        tree_of = np.full(len(lattice.cubes), -1, dtype=np.intp)
        roots = deque((cube.id, 0) for cube in lattice.level(lattice.top_level))
        while roots:
            root, layer = roots.popleft()
            tree, bce = [], []
            stack = [(root, 0.0)]
            while stack:
                cube_id, above = stack.pop()
                total = above + float(report.E_G[cube_id])
                tree.append(cube_id)
                tree_of[cube_id] = len(trees)
                children = lattice.cubes[cube_id].children
                if total >= threshold:
                    bce.append(cube_id)
                    roots.extend((child, layer + 1) for child in children)
                else:
                    stack.extend((child, total) for child in reversed(children))
            trees.append(CoronaTree(root=root, layer=layer, tree=tuple(sorted(tree)), bce=tuple(sorted(bce))))
        logger.info("corona: %d trees over %d layers (delta=%g)", len(trees),
                    1 + max(tree.layer for tree in trees), delta)
        return CoronaDecomposition(delta=delta, aspect=aspect, A=report.A, trees=tuple(trees), tree_of=tree_of)

    def check_partition(self, corona: CoronaDecomposition, lattice: CubeLattice):
        counts = np.zeros(len(lattice.cubes), dtype=np.intp)
        for tree in corona.trees:
            counts[list(tree.tree)] += 1
            if not set(tree.bce) <= set(tree.tree):
                raise CheckFailure("corona_partition", f"BCE({tree.root}) leaves its tree", {"root": tree.root})
        if not (counts == 1).all():
            cube = int(np.flatnonzero(counts != 1)[0])
            raise CheckFailure("corona_partition", f"cube {cube} lies in {counts[cube]} trees", {"cube": cube})

    def check_tree_bounds(self, corona: CoronaDecomposition, report: EnergyReport) -> list[TreeBound]:
        """
        PURPOSE: Assert the two stopping-time inequalities of every tree
        DESCRIPTION: sum_{Tree \\ BCE} E_G mu <= delta H(J) mu(R) and
        delta H(J) sum_{BCE} mu <= sum_{Tree} E_G mu; the upper ratio
        sum_{Tree} E_G mu / (H(J) mu(R)) is only reported.
        RETURNS: list[TreeBound] - One entry per tree
        CONTRACTS:
            RAISES:
                - CheckFailure - naming the first root that violates an inequality
        """
        bounds = []
        for tree in corona.trees:
            bce = set(tree.bce)
            inner = [q for q in tree.tree if q not in bce]
            lhs_small = math.fsum((report.E_G[inner] * report.masses[inner]).tolist())
            rhs_small = corona.threshold * report.masses[tree.root]
            rhs_lower = math.fsum((report.E_G[list(tree.tree)] * report.masses[list(tree.tree)]).tolist())
            lhs_lower = corona.threshold * math.fsum(report.masses[list(tree.bce)].tolist())
            if lhs_small > rhs_small * (1 + TREE_RTOL):
                raise CheckFailure("tree_bounds", f"energy inside Tree({tree.root}) exceeds delta H(J) mu(R)",
                                   {"root": tree.root, "lhs": lhs_small, "rhs": rhs_small})
            if lhs_lower > rhs_lower * (1 + TREE_RTOL):
                raise CheckFailure("tree_bounds", f"BCE({tree.root}) mass not paid by tree energy",
                                   {"root": tree.root, "lhs": lhs_lower, "rhs": rhs_lower})
            bounds.append(TreeBound(root=tree.root, lhs_small=lhs_small, rhs_small=rhs_small, lhs_lower=lhs_lower,
                                    rhs_lower=rhs_lower,
                                    upper_ratio=ratio(rhs_lower, corona.aspect * report.masses[tree.root])))
        return bounds

    def check_packing(self, corona: CoronaDecomposition, report: EnergyReport, mu: DiscreteMeasure,
                      G: DirectionSet, quad: LogQuadrature | None = None) -> PackingReport:
        """
        PURPOSE: Measure sum_{R in Top} mu(R) against (delta H(J))^-1 global G-energy + mu(E)
        DESCRIPTION: The global energy integrates r over [h, 1]. With delta = 0 the bound is inf.
        """
        sum_top = math.fsum(report.masses[corona.roots].tolist())
        energy = self.energies.global_energy(mu, G, mu.spacing, 1.0, quad)
        energy_term = math.inf if corona.threshold == 0 else energy / corona.threshold
        bound = energy_term + mu.total
        return PackingReport(sum_top=sum_top, energy_term=energy_term, mass_term=mu.total, bound=bound,
                             ratio=0.0 if math.isinf(bound) else sum_top / bound)

    @staticmethod
    def tree_size_histogram(corona: CoronaDecomposition) -> dict[int, int]:
        return dict(sorted(Counter(len(tree.tree) for tree in corona.trees).items()))
