import logging
import math
import threading

import numpy as np
from dishka import FromDishka

from core.parallel import ordered_map
from core.settings import Settings
from directions.models import DirectionSet
from energy.models import EnergyReport
from geometry.models import AngleBand, AngleInterval, DirectionFilter
from lattice.models import CubeLattice, DyadicCube
from measures.cones import ConeProfile, RectIndex
from measures.models import DiscreteMeasure
from measures.quadrature import LogQuadrature
from measures.services import MeasureService

logger = logging.getLogger(__name__)


def filter_key(directions: DirectionFilter) -> tuple:
    if isinstance(directions, DirectionSet):
        return ("set", *directions.key)
    return ("filter", repr(directions))


class EnergyService:
    """
    PURPOSE: Conical energies of lattice cubes with memoisation
    DESCRIPTION: Cone profiles are cached per (measure, direction filter) and the per-apex radial
    integrals of E_G per (measure, filter, quadrature, A, L(Q)), so the corona builder and every
    checker read the same numbers. One service lives for one request scope, i.e. one command.
    ATTRIBUTES:
        settings: Settings - A, quadrature density, thread count
        measures: MeasureService - Quadrature defaults
    """
    def __init__(self, settings: Settings, measures: FromDishka[MeasureService]):
        self.settings = settings
        self.measures = measures
        self._profiles: dict[tuple, tuple[DiscreteMeasure, ConeProfile]] = {}
        self._integrals: dict[tuple, tuple[DiscreteMeasure, np.ndarray]] = {}
        self._lock = threading.Lock()

    def profile(self, mu: DiscreteMeasure, directions: DirectionFilter) -> ConeProfile:
        key = (id(mu), filter_key(directions))
        with self._lock:
            entry = self._profiles.get(key)
            if entry is None or entry[0] is not mu:
                entry = (mu, ConeProfile(mu, directions, mu.spacing))
                self._profiles[key] = entry
        return entry[1]

    def _integral_table(self, mu: DiscreteMeasure, G: DirectionFilter, A: float, tall: float,
                        quad: LogQuadrature) -> np.ndarray:
        key = (id(mu), filter_key(G), quad.params.nodes_per_decade, A, tall)
        with self._lock:
            entry = self._integrals.get(key)
            if entry is None or entry[0] is not mu:
                entry = (mu, np.full(len(mu), np.nan))
                self._integrals[key] = entry
        return entry[1]

    def energy_EG(self, lattice: CubeLattice, Q: DyadicCube, mu: DiscreteMeasure, G: DirectionFilter,
                  A: float | None = None, quad: LogQuadrature | None = None) -> float:
        """
        PURPOSE: E_G(Q) = (1/mu(Q)) sum_{x in 2A R_Q} w(x) int_{L(Q)/A}^{A^3 L(Q)} mu(X(x, G, r)) / r dr/r
        ARGUMENTS:
            lattice: CubeLattice - Lattice holding Q
            Q: DyadicCube - The cube
            mu: DiscreteMeasure - Sampled measure
            G: DirectionFilter - Direction set of the cones
            A: float | None - Dilation constant; settings.a_effective when omitted
            quad: LogQuadrature | None - Radial rule; from settings when omitted
        RETURNS: float - The energy, 0 for an empty direction set
        """
        A = self.settings.a_effective if A is None else A
        quad = self.measures.quadrature if quad is None else quad
        if isinstance(G, DirectionSet) and G.is_empty():
            return 0.0
        apices = RectIndex(mu, lattice.aspect).members(Q.center, 2 * A * Q.side)
        table = self._integral_table(mu, G, A, Q.tall, quad)
        missing = apices[np.isnan(table[apices])]
        if len(missing):
            profile = self.profile(mu, G)
            a, b = Q.tall / A, A ** 3 * Q.tall
            values = ordered_map(lambda i: profile.energy(int(i), a, b, quad), missing, self.settings.THREADS)
            table[missing] = values
        return math.fsum((mu.weights[apices] * table[apices]).tolist()) / Q.mass

    def energy_EJ_variants(self, lattice: CubeLattice, Q: DyadicCube, mu: DiscreteMeasure, J: AngleInterval,
                           quad: LogQuadrature | None = None) -> dict[str, float]:
        """
        PURPOSE: E_J(Q) and its interior, exterior and single-scale exterior parts
        DESCRIPTION: Apices are the points of Q and scales run over [rho L(Q), L(Q)]. The
        direction sets are 3J, 0.5J and the band 3J \\ 0.5J.
        RETURNS: dict[str, float] - Keys E_J, E_J_int, E_J_ext, E_J_ext_tilde
        """
        quad = self.measures.quadrature if quad is None else quad
        outer, inner = J.dilate(3), J.dilate(0.5)
        band = AngleBand(outer=outer, inner=inner)
        a, b = lattice.rho * Q.tall, Q.tall
        weights = mu.weights[Q.members]
        values = {}
        for name, directions in (("E_J", outer), ("E_J_int", inner), ("E_J_ext", band)):
            profile = self.profile(mu, directions)
            integrals = [profile.energy(int(i), a, b, quad) for i in Q.members]
            values[name] = math.fsum((weights * np.array(integrals)).tolist()) / Q.mass
        profile = self.profile(mu, band)
        single = [float(profile.mass_between(int(i), a, b)) / b for i in Q.members]
        values["E_J_ext_tilde"] = math.fsum((weights * np.array(single)).tolist()) / Q.mass
        return values

    def compute_report(self, lattice: CubeLattice, mu: DiscreteMeasure, G: DirectionFilter, J: AngleInterval,
                       A: float | None = None, quad: LogQuadrature | None = None) -> EnergyReport:
        """
        PURPOSE: Energies of every cube of the lattice
        RETURNS: EnergyReport - Arrays indexed by cube id
        """
        A = self.settings.a_effective if A is None else A
        quad = self.measures.quadrature if quad is None else quad
        logger.info("computing energies of %d cubes (A=%g, %d nodes/decade)", len(lattice.cubes), A,
                    quad.params.nodes_per_decade)
        e_g = [self.energy_EG(lattice, cube, mu, G, A, quad) for cube in lattice.cubes]
        variants = ordered_map(lambda cube: self.energy_EJ_variants(lattice, cube, mu, J, quad), lattice.cubes,
                               self.settings.THREADS)
        return EnergyReport(
            E_G=np.array(e_g),
            E_J=np.array([v["E_J"] for v in variants]),
            E_J_int=np.array([v["E_J_int"] for v in variants]),
            E_J_ext=np.array([v["E_J_ext"] for v in variants]),
            E_J_ext_tilde=np.array([v["E_J_ext_tilde"] for v in variants]),
            masses=np.array([cube.mass for cube in lattice.cubes]),
            levels=np.array([cube.level for cube in lattice.cubes], dtype=np.intp),
            A=A,
            nodes_per_decade=quad.params.nodes_per_decade,
        )

    def global_energy(self, mu: DiscreteMeasure, directions: DirectionFilter, a: float, b: float,
                      quad: LogQuadrature | None = None) -> float:
        """sum_x w(x) int_a^b mu(X(x, I, r)) / r dr/r over the whole sample."""
        quad = self.measures.quadrature if quad is None else quad
        if isinstance(directions, DirectionSet) and directions.is_empty():
            return 0.0
        profile = ConeProfile(mu, directions, mu.spacing, cache=False)
        values = ordered_map(lambda i: profile.energy(i, a, b, quad), range(len(mu)), self.settings.THREADS)
        return math.fsum((mu.weights * np.array(values)).tolist())
