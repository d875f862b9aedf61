import logging
import math
from pathlib import Path
from typing import Sequence

import numpy as np
from dishka import FromDishka

from core.settings import Settings
from generators.errors import OverlapError
from generators.models import GeneratorKind, GeneratorSpec
from geometry.models import TOL, unit
from measures.models import Box, PlanarSet, Segment
from measures.serializers import PlanarSetSerializer

logger = logging.getLogger(__name__)

MAX_DIAMETER = math.sqrt(2)
CANTOR_CORNERS = np.array([[0.0, 0.0], [0.75, 0.0], [0.0, 0.75], [0.75, 0.75]])


class GeneratorService:
    """
    PURPOSE: Deterministic constructors of the test families
    DESCRIPTION: Every constructor returns a PlanarSet of total mass 1 and diameter at most
    sqrt(2); identical arguments give identical sets.
    ATTRIBUTES:
        settings: Settings - Default seed
        serializer: PlanarSetSerializer - Reader of set files
    """
    def __init__(self, settings: Settings, serializer: FromDishka[PlanarSetSerializer]):
        self.settings = settings
        self.serializer = serializer

    def cantor4(self, n: int) -> PlanarSet:
        """
        PURPOSE: n-th iterate of the four-corner Cantor construction
        DESCRIPTION: Iterates the maps p -> p/4 + c, c in {0, 3/4}^2, on lower-left corners, so
        every coordinate is an exact dyadic rational.
        ARGUMENTS:
            n: int - Iteration in [1, 8]
        RETURNS: PlanarSet - 4^n boxes of side 4^-n, each of mass 4^-n
        """
        if not 1 <= n <= 8:
            raise GeneratorSpec.InvalidError(f"cantor4 iteration {n} outside [1, 8]")
        corners = np.zeros((1, 2))
        for _ in range(n):
            corners = np.concatenate([corners / 4 + shift for shift in CANTOR_CORNERS])
        side = 0.25 ** n
        boxes = tuple(Box(center=(x + side / 2, y + side / 2), side=side, mass=side) for x, y in corners)
        return self._finish(PlanarSet(boxes), f"cantor4(n={n})")

    def parallel_segments(self, count: int, direction: float, offsets: Sequence[float], lengths: Sequence[float],
                          starts: Sequence[float] | None = None) -> PlanarSet:
        """
        PURPOSE: Union of parallel segments with masses proportional to length
        DESCRIPTION: Segment i covers starts[i] + [0, lengths[i]] along e_direction at signed
        distance offsets[i] along the perpendicular. Segments on a common line must be disjoint.
        ARGUMENTS:
            count: int - Number k of segments
            direction: float - Common direction theta_0
            offsets: Sequence[float] - Perpendicular offsets
            lengths: Sequence[float] - Positive lengths
            starts: Sequence[float] | None - Along-line starting positions, zeros when omitted
        RETURNS: PlanarSet - k segments of total mass 1
        CONTRACTS:
            RAISES:
                - GeneratorSpec.InvalidError - when the sequences disagree with count or a length
                  is not positive
                - OverlapError - when two segments intersect
        """
        starts = [0.0] * count if starts is None or len(starts) == 0 else list(starts)
        if count < 1 or not len(offsets) == len(lengths) == len(starts) == count:
            raise GeneratorSpec.InvalidError(f"expected {count} offsets, lengths and starts")
        if any(length <= 0 for length in lengths):
            raise GeneratorSpec.InvalidError("segment lengths must be positive")
        for i in range(count):
            for j in range(i + 1, count):
                if abs(offsets[i] - offsets[j]) <= TOL and \
                        starts[i] <= starts[j] + lengths[j] + TOL and starts[j] <= starts[i] + lengths[i] + TOL:
                    raise OverlapError(i, j)
        (c, s), (pc, ps) = unit(direction), unit(direction + 0.25)
        total = math.fsum(lengths)
        segments = []
        for offset, length, start in zip(offsets, lengths, starts):
            a = (start * c + offset * pc, start * s + offset * ps)
            b = (a[0] + length * c, a[1] + length * s)
            segments.append(Segment(a=a, b=b, mass=length / total))
        return self._finish(PlanarSet(tuple(segments)), f"parallel_segments(k={count})")

    def lipschitz_graph(self, lip: float, n_nodes: int, seed: int | None = None) -> PlanarSet:
        """
        PURPOSE: Piecewise-linear graph over [0, 1] with slopes bounded by lip
        DESCRIPTION: Edge slopes are drawn uniformly from [-lip, lip] by a seeded generator;
        graphs wider than sqrt(2) are scaled down, which keeps every slope.
        RETURNS: PlanarSet - n_nodes - 1 segments with masses proportional to length
        """
        if lip < 0:
            raise GeneratorSpec.InvalidError(f"Lipschitz bound {lip} must be nonnegative")
        if n_nodes < 2:
            raise GeneratorSpec.InvalidError("a graph needs at least 2 nodes")
        rng = np.random.default_rng(self.settings.SEED if seed is None else seed)
        xs = np.linspace(0.0, 1.0, n_nodes)
        slopes = rng.uniform(-lip, lip, n_nodes - 1)
        ys = np.concatenate([[0.0], np.cumsum(slopes * np.diff(xs))])
        nodes = np.column_stack([xs, ys])
        raw = PlanarSet(tuple(Segment(a=tuple(p), b=tuple(q), mass=1.0) for p, q in zip(nodes[:-1], nodes[1:])))
        if raw.diameter > MAX_DIAMETER:
            nodes = nodes * (MAX_DIAMETER / raw.diameter) * (1 - 1e-12)
        lengths = np.hypot(*np.diff(nodes, axis=0).T)
        segments = tuple(Segment(a=tuple(p), b=tuple(q), mass=float(length / lengths.sum()))
                         for p, q, length in zip(nodes[:-1], nodes[1:], lengths))
        return self._finish(PlanarSet(segments), f"lipschitz_graph(lip={lip}, n_nodes={n_nodes})")

    def circle(self, n_edges: int) -> PlanarSet:
        """Regular polygon inscribed in the circle of diameter 1 centred at (1/2, 1/2)."""
        if n_edges < 3:
            raise GeneratorSpec.InvalidError("a polygon needs at least 3 edges")
        angles = 2 * np.pi * np.arange(n_edges + 1) / n_edges
        nodes = np.column_stack([0.5 + 0.5 * np.cos(angles), 0.5 + 0.5 * np.sin(angles)])
        segments = tuple(Segment(a=tuple(p), b=tuple(q), mass=1.0 / n_edges) for p, q in zip(nodes[:-1], nodes[1:]))
        return self._finish(PlanarSet(segments), f"circle(n_edges={n_edges})")

    def from_file(self, path: str | Path) -> PlanarSet:
        """
        PURPOSE: Read a PlanarSet JSON file and renormalise its mass to 1
        CONTRACTS:
            RAISES:
                - PlanarSet.NotFoundError - when the file does not exist
                - PlanarSet.InvalidError - when the file is malformed
        """
        try:
            text = Path(path).read_text()
        except FileNotFoundError:
            raise PlanarSet.NotFoundError(f"file {path}")
        return self._finish(self.serializer.deserialize(text), f"file {path}")

    def build(self, spec: GeneratorSpec) -> PlanarSet:
        match spec.kind:
            case GeneratorKind.CANTOR4:
                return self.cantor4(spec.n)
            case GeneratorKind.PARALLEL_SEGMENTS:
                return self.parallel_segments(len(spec.lengths), spec.direction, spec.offsets, spec.lengths,
                                              spec.starts)
            case GeneratorKind.LIPSCHITZ_GRAPH:
                return self.lipschitz_graph(spec.lip, spec.n_nodes, spec.seed)
            case GeneratorKind.CIRCLE:
                return self.circle(spec.n)
            case GeneratorKind.FROM_FILE:
                if spec.path is None:
                    raise GeneratorSpec.InvalidError("from_file needs a path")
                return self.from_file(spec.path)

    @staticmethod
    def _finish(planar_set: PlanarSet, label: str) -> PlanarSet:
        if planar_set.diameter > MAX_DIAMETER + TOL:
            raise PlanarSet.InvalidError(f"{label} has diameter {planar_set.diameter} > sqrt(2)")
        if abs(planar_set.total_mass - 1.0) > 1e-12:
            planar_set = planar_set.normalized()
        logger.info("generated %s: %d primitives, diameter %.6g", label, len(planar_set.primitives),
                    planar_set.diameter)
        return planar_set
