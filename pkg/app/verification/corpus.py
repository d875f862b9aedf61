from directions.models import DirectionSet, DyadicInterval
from measures.models import PlanarSet, Segment
from verification.models import CorpusCase, CorpusParameters, Mutation

TWO_SEGMENT_HEIGHTS = (0.45, 0.55, 0.65)
TWO_SEGMENT_GAPS = (0.14, 0.16, 0.18)
STAIRCASE_HEIGHTS = (0.3, 0.35, 0.4)
STAIRCASE_GAP_FACTORS = (0.4, 0.5, 0.6)
ZIGZAG_HEIGHTS = (0.45, 0.55, 0.65)
ZIGZAG_GAP_FACTORS = (0.25, 0.3, 0.35)

# Base configuration of the mutations.
BASE_HEIGHT, BASE_GAP = 0.55, 0.16


def horizontal(pieces: list[tuple[float, float, float]]) -> PlanarSet:
    """Union of horizontal segments (start, length, height) with mass proportional to length."""
    segments = [Segment(a=(start, height), b=(start + length, height), mass=length) for start, length, height in pieces]
    return PlanarSet(tuple(segments)).normalized()


def two_segment(height: float, gap: float) -> PlanarSet:
    return horizontal([(0.0, 0.15, 0.0), (0.15 + gap, 0.15, height)])


def staircase(height: float, gap: float) -> PlanarSet:
    return horizontal([(i * (0.08 + gap), 0.08, i * height) for i in range(3)])


def zigzag(height: float, gap: float) -> PlanarSet:
    return horizontal([(i * (0.1 + gap), 0.1, height if i == 1 else 0.0) for i in range(3)])


def positive_corpus() -> list[CorpusCase]:
    """
    PURPOSE: Unions of horizontal segments that contain Bad cubes and pass the empty-cone check
    DESCRIPTION: Pieces at different heights are separated horizontally by more than 0.2 times
    their height difference, so no chord lies within 1/32 turn of the vertical, and the
    horizontal voids are longer than l(Q) / A for the top cubes.
    RETURNS: list[CorpusCase] - 27 cases: two-segment, staircase and zig-zag layouts
    """
    cases = [CorpusCase(name=f"two_segment(v={v},g={g})", planar_set=two_segment(v, g))
             for v in TWO_SEGMENT_HEIGHTS for g in TWO_SEGMENT_GAPS]
    cases += [CorpusCase(name=f"staircase(v={v},g={f}v)", planar_set=staircase(v, f * v))
              for v in STAIRCASE_HEIGHTS for f in STAIRCASE_GAP_FACTORS]
    cases += [CorpusCase(name=f"zigzag(v={v},g={f}v)", planar_set=zigzag(v, f * v))
              for v in ZIGZAG_HEIGHTS for f in ZIGZAG_GAP_FACTORS]
    return cases


def corollary_set() -> PlanarSet:
    """Two horizontal segments over [0, 0.4] and [0.6, 1], offset by 0.05."""
    return horizontal([(0.0, 0.4, 0.0), (0.6, 0.4, 0.05)])


def stacked_set() -> PlanarSet:
    return horizontal([(0.0, 0.4, 0.0), (0.0, 0.4, 0.05)])


def with_vertical_segment(planar_set: PlanarSet) -> PlanarSet:
    vertical = Segment(a=(1.0, 0.0), b=(1.0, 0.02), mass=0.02 * planar_set.total_mass)
    return PlanarSet(planar_set.primitives + (vertical,)).normalized()


def with_atom(planar_set: PlanarSet, at: tuple[float, float] = (0.075, 0.0), share: float = 0.6) -> PlanarSet:
    atom = Segment(a=at, b=at, mass=share / (1 - share) * planar_set.total_mass)
    return PlanarSet(planar_set.primitives + (atom,)).normalized()


def thinned_directions(params: CorpusParameters, depth: int = 6) -> DirectionSet:
    """J cells with every other depth-6 dyadic cell removed."""
    J_cells = params.G()
    removed = [DyadicInterval(depth, index) for index in range(0, 2 ** depth, 2)]
    return J_cells.difference(DirectionSet.from_intervals(removed, params.G_depth))


MUTATIONS = (
    Mutation(name="point_in_A", target="gaps.gap_lemma",
             description="a sample point placed inside the rectangle A of a passing verdict"),
    Mutation(name="vertical_segment", target="gaps.empty_cones",
             description="a short vertical segment added far right of the base set"),
    Mutation(name="density_spike", target="measures.cube_mass_bounds",
             description="an atom carrying 60% of the mass placed on the lower segment"),
    Mutation(name="thin_G", target="energy.filling_gaps",
             description="G = J with every other depth-6 cell removed"),
    Mutation(name="stacked_segments", target="gaps.segments_corollary",
             description="two identical horizontal segments stacked above each other"),
)


def mutation_corpus() -> tuple[Mutation, ...]:
    return MUTATIONS
