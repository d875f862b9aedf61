import pytest

from core.errors import PreconditionViolation
from directions.models import DirectionSet
from gaps.errors import NotAGraph
from gaps.graphs import GraphService, segment_direction
from generators.services import GeneratorService
from geometry.models import AngleInterval
from measures.models import PlanarSet, Segment
from verification.corpus import corollary_set, stacked_set


def test_segment_direction_of_horizontal_union():
    assert segment_direction(corollary_set()) == pytest.approx(0.0)


def test_segment_direction_ignores_orientation():
    planar_set = PlanarSet((Segment(a=(0.0, 0.0), b=(0.0, 1.0), mass=1.0),
                            Segment(a=(1.0, 1.0), b=(1.0, 0.0), mass=1.0)))
    assert segment_direction(planar_set) == pytest.approx(0.25)


def test_segment_direction_rejects_crossing_directions():
    planar_set = PlanarSet((Segment(a=(0.0, 0.0), b=(1.0, 0.0), mass=1.0),
                            Segment(a=(2.0, 0.0), b=(2.0, 1.0), mass=1.0)))
    with pytest.raises(PlanarSet.InvalidError):
        segment_direction(planar_set)


def test_admissible_directions_avoid_the_segments(graph_service):
    G = graph_service.admissible_directions(0.0, DirectionSet.full(10), 0.5)
    assert not G.contains_angle(0.01)
    assert not G.contains_angle(0.51)
    assert G.contains_angle(0.25)
    assert G.contains_angle(0.75)


def test_corollary_set_is_a_graph(graph_service):
    graph = graph_service.extract_graph_parallel_segments(corollary_set(), DirectionSet.full(10), 0.5)

    assert graph.theta == pytest.approx(0.25)
    assert graph.segment_direction == pytest.approx(0.0)
    assert graph.lip == pytest.approx(0.05 / 0.201, rel=1e-3)
    assert graph.lip_bound == pytest.approx(8.0)
    assert 0.55 <= graph.density_constant <= 0.75


def test_explicit_direction_outside_the_window_is_rejected(graph_service):
    with pytest.raises(PreconditionViolation) as exc_info:
        graph_service.extract_graph_parallel_segments(corollary_set(), DirectionSet.full(10), 0.5, theta=0.02)
    assert exc_info.value.check == 'segments_window'


def test_too_few_good_directions(graph_service):
    G_T = DirectionSet.from_angle_interval(AngleInterval(center=0.25, halfwidth=1 / 16), 10)
    with pytest.raises(PreconditionViolation):
        graph_service.extract_graph_parallel_segments(corollary_set(), G_T, 0.5)


def test_stacked_segments_are_not_a_graph(graph_service):
    with pytest.raises(NotAGraph) as exc_info:
        graph_service.extract_graph_parallel_segments(stacked_set(), DirectionSet.full(10), 0.5)
    first, second = exc_info.value.first, exc_info.value.second
    assert first[0] == pytest.approx(second[0])
    assert abs(first[1] - second[1]) == pytest.approx(0.05)


def test_touching_projections_are_allowed():
    planar_set = PlanarSet((Segment(a=(0.0, 0.0), b=(0.5, 0.0), mass=1.0),
                            Segment(a=(0.5, 0.1), b=(1.0, 0.1), mass=1.0)))
    assert GraphService.graph_violation(planar_set, 0.25) is None


def test_graph_violation_of_a_collapsed_segment():
    planar_set = PlanarSet((Segment(a=(0.0, 0.0), b=(1.0, 0.0), mass=1.0),))
    violation = GraphService.graph_violation(planar_set, 0.0)
    assert violation.first == (0.0, 0.0)
    assert violation.second == (1.0, 0.0)


def test_lipschitz_graph_check(request_container):
    planar_set = request_container.get(GeneratorService).lipschitz_graph(1.0, 16, seed=7)
    report = GraphService.check_lipschitz_graph(planar_set, 1.0)
    assert report.ratio <= 1.0 + 1e-9


def test_lipschitz_constant_of_the_corollary_set():
    report = GraphService.check_lipschitz_graph(corollary_set(), 1.0)
    assert report.lhs == pytest.approx(0.25)
    assert report.ratio == pytest.approx(0.25)
