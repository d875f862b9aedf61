import math

import numpy as np
import pytest

from core.errors import InvalidInputError, NotFoundError
from generators.errors import OverlapError
from generators.models import GeneratorKind, GeneratorSpec
from measures.models import Box, PlanarSet, Segment


@pytest.mark.parametrize('n', [1, 2, 3])
def test_cantor4_structure(generator_service, n):
    planar_set = generator_service.cantor4(n)
    assert len(planar_set.primitives) == 4 ** n
    assert all(isinstance(box, Box) and box.side == 0.25 ** n for box in planar_set.primitives)
    assert planar_set.total_mass == pytest.approx(1.0)
    assert planar_set.diameter == pytest.approx(math.sqrt(2))


def test_cantor4_first_iterate_corners(generator_service):
    centers = sorted(box.center for box in generator_service.cantor4(1).primitives)
    assert centers == [(0.125, 0.125), (0.125, 0.875), (0.875, 0.125), (0.875, 0.875)]


@pytest.mark.parametrize('n', [0, 9, -1])
def test_cantor4_rejects_iteration(generator_service, n):
    with pytest.raises(GeneratorSpec.InvalidError):
        generator_service.cantor4(n)


def test_parallel_segments_masses_follow_lengths(generator_service):
    planar_set = generator_service.parallel_segments(2, 0.0, [0.0, 0.5], [1.0, 0.5])
    assert [segment.mass for segment in planar_set.primitives] == pytest.approx([2 / 3, 1 / 3])
    assert planar_set.primitives[1].a == pytest.approx((0.0, 0.5))
    assert planar_set.primitives[1].b == pytest.approx((0.5, 0.5))


def test_parallel_segments_on_common_line(generator_service):
    planar_set = generator_service.parallel_segments(2, 0.0, [0.0, 0.0], [0.4, 0.4], [0.0, 0.6])
    assert planar_set.total_mass == pytest.approx(1.0)


def test_parallel_segments_rotated(generator_service):
    planar_set = generator_service.parallel_segments(1, 0.25, [0.0], [1.0])
    segment = planar_set.primitives[0]
    assert segment.b[0] == pytest.approx(0.0, abs=1e-12)
    assert segment.b[1] == pytest.approx(1.0)


def test_parallel_segments_overlap(generator_service):
    with pytest.raises(OverlapError) as info:
        generator_service.parallel_segments(2, 0.0, [0.0, 0.0], [0.5, 0.5], [0.0, 0.25])
    assert (info.value.first, info.value.second) == (0, 1)
    assert isinstance(info.value, InvalidInputError)


@pytest.mark.parametrize('count, offsets, lengths', [
    (3, [0.0, 0.5], [1.0, 1.0]),
    (2, [0.0, 0.5], [1.0, 0.0]),
    (0, [], []),
])
def test_parallel_segments_rejects_layout(generator_service, count, offsets, lengths):
    with pytest.raises(GeneratorSpec.InvalidError):
        generator_service.parallel_segments(count, 0.0, offsets, lengths)


@pytest.mark.parametrize('lip', [0.0, 0.5, 1.0, 2.0])
def test_lipschitz_graph_respects_slope_bound(generator_service, lip):
    planar_set = generator_service.lipschitz_graph(lip, 32, seed=7)
    for segment in planar_set.primitives:
        dx, dy = segment.b[0] - segment.a[0], segment.b[1] - segment.a[1]
        assert dx > 0
        assert abs(dy) <= lip * dx + 1e-12
    assert planar_set.diameter <= math.sqrt(2) + 1e-9
    lengths = np.array([segment.length for segment in planar_set.primitives])
    masses = np.array([segment.mass for segment in planar_set.primitives])
    assert masses == pytest.approx(lengths / lengths.sum())


def test_lipschitz_graph_is_scaled_into_unit_diameter(generator_service):
    planar_set = generator_service.lipschitz_graph(10.0, 16, seed=7)
    assert planar_set.diameter <= math.sqrt(2) + 1e-9


def test_lipschitz_graph_is_seeded(generator_service):
    first = generator_service.lipschitz_graph(1.0, 16, seed=7)
    assert first.primitives == generator_service.lipschitz_graph(1.0, 16, seed=7).primitives
    assert first.primitives != generator_service.lipschitz_graph(1.0, 16, seed=8).primitives


@pytest.mark.parametrize('lip, n_nodes', [(-1.0, 16), (1.0, 1)])
def test_lipschitz_graph_rejects_arguments(generator_service, lip, n_nodes):
    with pytest.raises(GeneratorSpec.InvalidError):
        generator_service.lipschitz_graph(lip, n_nodes)


def test_circle(generator_service):
    planar_set = generator_service.circle(256)
    assert len(planar_set.primitives) == 256
    assert planar_set.diameter == pytest.approx(1.0)
    assert planar_set.total_mass == pytest.approx(1.0)
    with pytest.raises(GeneratorSpec.InvalidError):
        generator_service.circle(2)


def test_from_file_renormalises_mass(generator_service, set_serializer, tmp_path):
    planar_set = PlanarSet((Segment(a=(0, 0), b=(1, 0), mass=3.0), Segment(a=(0, 1), b=(1, 1), mass=1.0)))
    path = tmp_path / 'set.json'
    path.write_text(set_serializer.serialize(planar_set))
    loaded = generator_service.from_file(path)
    assert [segment.mass for segment in loaded.primitives] == pytest.approx([0.75, 0.25])


def test_from_file_missing(generator_service, tmp_path):
    with pytest.raises(NotFoundError):
        generator_service.from_file(tmp_path / 'absent.json')


def test_from_file_rejects_wide_set(generator_service, set_serializer, tmp_path):
    path = tmp_path / 'wide.json'
    path.write_text(set_serializer.serialize(PlanarSet((Segment(a=(0, 0), b=(2, 0), mass=1.0),))))
    with pytest.raises(PlanarSet.InvalidError):
        generator_service.from_file(path)


@pytest.mark.parametrize('spec, size', [
    (GeneratorSpec(kind=GeneratorKind.CANTOR4, n=2), 16),
    (GeneratorSpec(kind=GeneratorKind.CIRCLE, n=8), 8),
    (GeneratorSpec(kind=GeneratorKind.LIPSCHITZ_GRAPH, lip=1.0, n_nodes=5), 4),
    (GeneratorSpec(kind=GeneratorKind.PARALLEL_SEGMENTS, offsets=(0, 0.5, 1), lengths=(1, 1, 1)), 3),
])
def test_build_dispatches_on_kind(generator_service, spec, size):
    assert len(generator_service.build(spec).primitives) == size


def test_build_from_file_needs_path(generator_service):
    with pytest.raises(GeneratorSpec.InvalidError):
        generator_service.build(GeneratorSpec(kind=GeneratorKind.FROM_FILE))


def test_spec_rejects_unknown_kind():
    with pytest.raises(GeneratorSpec.InvalidError):
        GeneratorSpec(kind='spiral')
