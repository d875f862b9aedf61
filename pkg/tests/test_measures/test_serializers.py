import json

import numpy as np
import pytest

from measures.models import Box, DiscreteMeasure, PlanarSet, Segment
from measures.serializers import DiscreteMeasureSerializer


@pytest.fixture
def mixed_set() -> PlanarSet:
    return PlanarSet((Segment(a=(0, 0), b=(1, 0.5), mass=0.25), Box(center=(0.5, 0.5), side=0.25, mass=0.75)))


def test_planar_set_json_is_deterministic(set_serializer, mixed_set):
    text = set_serializer.serialize(mixed_set)
    assert text == set_serializer.serialize(set_serializer.deserialize(text))
    assert [item['kind'] for item in json.loads(text)['primitives']] == ['segment', 'box']


def test_planar_set_json_restores_primitives(set_serializer, mixed_set):
    restored = set_serializer.deserialize(set_serializer.serialize(mixed_set))
    assert restored.primitives == mixed_set.primitives
    assert restored.total_mass == pytest.approx(1.0)


@pytest.mark.parametrize('text', [
    '{}',
    '{"primitives": [{"kind": "disk", "center": [0, 0], "side": 1, "mass": 1}]}',
    '{"primitives": [{"kind": "segment", "a": [0, 0], "mass": 1}]}',
    'not json',
])
def test_planar_set_json_rejects_malformed_text(set_serializer, text):
    with pytest.raises(PlanarSet.InvalidError):
        set_serializer.deserialize(text)


def test_measure_csv_keeps_spacing_and_weights(measure_serializer):
    mu = DiscreteMeasure(np.array([[0.0, 0.0], [0.1, 0.2]]), np.array([0.3, 0.7]), 1e-3)
    text = measure_serializer.serialize(mu)
    assert text.splitlines()[:2] == ['# spacing=0.001', 'x,y,w']
    restored = measure_serializer.deserialize(text)
    assert restored.spacing == 1e-3
    assert np.array_equal(restored.points, mu.points)
    assert np.array_equal(restored.weights, mu.weights)


def test_plain_measure_csv_gets_the_configured_spacing(measure_serializer, settings):
    restored = measure_serializer.deserialize('x,y,w\n0,0,0.25\n1,0,0.75\n')
    assert restored.spacing == settings.SAMPLE_SPACING
    assert restored.points.tolist() == [[0.0, 0.0], [1.0, 0.0]]
    assert restored.weights.tolist() == [0.25, 0.75]


def test_measure_csv_without_any_spacing():
    with pytest.raises(DiscreteMeasure.InvalidError):
        DiscreteMeasureSerializer().deserialize('x,y,w\n0,0,1\n')


def test_measure_rejects_nonpositive_weights():
    with pytest.raises(DiscreteMeasure.InvalidError):
        DiscreteMeasure(np.array([[0.0, 0.0]]), np.array([0.0]), 1e-3)
