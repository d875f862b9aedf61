import pytest

from directions.models import DirectionSet, DyadicInterval
from tests.test_directions.strategies import cells


@pytest.mark.parametrize('direction_set, line', [
    (cells(0, 7, depth=3), 'depth=3;hex=81'),
    (cells(0, depth=2), 'depth=2;hex=8'),
    (DirectionSet.full(0), 'depth=0;hex=8'),
    (cells(4, 5, 6, 7, depth=4), 'depth=4;hex=0f00'),
])
def test_direction_set_line(set_serializer, direction_set, line):
    assert set_serializer.serialize(direction_set) == line
    assert set_serializer.deserialize(line) == direction_set


@pytest.mark.parametrize('line', ['depth=3', 'depth=x;hex=81', 'depth=3;hex=8', 'depth=3;hex=zz', 'garbage'])
def test_direction_set_line_rejects_malformed(set_serializer, line):
    with pytest.raises(DirectionSet.InvalidError):
        set_serializer.deserialize(line)


def test_gap_list(gaps_serializer):
    gaps = [DyadicInterval(3, 1), DyadicInterval(2, 1), DyadicInterval(1, 1)]
    text = gaps_serializer.serialize(gaps)
    assert text == '[{"depth": 3, "index": 1}, {"depth": 2, "index": 1}, {"depth": 1, "index": 1}]'
    assert gaps_serializer.deserialize(text) == gaps


def test_gap_list_rejects_malformed(gaps_serializer):
    with pytest.raises(DyadicInterval.InvalidError):
        gaps_serializer.deserialize('[{"depth": 3}]')
