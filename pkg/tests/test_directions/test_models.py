from fractions import Fraction

import numpy as np
import pytest

from directions.errors import DepthExhausted
from directions.models import DirectionSet, DyadicInterval
from geometry.models import AngleInterval
from tests.test_directions.strategies import cells


def test_dyadic_interval_arithmetic():
    interval = DyadicInterval(3, 5)
    assert (interval.start, interval.end, interval.measure) == (Fraction(5, 8), Fraction(3, 4), Fraction(1, 8))
    assert interval.parent == DyadicInterval(2, 2)
    assert interval.sibling == DyadicInterval(3, 4)
    assert interval.children() == (DyadicInterval(4, 10), DyadicInterval(4, 11))
    assert interval.cells(5) == range(20, 24)


@pytest.mark.parametrize('outer, inner, expected', [
    (DyadicInterval(1, 1), DyadicInterval(3, 5), True),
    (DyadicInterval(1, 0), DyadicInterval(3, 5), False),
    (DyadicInterval(3, 5), DyadicInterval(3, 5), True),
    (DyadicInterval(3, 5), DyadicInterval(1, 1), False),
])
def test_dyadic_containment(outer, inner, expected):
    assert outer.contains(inner) is expected


@pytest.mark.parametrize('depth, index', [(2, 4), (1, -1), (-1, 0)])
def test_dyadic_interval_rejects_index(depth, index):
    with pytest.raises(DyadicInterval.InvalidError):
        DyadicInterval(depth, index)


def test_cells_below_interval_depth():
    with pytest.raises(DepthExhausted):
        DyadicInterval(6, 3).cells(4)


def test_full_circle_has_no_parent():
    with pytest.raises(DyadicInterval.InvalidError):
        DyadicInterval(0, 0).parent


def test_from_angle_interval_takes_cell_midpoints():
    G = DirectionSet.from_angle_interval(AngleInterval(center=0.25, halfwidth=1 / 16), 12)
    assert G.measure == Fraction(1, 8)
    assert G.runs() == [(768, 512)]


def test_from_angle_interval_wraps_around_zero():
    G = DirectionSet.from_angle_interval(AngleInterval(center=0.0, halfwidth=1 / 16), 6)
    assert G.runs() == [(60, 8)]
    assert G.contains_angle(0.99) and G.contains_angle(0.01)


def test_set_algebra():
    a, b = cells(0, 1, 2, depth=3), cells(2, 3, depth=3)
    assert a.union(b) == cells(0, 1, 2, 3, depth=3)
    assert a.intersection(b) == cells(2, depth=3)
    assert a.difference(b) == cells(0, 1, depth=3)
    assert a.complement() == cells(3, 4, 5, 6, 7, depth=3)
    assert cells(1, depth=3).is_subset(a)
    assert not b.is_subset(a)
    assert a.measure == Fraction(3, 8)


def test_set_algebra_needs_equal_depth():
    with pytest.raises(DirectionSet.InvalidError):
        cells(0, depth=3).union(cells(0, depth=4))


def test_rotate_quarter():
    assert cells(0, 7, depth=3).rotate_quarter() == cells(2, 1, depth=3)
    with pytest.raises(DepthExhausted):
        DirectionSet.full(1).rotate_quarter()


def test_runs_merge_across_zero():
    assert cells(0, 1, 7, 4, depth=3).runs() == [(4, 1), (7, 3)]
    assert DirectionSet.full(3).runs() == [(0, 8)]
    assert DirectionSet.empty(3).runs() == []


def test_line_mask_uses_both_directions():
    G = cells(0, depth=3)
    mask = G.line_mask(np.array([1.0, -1.0, 0.0, 0.0]), np.array([0.0, 0.0, 1.0, 0.0]))
    assert mask.tolist() == [True, True, False, True]
    assert DirectionSet.empty(3).line_mask(np.array([0.0]), np.array([0.0])).tolist() == [False]


def test_nearest_member():
    assert cells(1, depth=3).nearest_member(0.9) == pytest.approx(0.1875)
    assert DirectionSet.empty(3).nearest_member(0.5) is None


def test_wrong_bit_count():
    with pytest.raises(DirectionSet.InvalidError):
        DirectionSet(3, np.zeros(4, dtype=bool))
