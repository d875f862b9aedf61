import math

import numpy as np
import pytest
from hypothesis import HealthCheck, given
from hypothesis import settings as hypothesis_settings
from hypothesis import strategies as st

from core.errors import PreconditionViolation
from measures.services import union_length


@pytest.mark.parametrize('theta, expected', [
    (0.0, 1.0),
    (0.125, math.sqrt(2) / 2),
    (0.25, 0.0),
])
def test_projection_length_unit_segment(measure_service, unit_segment, theta, expected):
    assert measure_service.projection_length(unit_segment, theta) == pytest.approx(expected, abs=1e-9)


@pytest.mark.parametrize('n', [1, 2, 3, 4, 5, 6])
def test_cantor4_projection_at_zero_is_two_to_minus_n(measure_service, generator_service, n):
    length = measure_service.projection_length(generator_service.cantor4(n), 0.0)
    assert length == pytest.approx(2.0 ** -n, abs=1e-15)


def test_union_length_merges_overlaps():
    lo = np.array([0.0, 0.5, 2.0, 2.0])
    hi = np.array([1.0, 1.5, 2.0, 3.0])
    assert union_length(lo, hi) == 2.5
    assert union_length(np.empty(0), np.empty(0)) == 0.0


@hypothesis_settings(max_examples=50, deadline=None, suppress_health_check=[HealthCheck.function_scoped_fixture])
@given(st.integers(min_value=1, max_value=4), st.floats(min_value=0, max_value=1, exclude_max=True))
def test_projection_length_bounded_by_diameter(measure_service, generator_service, n, theta):
    planar_set = generator_service.cantor4(n)
    assert measure_service.projection_length(planar_set, theta) <= planar_set.diameter + 1e-12


def test_favard_unit_segment(measure_service, unit_segment):
    assert measure_service.favard(unit_segment, 4096) == pytest.approx(2 / math.pi, abs=1e-3)


def test_favard_circle(measure_service, generator_service):
    assert measure_service.favard(generator_service.circle(4096), 4096) == pytest.approx(1.0, abs=2e-3)


def test_favard_single_point(measure_service, single_point):
    assert measure_service.favard(single_point, 64) == 0.0


def test_favard_cantor4_strictly_decreasing(measure_service, generator_service):
    values = [measure_service.favard(generator_service.cantor4(n), 4096) for n in range(1, 6)]
    gaps = [earlier - later for earlier, later in zip(values, values[1:])]
    assert all(gap > 3 / 4096 for gap in gaps)


@pytest.mark.parametrize('angle, shift', [(0.25, (0.1, -0.2)), (0.5, (0.0, 0.3))])
def test_favard_invariant_under_rigid_motions(measure_service, generator_service, angle, shift):
    planar_set = generator_service.cantor4(2)
    moved = planar_set.transformed(angle, shift)
    tolerance = 2 / 1024 * planar_set.diameter
    assert measure_service.favard(moved, 1024) == pytest.approx(measure_service.favard(planar_set, 1024), abs=tolerance)


def test_favard_rejects_coarse_quadrature(measure_service, unit_segment):
    with pytest.raises(PreconditionViolation):
        measure_service.favard(unit_segment, 8)


def test_favard_profile_matches_favard(measure_service, unit_segment):
    thetas, lengths = measure_service.favard_profile(unit_segment, 64)
    assert len(thetas) == 64
    assert thetas[0] == 0.5 / 64
    assert math.fsum(lengths.tolist()) / 64 == measure_service.favard(unit_segment, 64)
