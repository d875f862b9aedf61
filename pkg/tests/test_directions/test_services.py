from fractions import Fraction

import pytest
from hypothesis import HealthCheck, assume, given
from hypothesis import settings as hypothesis_settings
from hypothesis import strategies as st

from core.errors import PreconditionViolation
from directions.errors import DepthExhausted
from directions.models import DirectionSet, DyadicInterval
from directions.services import all_dyadic_intervals, iteration_bound
from tests.test_directions.strategies import cells, sets_inside_intervals

FIXTURE_SETTINGS = hypothesis_settings(max_examples=60, deadline=None,
                                       suppress_health_check=[HealthCheck.function_scoped_fixture])


def strict_ancestors(J: DyadicInterval, interval: DyadicInterval) -> list[DyadicInterval]:
    ancestors = []
    while interval != J:
        interval = interval.parent
        ancestors.append(interval)
    return ancestors


def maximal(J: DyadicInterval, found: list[DyadicInterval]) -> list[DyadicInterval]:
    members = set(found)
    return sorted((interval for interval in found if members.isdisjoint(strict_ancestors(J, interval))),
                  key=lambda interval: interval.start)


def brute_force_gaps(J: DyadicInterval, G: DirectionSet) -> list[DyadicInterval]:
    return maximal(J, [interval for interval in all_dyadic_intervals(J, G.depth) if G.count_in(interval) == 0])


def brute_force_dense(J: DyadicInterval, G: DirectionSet, eps: Fraction) -> list[DyadicInterval]:
    def dense(interval: DyadicInterval) -> bool:
        count = G.count_in(interval)
        return count > 0 and count >= (1 - eps) * 2 ** (G.depth - interval.depth)

    return maximal(J, [interval for interval in all_dyadic_intervals(J, G.depth) if dense(interval)])


def test_all_dyadic_intervals():
    intervals = list(all_dyadic_intervals(DyadicInterval(2, 1), 4))
    assert len(intervals) == 7
    assert intervals[0] == DyadicInterval(2, 1)
    assert intervals[-1] == DyadicInterval(4, 7)


@pytest.mark.parametrize('epsilon, s, expected', [(0.5, 1.0, 2), (0.1, 4.0, 0), (0.25, 2.0, 2), (0.125, 0.5, 17)])
def test_iteration_bound(epsilon, s, expected):
    assert iteration_bound(epsilon, s) == expected


def test_maximal_gaps_example(direction_service):
    gaps = direction_service.maximal_gaps(DyadicInterval(0, 0), cells(0, depth=3))
    assert gaps == [DyadicInterval(3, 1), DyadicInterval(2, 1), DyadicInterval(1, 1)]


@FIXTURE_SETTINGS
@given(sets_inside_intervals())
def test_maximal_gaps_tile_the_complement(direction_service, case):
    J, G = case
    gaps = direction_service.maximal_gaps(J, G)
    assert gaps == brute_force_gaps(J, G)
    assert DirectionSet.from_intervals(gaps, G.depth) == DirectionSet.from_intervals([J], G.depth).difference(G)


@FIXTURE_SETTINGS
@given(sets_inside_intervals(), st.sampled_from([Fraction(1, 16), Fraction(1, 8), Fraction(1, 4)]))
def test_dense_family_matches_enumeration(direction_service, case, eps):
    J, G = case
    assert direction_service.dense_family(J, G, float(eps)) == brute_force_dense(J, G, eps)


@FIXTURE_SETTINGS
@given(sets_inside_intervals(), st.sampled_from([Fraction(1, 16), Fraction(1, 8), Fraction(1, 4)]))
def test_enlargement_grows_inside_J(direction_service, case, eps):
    J, G = case
    assume(0 < G.measure < (1 - eps) * J.measure)
    trace = direction_service.enlarge(J, G, float(eps))
    J_cells = DirectionSet.from_intervals([J], G.depth)
    assert G.is_subset(trace.G_out)
    assert trace.G_out.is_subset(J_cells)
    assert trace.G_out.measure >= (1 + eps) * G.measure
    assert trace.growth >= 1 + eps
    assert set(trace.B_delta_out) <= set(trace.B_delta_in)
    assert trace.G_out == DirectionSet.from_intervals(trace.I_star, G.depth)
    for I in trace.I_family:
        assert any(star.contains(I) for star in trace.I_star)


def test_enlargement_example(direction_service):
    J = DyadicInterval(0, 0)
    trace = direction_service.enlarge(J, cells(0, 1, 4, depth=3), 0.25)
    assert trace.I_family == (DyadicInterval(2, 0), DyadicInterval(3, 4))
    assert trace.I_star == (DyadicInterval(1, 0), DyadicInterval(2, 2))
    assert trace.G_out == cells(0, 1, 2, 3, 4, 5, depth=3)


@pytest.mark.parametrize('G', [DirectionSet.empty(4), DirectionSet.full(4)])
def test_enlargement_measure_window(direction_service, G):
    with pytest.raises(PreconditionViolation) as info:
        direction_service.enlarge(DyadicInterval(0, 0), G, 0.25)
    assert info.value.check == 'measure_window'


def test_enlargement_needs_G_inside_J(direction_service):
    with pytest.raises(PreconditionViolation) as info:
        direction_service.enlarge(DyadicInterval(1, 0), cells(0, 15, depth=4), 0.25)
    assert info.value.check == 'G_inside_J'


def test_enlargement_needs_resolvable_J(direction_service):
    with pytest.raises(DepthExhausted):
        direction_service.enlarge(DyadicInterval(5, 0), cells(0, depth=4), 0.25)


@pytest.mark.parametrize('epsilon', [0.0, 1.0, 1.5])
def test_enlargement_epsilon_range(direction_service, epsilon):
    with pytest.raises(PreconditionViolation):
        direction_service.enlarge(DyadicInterval(0, 0), cells(0, depth=4), epsilon)


@pytest.mark.parametrize('epsilon', [1 / 4, 1 / 16, 1 / 256])
def test_iteration_fills_J0_within_bound(direction_service, epsilon):
    J0 = DyadicInterval(2, 1)
    G0 = cells(J0.cells(12).start + 17, depth=12)
    s = float(4 * G0.measure / J0.measure)
    result = direction_service.iterate_enlargement(J0, G0, s, epsilon)
    assert result.k0 == len(result.traces) <= result.bound == iteration_bound(epsilon, s)
    assert result.G_final.measure >= (1 - Fraction(epsilon)) * J0.measure
    assert result.G_final.is_subset(DirectionSet.from_intervals([J0], 12))
    for before, after in zip(result.traces, result.traces[1:]):
        assert before.G_out == after.G_in


def test_iteration_on_dense_start_takes_no_steps(direction_service):
    J0 = DyadicInterval(1, 0)
    G0 = DirectionSet.from_intervals([J0], 6)
    result = direction_service.iterate_enlargement(J0, G0, 4.0, 0.25)
    assert result.k0 == 0
    assert result.G_final == G0


@pytest.mark.parametrize('s', [0.0, -1.0, 1.0])
def test_iteration_preconditions(direction_service, s):
    with pytest.raises(PreconditionViolation):
        direction_service.iterate_enlargement(DyadicInterval(0, 0), cells(0, depth=4), s, 0.25)
