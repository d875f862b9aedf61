import math

import numpy as np
import pytest
from hypothesis import HealthCheck, given
from hypothesis import settings as hypothesis_settings
from hypothesis import strategies as st

from core.errors import PreconditionViolation
from directions.models import DirectionSet
from geometry.models import AngleInterval, AnisoRect, Cone
from geometry.operations import project_points
from measures.models import Box, DiscreteMeasure, PlanarSet, Segment
from measures.services import union_length


def test_sample_segment_spacing_and_total(measure_service, unit_segment):
    mu = measure_service.sample(unit_segment, 1e-3)
    assert len(mu) == 1000
    assert mu.total == pytest.approx(1.0, abs=1e-12)
    assert np.diff(np.sort(mu.points[:, 0])).max() <= 1e-3 + 1e-15


def test_sample_cantor4_fills_each_box_with_a_grid(measure_service, generator_service):
    mu = measure_service.sample(generator_service.cantor4(2), 1 / 128)
    assert len(mu) == 16 * 64
    assert mu.total == pytest.approx(1.0, abs=1e-12)
    assert np.allclose(mu.weights, 1 / 1024)
    xs = np.unique(np.round(mu.points[:64, 0], 12))
    assert len(xs) == 8
    assert np.allclose(np.diff(xs), 1 / 128)


@pytest.mark.parametrize('planar_set', [
    PlanarSet((Box(center=(0.5, 0.5), side=1.0, mass=1.0),)),
    PlanarSet(tuple(Box(center=center, side=0.25, mass=0.25)
                    for center in [(0.125, 0.125), (0.875, 0.125), (0.125, 0.875), (0.875, 0.875)])),
])
@pytest.mark.parametrize('theta', [0.0, 0.05, 0.125, 0.25])
def test_sampled_box_projects_onto_the_box_projection(measure_service, planar_set, theta):
    h = 1e-2
    projected = project_points(measure_service.sample(planar_set, h).points, theta)
    support = union_length(projected - h / 2, projected + h / 2)
    assert support == pytest.approx(measure_service.projection_length(planar_set, theta), abs=2 * h)


def test_sample_is_deterministic(measure_service, generator_service):
    planar_set = generator_service.lipschitz_graph(1.0, 8, seed=3)
    first, second = measure_service.sample(planar_set), measure_service.sample(planar_set)
    assert np.array_equal(first.points, second.points)
    assert np.array_equal(first.weights, second.weights)


def test_sample_rejects_nonpositive_spacing(measure_service, unit_segment):
    with pytest.raises(PreconditionViolation):
        measure_service.sample(unit_segment, 0.0)


def test_pushforward_density_of_segment(measure_service, unit_segment):
    mu = measure_service.sample(unit_segment, 1e-5)
    profile = measure_service.pushforward_density(mu, 0.0, 1e-2)
    assert profile.sup_norm == pytest.approx(1.0, abs=0.05)
    assert not profile.degenerate


def test_pushforward_density_flags_atom(measure_service, unit_segment):
    mu = measure_service.sample(unit_segment, 1e-4)
    assert measure_service.pushforward_density(mu, 0.25, 1e-2).degenerate


def test_pushforward_density_at_eighth_turn(measure_service, unit_segment):
    mu = measure_service.sample(unit_segment, 1e-4)
    profile = measure_service.pushforward_density(mu, 0.125, 1e-2)
    assert profile.sup_norm == pytest.approx(math.sqrt(2), rel=0.05)


@hypothesis_settings(max_examples=30, deadline=None, suppress_health_check=[HealthCheck.function_scoped_fixture])
@given(st.floats(min_value=0, max_value=1, exclude_max=True), st.sampled_from([1e-3, 1e-2, 5e-2]))
def test_pushforward_density_conserves_mass(measure_service, generator_service, theta, bin_width):
    mu = measure_service.sample(generator_service.cantor4(2), 1 / 128)
    profile = measure_service.pushforward_density(mu, theta, bin_width)
    assert profile.mass == pytest.approx(mu.total, rel=1e-9)


def test_density_witness(measure_service, unit_segment, vertical_segment):
    window = AngleInterval(center=0.25, halfwidth=1 / 16)
    witness = measure_service.density_witness(measure_service.sample(unit_segment), window, 2.0)
    assert witness is not None
    assert witness[0] == pytest.approx(0.25)
    assert measure_service.density_witness(measure_service.sample(vertical_segment), window, 2.0) is None


def test_density_refinement_curve(measure_service, unit_segment):
    mu = measure_service.sample(unit_segment, 1e-4)
    curve = measure_service.density_refinement_curve(mu, 0.125, [4e-2, 2e-2, 1e-2])
    assert [width for width, _ in curve] == [4e-2, 2e-2, 1e-2]
    assert all(sup == pytest.approx(math.sqrt(2), rel=0.1) for _, sup in curve)


def test_ad_constant_unit_segment(measure_service, unit_segment):
    mu = measure_service.sample(unit_segment, 1e-3)
    assert measure_service.ad_constant(mu, unit_segment) == pytest.approx(2.0, abs=0.1)


def test_ad_constant_of_atom_is_infinite(measure_service, single_point):
    mu = measure_service.sample(single_point)
    assert math.isinf(measure_service.ad_constant(mu, single_point))


def test_ad_constant_cantor4_is_finite(measure_service, generator_service):
    planar_set = generator_service.cantor4(3)
    assert math.isfinite(measure_service.ad_constant(measure_service.sample(planar_set), planar_set))


@pytest.fixture
def two_points() -> DiscreteMeasure:
    return DiscreteMeasure(np.array([[0.0, 0.0], [0.0, 1.0]]), np.array([1.0, 1.0]), 1e-3)


@pytest.mark.parametrize('r_out, expected', [(2.0, 1.0), (0.5, 0.0)])
def test_cone_mass_two_points(measure_service, two_points, r_out, expected):
    cone = Cone(apex=(0, 0), directions=AngleInterval(center=0.25, halfwidth=1 / 16), r_out=r_out)
    assert measure_service.cone_mass(two_points, cone, 1e-6) == expected


def test_cone_mass_of_empty_direction_set(measure_service, two_points):
    cone = Cone(apex=(0, 0), directions=DirectionSet.empty(8), r_out=2.0)
    assert measure_service.cone_mass(two_points, cone) == 0.0


def test_cone_mass_is_monotone(measure_service, generator_service):
    mu = measure_service.sample(generator_service.cantor4(2), 1 / 128)
    apex = tuple(mu.points[100])
    masses = []
    for halfwidth, r_out in [(0.02, 0.2), (0.02, 0.6), (0.1, 0.6), (0.25, 2.0)]:
        cone = Cone(apex=apex, directions=AngleInterval(center=0.1, halfwidth=halfwidth), r_out=r_out)
        masses.append(measure_service.cone_mass(mu, cone, 0.0))
    assert masses == sorted(masses)
    assert masses[-1] == pytest.approx(mu.total - mu.weights[100], abs=1e-12)


def test_direction_spectrum_of_horizontal_segment(measure_service, unit_segment):
    spectrum = measure_service.direction_spectrum(measure_service.sample(unit_segment), 8)
    assert np.flatnonzero(spectrum.bits).tolist() == [0, 128]


def test_direction_spectrum_of_single_point(measure_service, single_point):
    assert measure_service.direction_spectrum(measure_service.sample(single_point), 8).is_empty()


def test_direction_spectrum_of_two_heights(measure_service):
    planar_set = PlanarSet((Segment(a=(0, 0), b=(1, 0), mass=1.0), Segment(a=(0, 0.5), b=(1, 0.5), mass=1.0)))
    spectrum = measure_service.direction_spectrum(measure_service.sample(planar_set, 1e-2), 8)
    assert spectrum.contains_angle(0.25)
    assert spectrum.contains_angle(0.2)
    assert not spectrum.contains_angle(0.05)


def test_direction_spectrum_is_antipodally_symmetric(measure_service, generator_service):
    spectrum = measure_service.direction_spectrum(measure_service.sample(generator_service.cantor4(2), 1e-2), 8)
    assert np.array_equal(spectrum.bits, np.roll(spectrum.bits, 128))


def test_direction_spectrum_rejects_deep_bitsets(measure_service, unit_segment):
    with pytest.raises(PreconditionViolation):
        measure_service.direction_spectrum(measure_service.sample(unit_segment), 30)


def test_cone_energy_bound_vanishes_on_horizontal_segment(measure_service, unit_segment):
    G = DirectionSet.from_angle_interval(AngleInterval(center=0.0, halfwidth=1 / 16), 8)
    report = measure_service.check_cone_energy_bound(measure_service.sample(unit_segment, 1e-2), G, 2.0)
    assert report.lhs == 0.0
    assert report.rhs == pytest.approx(2.0 * float(G.measure))


def test_cone_energy_bound_on_vertical_segment(measure_service, vertical_segment):
    G = DirectionSet.from_angle_interval(AngleInterval(center=0.0, halfwidth=1 / 16), 8)
    report = measure_service.check_cone_energy_bound(measure_service.sample(vertical_segment, 1e-2), G, 2.0)
    assert math.isfinite(report.lhs)
    assert report.lhs > 1.0
    assert report.ratio == pytest.approx(report.lhs / report.rhs)


def test_cone_energy_bound_with_empty_G(measure_service, unit_segment):
    report = measure_service.check_cone_energy_bound(measure_service.sample(unit_segment, 1e-2), DirectionSet.empty(8), 2.0)
    assert (report.lhs, report.rhs) == (0.0, 0.0)


def test_rectangle_mass_ratio(measure_service, unit_segment):
    mu = measure_service.sample(unit_segment, 1e-3)
    rect = AnisoRect.standard((0.5, 0.0), 0.2, 1 / 8)
    assert measure_service.rectangle_mass(mu, rect) == pytest.approx(0.2, abs=2e-3)
    assert measure_service.rectangle_mass_ratio(mu, rect, 1.0) == pytest.approx(1.0, abs=1e-2)
