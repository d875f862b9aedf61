import pytest

from directions.models import DirectionSet
from energy.checks import EnergyChecks
from energy.corona import CoronaService
from energy.models import EnergyReport
from energy.serializers import EnergyCsvSerializer
from energy.services import EnergyService
from generators.services import GeneratorService
from geometry.models import AngleInterval
from lattice.models import CubeLattice
from lattice.services import LatticeService
from measures.models import DiscreteMeasure
from measures.services import MeasureService
from tests.test_energy.reports import A, ASPECT


@pytest.fixture
def energy_service(request_container) -> EnergyService:
    return request_container.get(EnergyService)


@pytest.fixture
def energy_checks(request_container) -> EnergyChecks:
    return request_container.get(EnergyChecks)


@pytest.fixture
def corona_service(request_container) -> CoronaService:
    return request_container.get(CoronaService)


@pytest.fixture
def csv_serializer(request_container) -> EnergyCsvSerializer:
    return request_container.get(EnergyCsvSerializer)


@pytest.fixture
def J() -> AngleInterval:
    return AngleInterval(center=0.25, halfwidth=1 / 16)


@pytest.fixture
def G(J) -> DirectionSet:
    return DirectionSet.from_angle_interval(J, 8)


@pytest.fixture
def mu(request_container) -> DiscreteMeasure:
    planar_set = request_container.get(GeneratorService).cantor4(2)
    return request_container.get(MeasureService).sample(planar_set, 1 / 64)


@pytest.fixture
def lattice(request_container, mu) -> CubeLattice:
    return request_container.get(LatticeService).build_lattice(mu, ASPECT, 3)


@pytest.fixture
def report(energy_service, lattice, mu, G, J) -> EnergyReport:
    return energy_service.compute_report(lattice, mu, G, J, A)
