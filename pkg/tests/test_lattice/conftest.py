import pytest

from generators.services import GeneratorService
from lattice.serializers import CubeLineSerializer
from lattice.services import LatticeService
from measures.models import DiscreteMeasure, PlanarSet, Segment
from measures.services import MeasureService


@pytest.fixture
def lattice_service(request_container) -> LatticeService:
    return request_container.get(LatticeService)


@pytest.fixture
def measure_service(request_container) -> MeasureService:
    return request_container.get(MeasureService)


@pytest.fixture
def cube_serializer(request_container) -> CubeLineSerializer:
    return request_container.get(CubeLineSerializer)


@pytest.fixture
def cantor_set(request_container) -> PlanarSet:
    return request_container.get(GeneratorService).cantor4(2)


@pytest.fixture
def cantor_sample(measure_service, cantor_set) -> DiscreteMeasure:
    return measure_service.sample(cantor_set, 1 / 128)


@pytest.fixture
def cantor_lattice(lattice_service, cantor_sample):
    return lattice_service.build_lattice(cantor_sample, 1 / 8, 4)


@pytest.fixture
def unit_segment() -> PlanarSet:
    return PlanarSet((Segment(a=(0, 0), b=(1, 0), mass=1.0),))
