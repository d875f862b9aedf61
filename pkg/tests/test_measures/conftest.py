import pytest

from generators.services import GeneratorService
from measures.models import PlanarSet, Segment
from measures.serializers import DiscreteMeasureSerializer, PlanarSetSerializer
from measures.services import MeasureService


@pytest.fixture
def measure_service(request_container) -> MeasureService:
    return request_container.get(MeasureService)


@pytest.fixture
def generator_service(request_container) -> GeneratorService:
    return request_container.get(GeneratorService)


@pytest.fixture
def set_serializer(request_container) -> PlanarSetSerializer:
    return request_container.get(PlanarSetSerializer)


@pytest.fixture
def measure_serializer(request_container) -> DiscreteMeasureSerializer:
    return request_container.get(DiscreteMeasureSerializer)


@pytest.fixture
def unit_segment() -> PlanarSet:
    return PlanarSet((Segment(a=(0, 0), b=(1, 0), mass=1.0),))


@pytest.fixture
def vertical_segment() -> PlanarSet:
    return PlanarSet((Segment(a=(0, 0), b=(0, 1), mass=1.0),))


@pytest.fixture
def single_point() -> PlanarSet:
    return PlanarSet((Segment(a=(0.5, 0.5), b=(0.5, 0.5), mass=1.0),))
