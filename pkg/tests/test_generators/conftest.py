import pytest

from generators.services import GeneratorService
from measures.serializers import PlanarSetSerializer


@pytest.fixture
def generator_service(request_container) -> GeneratorService:
    return request_container.get(GeneratorService)


@pytest.fixture
def set_serializer(request_container) -> PlanarSetSerializer:
    return request_container.get(PlanarSetSerializer)
