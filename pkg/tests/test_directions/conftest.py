import pytest

from directions.serializers import DirectionSetSerializer, DyadicGapsSerializer
from directions.services import DirectionService


@pytest.fixture
def direction_service(request_container) -> DirectionService:
    return request_container.get(DirectionService)


@pytest.fixture
def set_serializer(request_container) -> DirectionSetSerializer:
    return request_container.get(DirectionSetSerializer)


@pytest.fixture
def gaps_serializer(request_container) -> DyadicGapsSerializer:
    return request_container.get(DyadicGapsSerializer)
