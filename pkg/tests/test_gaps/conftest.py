import pytest

from gaps.graphs import GraphService
from gaps.services import GapService
from lattice.services import LatticeService
from measures.services import MeasureService


@pytest.fixture
def gap_service(request_container) -> GapService:
    return request_container.get(GapService)


@pytest.fixture
def graph_service(request_container) -> GraphService:
    return request_container.get(GraphService)


@pytest.fixture
def measure_service(request_container) -> MeasureService:
    return request_container.get(MeasureService)


@pytest.fixture
def lattice_service(request_container) -> LatticeService:
    return request_container.get(LatticeService)
