import pytest

from core.serializer import Serializer
from core.types import DTO
from energy.models import CoronaTree


@pytest.fixture
def tree_serializer(request_container) -> Serializer[CoronaTree, DTO]:
    return request_container.get(Serializer[CoronaTree, DTO])


@pytest.fixture
def trees(trees_number) -> list[CoronaTree]:
    return [CoronaTree(root=i, layer=0, tree=(i, 10 + i), bce=(10 + i,)) for i in range(trees_number)]


@pytest.fixture
def trees_dto(trees_number) -> list[DTO]:
    return [{'root': i, 'layer': 1, 'tree': [i], 'bce': []} for i in range(trees_number)]
