import pytest

from core.settings import Settings
from main import make_favlab_container


@pytest.fixture
def settings_overrides() -> dict:
    return {}


@pytest.fixture
def settings(settings_overrides) -> Settings:
    return Settings(**settings_overrides)


@pytest.fixture
def container(settings):
    container = make_favlab_container(settings)
    yield container
    container.close()


@pytest.fixture
def request_container(container):
    with container() as request_container:
        yield request_container
