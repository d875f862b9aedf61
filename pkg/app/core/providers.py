from typing import TypeVar

from dishka import Provider, Scope, from_context, provide

from core.serializer import DataclassSerializer, Serializer
from core.settings import Settings
from core.types import DTO

T = TypeVar("T")


class DataclassSerializerProvider(Provider):
    """Serializer[T, DTO] for any dataclass record T, e.g. the corona trees written by the CLI."""
    @provide(scope=Scope.APP)
    def serializer(self, model: type[T]) -> Serializer[T, DTO]:
        return DataclassSerializer(model)


class SettingsProvider(Provider):
    """
    PURPOSE: Provides the run settings to every service
    DESCRIPTION: The Settings instance is passed as container context, so a command can build
    its own settings from a config file and flags before the container is made.
    """
    settings = from_context(provides=Settings, scope=Scope.APP)
