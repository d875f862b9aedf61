from dishka import Provider, Scope, provide

from directions.serializers import DirectionSetSerializer, DyadicGapsSerializer
from directions.services import DirectionService


class DirectionsProvider(Provider):
    """
    PURPOSE: Dishka provider for the direction-set layer
    ATTRIBUTES:
        service: DirectionService - REQUEST scope
        set_serializer: DirectionSetSerializer - APP scope
        gaps_serializer: DyadicGapsSerializer - APP scope
    """
    service = provide(DirectionService, scope=Scope.REQUEST)
    set_serializer = provide(DirectionSetSerializer, scope=Scope.APP)
    gaps_serializer = provide(DyadicGapsSerializer, scope=Scope.APP)
