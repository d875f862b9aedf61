from dishka import Provider, Scope, provide

from core.settings import Settings
from measures.serializers import DiscreteMeasureSerializer, PlanarSetSerializer
from measures.services import MeasureService


class MeasuresProvider(Provider):
    service = provide(MeasureService, scope=Scope.REQUEST)
    set_serializer = provide(PlanarSetSerializer, scope=Scope.APP)

    @provide(scope=Scope.APP)
    def measure_serializer(self, settings: Settings) -> DiscreteMeasureSerializer:
        return DiscreteMeasureSerializer(default_spacing=settings.SAMPLE_SPACING)
