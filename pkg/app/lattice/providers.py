from dishka import Provider, Scope, provide

from lattice.serializers import CubeLineSerializer
from lattice.services import LatticeService


class LatticeProvider(Provider):
    service = provide(LatticeService, scope=Scope.REQUEST)
    cube_serializer = provide(CubeLineSerializer, scope=Scope.APP)
