from dishka import Provider, Scope, provide

from gaps.graphs import GraphService
from gaps.services import GapService


class GapsProvider(Provider):
    service = provide(GapService, scope=Scope.REQUEST)
    graphs = provide(GraphService, scope=Scope.REQUEST)
