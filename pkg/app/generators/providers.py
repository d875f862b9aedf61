from dishka import Provider, Scope, provide

from generators.services import GeneratorService


class GeneratorsProvider(Provider):
    service = provide(GeneratorService, scope=Scope.REQUEST)
