from dishka import Provider, Scope, provide

from verification.services import VerificationService


class VerificationProvider(Provider):
    service = provide(VerificationService, scope=Scope.REQUEST)
