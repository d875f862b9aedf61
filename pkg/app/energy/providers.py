from dishka import Provider, Scope, provide

from energy.checks import EnergyChecks
from energy.corona import CoronaService
from energy.serializers import EnergyCsvSerializer
from energy.services import EnergyService


class EnergyProvider(Provider):
    """
    PURPOSE: Dishka provider for energies, corona and checkers
    DESCRIPTION: All services share the request scope, so the energy memo tables are reused by
    the corona builder and the checkers of one command and dropped afterwards.
    """
    service = provide(EnergyService, scope=Scope.REQUEST)
    corona = provide(CoronaService, scope=Scope.REQUEST)
    checks = provide(EnergyChecks, scope=Scope.REQUEST)
    csv_serializer = provide(EnergyCsvSerializer, scope=Scope.APP)
