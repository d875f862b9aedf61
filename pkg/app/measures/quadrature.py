import math

import numpy as np

from core.types import FloatArray
from measures.errors import QuadratureUnderresolved
from measures.models import QuadratureParams


class LogQuadrature:
    """
    PURPOSE: Midpoint rule in log r for integrals of the form int_a^b f(r) dr/r
    DESCRIPTION: Splits [ln a, ln b] into n equal cells with n = max(min_nodes,
    ceil(nodes_per_decade * log10(b / a))) and evaluates f at the geometric cell midpoints.
    Every node carries the same weight ln(b / a) / n.
    ATTRIBUTES:
        params: QuadratureParams - Node density settings
    """
    def __init__(self, params: QuadratureParams):
        if params.nodes_per_decade < 16:
            raise QuadratureUnderresolved(params.nodes_per_decade)
        self.params = params

    @classmethod
    def with_density(cls, nodes_per_decade: int) -> "LogQuadrature":
        return cls(QuadratureParams(nodes_per_decade=nodes_per_decade))

    def refined(self, factor: int = 2) -> "LogQuadrature":
        return LogQuadrature.with_density(self.params.nodes_per_decade * factor)

    def node_count(self, a: float, b: float) -> int:
        if not b > a:
            return 0
        return max(self.params.min_nodes, math.ceil(self.params.nodes_per_decade * math.log10(b / a)))

    def nodes(self, a: float, b: float) -> tuple[FloatArray, float]:
        """
        PURPOSE: Radii and common weight of the rule on [a, b]
        ARGUMENTS:
            a: float - Lower radius, positive
            b: float - Upper radius
        RETURNS: tuple[FloatArray, float] - Radii (empty when b <= a) and the weight per node
        """
        n = self.node_count(a, b)
        if n == 0:
            return np.empty(0), 0.0
        ratio = math.log(b / a)
        radii = a * np.exp(ratio * (np.arange(n) + 0.5) / n)
        return radii, ratio / n
