from core.errors import ApplicationError
from core.exit_codes import ExitStatus, register_exit_status


class QuadratureUnderresolved(ApplicationError):
    """Raised when a log-radius quadrature has fewer than 16 nodes per decade."""
    def __init__(self, nodes_per_decade: int):
        super().__init__(f"quadrature with {nodes_per_decade} nodes per decade is under-resolved (need >= 16)")
        self.nodes_per_decade = nodes_per_decade


class HypothesisUnverified(ApplicationError):
    """
    PURPOSE: Raised when a density hypothesis cannot be confirmed on the sample
    DESCRIPTION: Mass bounds for rectangles need one direction whose perpendicular pushforward
    has a bounded, non-degenerate histogram. When none of the candidates passes, the bound is
    not checkable and the run fails.
    """
    def __init__(self, hypothesis: str, detail: str):
        super().__init__(f"hypothesis {hypothesis} unverified: {detail}")
        self.hypothesis = hypothesis
        self.detail = detail


register_exit_status(QuadratureUnderresolved, ExitStatus(2, "Quadrature under-resolved", "measures.0001"))
register_exit_status(HypothesisUnverified, ExitStatus(1, "Density hypothesis unverified", "measures.0002"))
