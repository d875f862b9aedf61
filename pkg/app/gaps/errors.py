from core.errors import ApplicationError
from core.exit_codes import ExitStatus, register_exit_status


class NotAGraph(ApplicationError):
    """
    PURPOSE: Raised when a union of parallel segments is not a graph over the chosen line
    ATTRIBUTES:
        first: tuple[float, float] - One sample point of the violating pair
        second: tuple[float, float] - The other one, with (almost) the same perpendicular projection
    """
    def __init__(self, first: tuple[float, float], second: tuple[float, float]):
        super().__init__(f"points {first} and {second} share their projection onto the base line")
        self.first = first
        self.second = second


register_exit_status(NotAGraph, ExitStatus(1, "Set is not a graph", "gaps.0001"))
