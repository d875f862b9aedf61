from core.errors import ApplicationError
from core.exit_codes import ExitStatus, register_exit_status


class DepthExhausted(ApplicationError):
    """
    PURPOSE: Raised when an interval or direction set cannot be resolved at the bitset depth
    ATTRIBUTES:
        depth: int - Requested depth
        max_depth: int - Depth of the bitset
    """
    def __init__(self, depth: int, max_depth: int):
        super().__init__(f"dyadic depth {depth} exceeds bitset depth {max_depth}")
        self.depth = depth
        self.max_depth = max_depth


DEPTH_EXHAUSTED = ExitStatus(1, "Direction set not resolvable at bitset depth", "directions.0001")
register_exit_status(DepthExhausted, DEPTH_EXHAUSTED)
