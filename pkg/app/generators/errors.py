from core.errors import InvalidInputError


class OverlapError(InvalidInputError):
    """Raised when two generated segments intersect."""
    def __init__(self, first: int, second: int):
        super().__init__("parallel_segments", f"segments {first} and {second} intersect")
        self.first = first
        self.second = second
