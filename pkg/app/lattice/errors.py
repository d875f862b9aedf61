from core.errors import InvalidInputError


class AspectError(InvalidInputError):
    def __init__(self, aspect: float):
        super().__init__("aspect", f"H(J) = {aspect} outside (0, 1]")
        self.aspect = aspect


class EmptySample(InvalidInputError):
    def __init__(self):
        super().__init__("sample", "a lattice needs at least one sample point")
