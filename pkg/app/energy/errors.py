from core.errors import ApplicationError
from core.exit_codes import ExitStatus, register_exit_status


class WitnessMissing(ApplicationError):
    """
    PURPOSE: Raised when a gap of J \\ G has no verified density direction in its triple
    ATTRIBUTES:
        gap: tuple[float, float] - Bounds of the gap interval in turns
    """
    def __init__(self, gap: tuple[float, float]):
        super().__init__(f"no density witness in 3I for gap I = [{gap[0]:.6g}, {gap[1]:.6g}]")
        self.gap = gap


register_exit_status(WitnessMissing, ExitStatus(1, "Density witness missing", "energy.0001"))
