import math
import os.path

from pydantic import field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """
    PURPOSE: Numeric configuration of every favlab computation
    DESCRIPTION: Pydantic settings class that loads parameters from FAVLAB_-prefixed environment
    variables and from a key=value run file. Holds resolution, quadrature, lattice, stopping-time
    and tolerance parameters; the constants the theory leaves unspecified are exposed here
    and echoed into every artifact.
    ATTRIBUTES:
        THREADS: int - Worker threads for embarrassingly parallel loops
        LOG_LEVEL: str - Logging level name
        SAMPLE_SPACING: float - Sampling resolution h of discrete measures
        N_ANGLES: int - Midpoint nodes of the Favard quadrature
        QUAD_NODES_PER_DECADE: int - Log-midpoint nodes per decade of radius
        MAX_DEPTH: int - Bitset depth D of direction sets
        EPSILON_C: float - Constant c in epsilon = c / (C0 * M)
        C1: float - Constant c1 in the cap H(J) <= c1 / (C0 * M)
        RHO: float - Lattice ratio rho
        DELTA: float - Stopping threshold delta
        A_CONSTANT: float - Constant C in A = C * C0 * M
        A_FLOOR: float - Lower bound on A; desk-scale runs lower it
        C_OVERLAP: int - Allowed projection overlap count
        C_LIP: float - Lipschitz tolerance constant of the segment corollary
        N_CONSTANT: float - Constant C' in N = ceil(C' * M * C0)
        M: float - Density bound of the perpendicular pushforwards
        C0: float - Ahlfors-David regularity constant
        BIN_WIDTH: float - Histogram bin width of pushforward densities
        TRIALS: int - Random (x, r) trials of the sampling checkers
        SEED: int - Seed of every random draw
        RESOLUTION_FACTOR: float - Gap-lemma asserts run only where h <= l(Q) / (factor * A)
        TRIVIAL_BOUND_CONSTANT: float - Constant of the asserted trivial energy bound
        EPSILON: float | None - Explicit epsilon overriding EPSILON_C
        A: float | None - Explicit A overriding A_CONSTANT and A_FLOOR
        N: int | None - Explicit strip count overriding N_CONSTANT
    """
    model_config = SettingsConfigDict(
        env_prefix="FAVLAB_",
        env_file=f"{os.path.dirname(__file__)}/../../.env",
        extra="ignore",
    )

    THREADS: int = 1
    LOG_LEVEL: str = "INFO"

    SAMPLE_SPACING: float = 1e-3
    N_ANGLES: int = 4096
    QUAD_NODES_PER_DECADE: int = 16
    MAX_DEPTH: int = 16

    EPSILON_C: float = 1 / 64
    C1: float = 1 / 64
    RHO: float = 0.5
    DELTA: float = 1 / 32
    A_CONSTANT: float = 4.0
    A_FLOOR: float = 1000.0
    C_OVERLAP: int = 8
    C_LIP: float = 4.0
    N_CONSTANT: float = 4.0
    M: float = 2.0
    C0: float = 2.0

    BIN_WIDTH: float = 1e-2
    TRIALS: int = 256
    SEED: int = 0
    RESOLUTION_FACTOR: float = 64.0
    TRIVIAL_BOUND_CONSTANT: float = 10.0

    EPSILON: float | None = None
    A: float | None = None
    N: int | None = None

    @field_validator("EPSILON")
    @classmethod
    def _epsilon_in_unit_interval(cls, value: float | None) -> float | None:
        if value is not None and not 0 < value < 1:
            raise ValueError("epsilon must lie in (0, 1)")
        return value

    @field_validator("LOG_LEVEL")
    @classmethod
    def _known_level(cls, value: str) -> str:
        if value.upper() not in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"):
            raise ValueError(f"unknown log level {value!r}")
        return value.upper()

    @field_validator("RHO")
    @classmethod
    def _rho_in_range(cls, value: float) -> float:
        if not 0 < value <= 0.5:
            raise ValueError("rho must lie in (0, 1/2]")
        return value

    @field_validator("SAMPLE_SPACING", "BIN_WIDTH", "M", "C0", "A_CONSTANT", "A_FLOOR", "N_CONSTANT")
    @classmethod
    def _positive(cls, value: float) -> float:
        if value <= 0:
            raise ValueError("must be positive")
        return value

    @field_validator("THREADS", "N_ANGLES", "MAX_DEPTH", "TRIALS", "C_OVERLAP")
    @classmethod
    def _positive_count(cls, value: int) -> int:
        if value < 1:
            raise ValueError("must be at least 1")
        return value

    @property
    def epsilon(self) -> float:
        """
        PURPOSE: Effective epsilon of the enlargement construction
        RETURNS: float - EPSILON when set, otherwise EPSILON_C / (C0 * M)
        """
        if self.EPSILON is not None:
            return self.EPSILON
        return self.EPSILON_C / (self.C0 * self.M)

    @property
    def a_effective(self) -> float:
        """
        PURPOSE: Effective rectangle dilation constant A
        RETURNS: float - A when set, otherwise max(A_FLOOR, A_CONSTANT * C0 * M)
        """
        if self.A is not None:
            return self.A
        return max(self.A_FLOOR, self.A_CONSTANT * self.C0 * self.M)

    @property
    def n_strips(self) -> int:
        """
        PURPOSE: Effective half-count N of the leftist strip stack
        RETURNS: int - N when set, otherwise ceil(N_CONSTANT * M * C0)
        """
        if self.N is not None:
            return self.N
        return math.ceil(self.N_CONSTANT * self.M * self.C0)

    @property
    def aspect_cap(self) -> float:
        return self.C1 / (self.C0 * self.M)

    def echo(self) -> list[str]:
        """
        PURPOSE: Render every parameter as a sorted key=value line
        DESCRIPTION: Used as the reproducibility header of CSV and JSON artifacts. Derived values
        (effective epsilon, A, N and the cap on H(J)) are appended so a reader never has to recompute them.
        RETURNS: list[str] - Sorted "key=value" lines
        """
        values = self.model_dump()
        values["EFFECTIVE_EPSILON"] = self.epsilon
        values["EFFECTIVE_A"] = self.a_effective
        values["EFFECTIVE_N"] = self.n_strips
        values["ASPECT_CAP"] = self.aspect_cap
        return [f"{key}={values[key]!r}" if isinstance(values[key], float) else f"{key}={values[key]}"
                for key in sorted(values)]


settings = Settings()  # noqa
