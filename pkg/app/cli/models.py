import enum
from core.compat import StrEnum
from pathlib import Path
from typing import Any

from pydantic import field_validator

from core.errors import InvalidInputError, NotFoundError
from core.settings import Settings
from directions.models import DyadicInterval
from generators.models import GeneratorKind, GeneratorSpec
from geometry.models import AngleInterval


class DirectionSource(StrEnum):
    INTERVAL = "interval"
    SPECTRUM = "spectrum"
    FILE = "file"


class RunConfig(Settings):
    """
    PURPOSE: Settings of one CLI run
    DESCRIPTION: Extends the numeric settings with the input set, the window J, the source of the
    good directions G and the output directory. Values come from a key=value run file, overridden
    by command-line flags; FAVLAB_-prefixed environment variables fill the remaining fields.
    ATTRIBUTES:
        GENERATOR: GeneratorKind - Generator of the input set
        GENERATOR_N: int - cantor4 iteration or circle edge count
        SEGMENT_DIRECTION: float - Common direction of parallel_segments
        SEGMENT_OFFSETS, SEGMENT_LENGTHS, SEGMENT_STARTS: tuple[float, ...] - parallel_segments layout
        LIP: float - Slope bound of lipschitz_graph
        N_NODES: int - Node count of lipschitz_graph
        SET_PATH: str | None - PlanarSet JSON of from_file
        J_CENTER, J_HALFWIDTH: float - Window J in turns
        G_SOURCE: DirectionSource - interval (G = J cells), spectrum (directions the sample avoids)
            or file (a direction set line)
        G_PATH: str | None - Direction set file of G_SOURCE=file
        G_DEPTH: int - Bitset depth of G
        LATTICE_DEPTH: int - Levels of the cube lattice below the top level
        J0_DEPTH, J0_INDEX: int - Dyadic interval of iterate-directions
        S: float | None - Lower bound s of iterate-directions; 4 H(G0) / H(J0) when omitted
        OUT_DIR: str - Output directory
    """
    GENERATOR: GeneratorKind = GeneratorKind.CANTOR4
    GENERATOR_N: int = 2
    SEGMENT_DIRECTION: float = 0.0
    SEGMENT_OFFSETS: tuple[float, ...] = ()
    SEGMENT_LENGTHS: tuple[float, ...] = ()
    SEGMENT_STARTS: tuple[float, ...] = ()
    LIP: float = 1.0
    N_NODES: int = 16
    SET_PATH: str | None = None

    J_CENTER: float = 0.25
    J_HALFWIDTH: float = 1 / 16
    G_SOURCE: DirectionSource = DirectionSource.INTERVAL
    G_PATH: str | None = None
    G_DEPTH: int = 12

    LATTICE_DEPTH: int = 4
    J0_DEPTH: int = 2
    J0_INDEX: int = 1
    S: float | None = None

    OUT_DIR: str = "out"

    @field_validator("SEGMENT_OFFSETS", "SEGMENT_LENGTHS", "SEGMENT_STARTS", mode="before")
    @classmethod
    def _split_floats(cls, value: Any) -> Any:
        if isinstance(value, str):
            return tuple(float(item) for item in value.split(",") if item.strip())
        return value

    @field_validator("J_HALFWIDTH")
    @classmethod
    def _halfwidth_in_range(cls, value: float) -> float:
        if not 0 < value <= 0.25:
            raise ValueError("J halfwidth must lie in (0, 1/4]")
        return value

    @field_validator("G_DEPTH", "J0_DEPTH")
    @classmethod
    def _depth_in_range(cls, value: int) -> int:
        if not 0 <= value <= 24:
            raise ValueError("depth must lie in [0, 24]")
        return value

    @classmethod
    def load(cls, path: str | Path | None = None, **overrides: Any) -> "RunConfig":
        """
        PURPOSE: Build a run configuration from a key=value file and flag overrides
        DESCRIPTION: Blank lines and lines starting with # are skipped; keys are case-insensitive.
        Overrides whose value is None are dropped, so unset flags keep the file value.
        CONTRACTS:
            RAISES:
                - NotFoundError - when the file does not exist
                - InvalidInputError - when a line has no "="
                - pydantic.ValidationError - when a value fails validation
        """
        values: dict[str, Any] = {}
        if path is not None:
            try:
                text = Path(path).read_text()
            except FileNotFoundError:
                raise NotFoundError(f"config file {path}")
            for number, line in enumerate(text.splitlines(), start=1):
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                if "=" not in line:
                    raise InvalidInputError(f"config file {path}",
                                            f"line {number}: expected key=value, got {line!r}")
                key, value = line.split("=", 1)
                values[key.strip().upper()] = value.strip()
        values.update({key.upper(): value for key, value in overrides.items() if value is not None})
        return cls(**values)

    @property
    def J(self) -> AngleInterval:
        return AngleInterval(center=self.J_CENTER, halfwidth=self.J_HALFWIDTH)

    @property
    def J0(self) -> DyadicInterval:
        return DyadicInterval(self.J0_DEPTH, self.J0_INDEX)

    def generator_spec(self) -> GeneratorSpec:
        return GeneratorSpec(kind=self.GENERATOR, n=self.GENERATOR_N, direction=self.SEGMENT_DIRECTION,
                             offsets=self.SEGMENT_OFFSETS, lengths=self.SEGMENT_LENGTHS, starts=self.SEGMENT_STARTS,
                             lip=self.LIP, n_nodes=self.N_NODES, seed=self.SEED, path=self.SET_PATH)
