import enum
from core.compat import StrEnum
from dataclasses import dataclass

from core.models import Model


class GeneratorKind(StrEnum):
    CANTOR4 = "cantor4"
    PARALLEL_SEGMENTS = "parallel_segments"
    LIPSCHITZ_GRAPH = "lipschitz_graph"
    CIRCLE = "circle"
    FROM_FILE = "from_file"


@dataclass(frozen=True, kw_only=True)
class GeneratorSpec(Model):
    """
    PURPOSE: Parameters of one deterministic set generator
    DESCRIPTION: Only the fields of the selected kind are read: n for cantor4 (iteration) and
    circle (edge count); direction, offsets, lengths and starts for parallel_segments; lip,
    n_nodes and seed for lipschitz_graph; path for from_file.
    """
    kind: GeneratorKind
    n: int = 1
    direction: float = 0.0
    offsets: tuple[float, ...] = ()
    lengths: tuple[float, ...] = ()
    starts: tuple[float, ...] = ()
    lip: float = 1.0
    n_nodes: int = 16
    seed: int = 0
    path: str | None = None

    def __post_init__(self):
        try:
            object.__setattr__(self, "kind", GeneratorKind(self.kind))
        except ValueError:
            raise GeneratorSpec.InvalidError(f"unknown generator kind {self.kind!r}")
        for name in ("offsets", "lengths", "starts"):
            object.__setattr__(self, name, tuple(float(value) for value in getattr(self, name)))
