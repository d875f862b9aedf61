import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator

import numpy as np

from core.models import Model
from core.types import BoolArray, FloatArray
from directions.errors import DepthExhausted
from geometry.models import AngleInterval, angle_distance


@dataclass(frozen=True, order=True)
class DyadicInterval(Model):
    """
    PURPOSE: Half-open dyadic interval [j 2^-k, (j + 1) 2^-k) on T
    ATTRIBUTES:
        depth: int - Generation k >= 0
        index: int - Position j in [0, 2^k)
    """
    depth: int
    index: int

    def __post_init__(self):
        if self.depth < 0 or not 0 <= self.index < 2 ** self.depth:
            raise DyadicInterval.InvalidError(f"index {self.index} outside [0, 2^{self.depth})")

    @property
    def start(self) -> Fraction:
        return Fraction(self.index, 2 ** self.depth)

    @property
    def end(self) -> Fraction:
        return Fraction(self.index + 1, 2 ** self.depth)

    @property
    def measure(self) -> Fraction:
        return Fraction(1, 2 ** self.depth)

    @property
    def parent(self) -> "DyadicInterval":
        if self.depth == 0:
            raise DyadicInterval.InvalidError("the full circle has no parent")
        return DyadicInterval(self.depth - 1, self.index // 2)

    @property
    def sibling(self) -> "DyadicInterval":
        if self.depth == 0:
            raise DyadicInterval.InvalidError("the full circle has no sibling")
        return DyadicInterval(self.depth, self.index ^ 1)

    def children(self) -> tuple["DyadicInterval", "DyadicInterval"]:
        return DyadicInterval(self.depth + 1, 2 * self.index), DyadicInterval(self.depth + 1, 2 * self.index + 1)

    def contains(self, other: "DyadicInterval") -> bool:
        """Dyadic containment: other is self or one of its descendants."""
        if other.depth < self.depth:
            return False
        return other.index >> (other.depth - self.depth) == self.index

    def cells(self, depth: int) -> range:
        """Indices of the depth-D cells that tile this interval."""
        if self.depth > depth:
            raise DepthExhausted(self.depth, depth)
        scale = 2 ** (depth - self.depth)
        return range(self.index * scale, (self.index + 1) * scale)

    def as_angle_interval(self) -> AngleInterval:
        half = float(self.measure) / 2
        return AngleInterval(center=float(self.start) + half, halfwidth=min(half, 0.25))

    def json(self) -> dict[str, int]:
        return {"depth": self.depth, "index": self.index}


@dataclass(frozen=True, eq=False)
class DirectionSet(Model):
    """
    PURPOSE: Finite union of depth-D dyadic cells on T, stored as a bitset
    DESCRIPTION: Immutable set of directions. Measures are exact Fractions popcount / 2^D.
    As a cone direction filter a set accepts a line when the cell of its direction, or of the
    opposite direction, is set; the apex belongs to the cone iff the set is nonempty.
    ATTRIBUTES:
        depth: int - Bitset depth D
        bits: BoolArray - 2^D flags, read-only
    """
    depth: int
    bits: BoolArray = field(repr=False)

    def __post_init__(self):
        bits = np.asarray(self.bits, dtype=bool).copy()
        if self.depth < 0 or bits.shape != (2 ** self.depth,):
            raise DirectionSet.InvalidError(f"expected {2 ** self.depth} flags at depth {self.depth}")
        bits.setflags(write=False)
        object.__setattr__(self, "bits", bits)

    @classmethod
    def empty(cls, depth: int) -> "DirectionSet":
        return cls(depth, np.zeros(2 ** depth, dtype=bool))

    @classmethod
    def full(cls, depth: int) -> "DirectionSet":
        return cls(depth, np.ones(2 ** depth, dtype=bool))

    @classmethod
    def from_intervals(cls, intervals: Iterable[DyadicInterval], depth: int) -> "DirectionSet":
        bits = np.zeros(2 ** depth, dtype=bool)
        for interval in intervals:
            cells = interval.cells(depth)
            bits[cells.start:cells.stop] = True
        return cls(depth, bits)

    @classmethod
    def from_angle_interval(cls, interval: AngleInterval, depth: int) -> "DirectionSet":
        """Cells whose midpoint lies in the closed interval."""
        size = 2 ** depth
        midpoints = (np.arange(size) + 0.5) / size
        diff = np.abs(midpoints - interval.center)
        distance = np.minimum(diff, 1.0 - diff)
        return cls(depth, distance <= interval.halfwidth + 1e-12)

    @property
    def size(self) -> int:
        return 2 ** self.depth

    @property
    def count(self) -> int:
        return int(np.count_nonzero(self.bits))

    @property
    def measure(self) -> Fraction:
        return Fraction(self.count, self.size)

    @property
    def key(self) -> tuple[int, bytes]:
        return self.depth, np.packbits(self.bits).tobytes()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DirectionSet):
            return NotImplemented
        return self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def is_empty(self) -> bool:
        return not self.bits.any()

    def _check(self, other: "DirectionSet"):
        if other.depth != self.depth:
            raise DirectionSet.InvalidError(f"depth mismatch {self.depth} != {other.depth}")

    def union(self, other: "DirectionSet") -> "DirectionSet":
        self._check(other)
        return DirectionSet(self.depth, self.bits | other.bits)

    def intersection(self, other: "DirectionSet") -> "DirectionSet":
        self._check(other)
        return DirectionSet(self.depth, self.bits & other.bits)

    def difference(self, other: "DirectionSet") -> "DirectionSet":
        self._check(other)
        return DirectionSet(self.depth, self.bits & ~other.bits)

    def complement(self) -> "DirectionSet":
        return DirectionSet(self.depth, ~self.bits)

    def is_subset(self, other: "DirectionSet") -> bool:
        self._check(other)
        return not (self.bits & ~other.bits).any()

    def rotate_quarter(self) -> "DirectionSet":
        """G + 1/4: shifts every cell by 2^D / 4; needs D >= 2."""
        if self.depth < 2:
            raise DepthExhausted(2, self.depth)
        return DirectionSet(self.depth, np.roll(self.bits, self.size // 4))

    def count_in(self, interval: DyadicInterval) -> int:
        cells = interval.cells(self.depth)
        return int(np.count_nonzero(self.bits[cells.start:cells.stop]))

    def restrict(self, interval: DyadicInterval) -> "DirectionSet":
        return self.intersection(DirectionSet.from_intervals([interval], self.depth))

    def contains_angle(self, theta: float) -> bool:
        cell = int(math.floor((theta % 1.0) * self.size)) % self.size
        return bool(self.bits[cell])

    def cell_of(self, theta: FloatArray) -> np.ndarray:
        return np.floor(np.mod(theta, 1.0) * self.size).astype(np.int64) % self.size

    def line_mask(self, dx: FloatArray, dy: FloatArray) -> BoolArray:
        phi = np.arctan2(dy, dx) / (2 * np.pi)
        cell = self.cell_of(phi)
        opposite = (cell + self.size // 2) % self.size if self.depth >= 1 else cell
        mask = self.bits[cell] | self.bits[opposite]
        apex = (dx == 0) & (dy == 0)
        if apex.any():
            mask = np.where(apex, self.bits.any(), mask)
        return mask

    def runs(self) -> list[tuple[int, int]]:
        """
        PURPOSE: Maximal runs of set cells
        DESCRIPTION: Runs are returned as (first cell, length) with wrap-around across 0 merged.
        RETURNS: list[tuple[int, int]] - Runs sorted by first cell
        """
        if self.is_empty():
            return []
        if self.bits.all():
            return [(0, self.size)]
        start = int(np.flatnonzero(~self.bits)[0])
        rolled = np.roll(self.bits, -start)
        runs = []
        position = 0
        for is_set, group in _groups(rolled):
            if is_set:
                runs.append(((position + start) % self.size, group))
            position += group
        return sorted(runs)

    def run_intervals(self) -> list[AngleInterval]:
        """The maximal runs as closed angle intervals (half-widths clamped to 1/4)."""
        return [AngleInterval(center=(first + length / 2) / self.size, halfwidth=min(length / (2 * self.size), 0.25))
                for first, length in self.runs()]

    def nearest_member(self, theta: float) -> float | None:
        """Midpoint of the set cell closest to theta, or None for the empty set."""
        if self.is_empty():
            return None
        midpoints = (np.flatnonzero(self.bits) + 0.5) / self.size
        distances = [angle_distance(float(m), theta) for m in midpoints]
        return float(midpoints[int(np.argmin(distances))])


def _groups(bits: BoolArray) -> Iterator[tuple[bool, int]]:
    edges = np.flatnonzero(np.diff(bits.astype(np.int8))) + 1
    bounds = np.concatenate([[0], edges, [len(bits)]])
    for lo, hi in zip(bounds[:-1], bounds[1:]):
        yield bool(bits[lo]), int(hi - lo)


@dataclass(frozen=True, kw_only=True)
class EnlargementTrace(Model):
    """
    PURPOSE: Full record of one enlargement step G -> G*
    ATTRIBUTES:
        J: DyadicInterval - Ambient dyadic interval
        epsilon: float - Density parameter
        G_in: DirectionSet - Input set, contained in J
        I_family: tuple[DyadicInterval, ...] - Maximal dyadic I inside J with H(I n G) >= (1 - eps) H(I)
        I_star: tuple[DyadicInterval, ...] - Maximal parents of the I_family members
        G_out: DirectionSet - Union of I_star
        B_delta_in: tuple[DyadicInterval, ...] - Maximal dyadic intervals in J \\ G_in
        B_delta_out: tuple[DyadicInterval, ...] - Maximal dyadic intervals in J \\ G_out
    """
    J: DyadicInterval
    epsilon: float
    G_in: DirectionSet
    I_family: tuple[DyadicInterval, ...]
    I_star: tuple[DyadicInterval, ...]
    G_out: DirectionSet
    B_delta_in: tuple[DyadicInterval, ...]
    B_delta_out: tuple[DyadicInterval, ...]

    @property
    def growth(self) -> Fraction:
        if self.G_in.measure == 0:
            return Fraction(0)
        return self.G_out.measure / self.G_in.measure


@dataclass(frozen=True, kw_only=True)
class IterationResult(Model):
    """
    PURPOSE: Outcome of the iterated enlargement
    ATTRIBUTES:
        traces: tuple[EnlargementTrace, ...] - One trace per application
        k0: int - Number of applications
        bound: int - Closed-form bound on k0
        G_final: DirectionSet - Last direction set
    """
    traces: tuple[EnlargementTrace, ...]
    k0: int
    bound: int
    G_final: DirectionSet
