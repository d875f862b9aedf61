import math
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from core.models import Model
from core.types import IndexArray, Point
from geometry.models import AnisoRect


def k_top(aspect: float, rho: float) -> int:
    """
    PURPOSE: Top lattice level k(J)
    RETURNS: int - The largest integer k with 4 rho^k / aspect >= 1
    """
    k = math.floor(math.log(aspect / 4) / math.log(rho))
    while 4 * rho ** (k + 1) / aspect >= 1:
        k += 1
    while 4 * rho ** k / aspect < 1:
        k -= 1
    return k


@dataclass(frozen=True, kw_only=True, eq=False)
class DyadicCube(Model):
    """
    PURPOSE: One generalized dyadic cube Q of the anisotropic lattice
    ATTRIBUTES:
        level: int - Generation k
        id: int - Global id, level-major
        center: Point - Centre x_Q, a sample point
        center_index: int - Sample index of x_Q
        members: IndexArray - Sorted sample indices of Q
        parent: int | None - Id of the parent cube; None on the top level
        children: tuple[int, ...] - Ids of the children
        side: float - l(Q) = 4 rho^k
        tall: float - L(Q) = l(Q) / H(J)
        mass: float - mu(Q)
    """
    level: int
    id: int
    center: Point
    center_index: int
    members: IndexArray = field(repr=False)
    parent: int | None
    children: tuple[int, ...]
    side: float
    tall: float
    mass: float

    @property
    def rect(self) -> AnisoRect:
        """R_Q = R(x_Q, l(Q)), long side vertical."""
        return AnisoRect(center=self.center, short=self.side, long=self.tall)

    @property
    def inner_rect(self) -> AnisoRect:
        """R(Q) = 0.1 R_Q."""
        return self.rect.dilate(0.1)

    def json(self) -> dict:
        return {"level": self.level, "id": self.id, "center": list(self.center), "parent": self.parent,
                "children": list(self.children), "mass": self.mass}


@dataclass(frozen=True, eq=False)
class CubeLattice(Model):
    """
    PURPOSE: Nested partitions D_k, k = top .. top + depth - 1, of a sample
    DESCRIPTION: cubes are indexed by id; assignment[j, i] is the id of the level-(top + j) cube
    containing sample point i.
    """
    aspect: float
    rho: float
    top_level: int
    cubes: tuple[DyadicCube, ...] = field(repr=False)
    levels: tuple[tuple[int, ...], ...] = field(repr=False)
    assignment: np.ndarray = field(repr=False)

    @property
    def depth(self) -> int:
        return len(self.levels)

    @property
    def bottom_level(self) -> int:
        return self.top_level + self.depth - 1

    def level(self, k: int) -> list[DyadicCube]:
        return [self.cubes[cube_id] for cube_id in self.levels[k - self.top_level]]

    def cube(self, cube_id: int) -> DyadicCube:
        if not 0 <= cube_id < len(self.cubes):
            raise DyadicCube.NotFoundError(f"id {cube_id}")
        return self.cubes[cube_id]

    def cube_of(self, point: int, k: int) -> DyadicCube:
        return self.cubes[int(self.assignment[k - self.top_level, point])]

    def descendants(self, cube_id: int) -> Iterator[DyadicCube]:
        """Q itself and every cube below it, coarse to fine."""
        frontier = [cube_id]
        while frontier:
            yield from (self.cubes[i] for i in frontier)
            frontier = [child for i in frontier for child in self.cubes[i].children]

    def ancestors(self, cube_id: int) -> Iterator[DyadicCube]:
        """Strict ancestors of a cube, nearest first."""
        parent = self.cubes[cube_id].parent
        while parent is not None:
            yield self.cubes[parent]
            parent = self.cubes[parent].parent


@dataclass(frozen=True, kw_only=True)
class LatticeInvariants:
    """Achieved constants of B(x_Q, c_in rho^k) n sample c Q c B(x_Q, C_out rho^k)."""
    partition: bool
    nesting: bool
    c_in: float
    C_out: float
    levels: int
    cubes: int
