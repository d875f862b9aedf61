from dataclasses import dataclass, field

import numpy as np

from core.models import Model
from core.types import FloatArray, IndexArray


@dataclass(frozen=True, kw_only=True, eq=False)
class EnergyReport(Model):
    """
    PURPOSE: Conical energies of every cube of a lattice
    DESCRIPTION: Arrays are indexed by cube id. E_J = E_J_int + E_J_ext up to rounding, since
    both parts are read from the same nodes with complementary direction filters.
    ATTRIBUTES:
        E_G: FloatArray - Energy over G at scales [L(Q)/A, A^3 L(Q)], apices in 2A R_Q
        E_J: FloatArray - Energy over 3J at scales [rho L(Q), L(Q)], apices in Q
        E_J_int: FloatArray - Same with directions 0.5J
        E_J_ext: FloatArray - Same with directions 3J \\ 0.5J
        E_J_ext_tilde: FloatArray - Single-scale variant mu(X(x, 3J \\ 0.5J, rho L, L)) / L
        masses: FloatArray - mu(Q)
        levels: IndexArray - Level of each cube
        A: float - Rectangle dilation constant used
        nodes_per_decade: int - Radial quadrature density used
    """
    E_G: FloatArray
    E_J: FloatArray
    E_J_int: FloatArray
    E_J_ext: FloatArray
    E_J_ext_tilde: FloatArray
    masses: FloatArray
    levels: IndexArray
    A: float
    nodes_per_decade: int

    def __len__(self) -> int:
        return len(self.E_G)


@dataclass(frozen=True, kw_only=True)
class CoronaTree:
    """Tree(R) and BCE(R) of one root R in Top_layer."""
    root: int
    layer: int
    tree: tuple[int, ...]
    bce: tuple[int, ...]


@dataclass(frozen=True, kw_only=True, eq=False)
class CoronaDecomposition(Model):
    """
    PURPOSE: Partition of the lattice into stopping-time trees
    ATTRIBUTES:
        delta: float - Stopping threshold delta
        aspect: float - H(J)
        A: float - Dilation constant of the energies
        trees: tuple[CoronaTree, ...] - Trees in construction order (layer by layer)
        tree_of: IndexArray - Index into trees of the tree holding each cube id
    """
    delta: float
    aspect: float
    A: float
    trees: tuple[CoronaTree, ...]
    tree_of: IndexArray = field(repr=False)

    @property
    def threshold(self) -> float:
        return self.delta * self.aspect

    @property
    def roots(self) -> list[int]:
        return [tree.root for tree in self.trees]

    def is_bce(self) -> np.ndarray:
        flags = np.zeros(len(self.tree_of), dtype=bool)
        for tree in self.trees:
            flags[list(tree.bce)] = True
        return flags


@dataclass(frozen=True, kw_only=True)
class TreeBound:
    root: int
    lhs_small: float
    rhs_small: float
    lhs_lower: float
    rhs_lower: float
    upper_ratio: float


@dataclass(frozen=True, kw_only=True)
class PackingReport:
    sum_top: float
    energy_term: float
    mass_term: float
    bound: float
    ratio: float


@dataclass(frozen=True, kw_only=True)
class RatioReport:
    """A measured inequality lhs <~ rhs whose constant is reported, not asserted."""
    name: str
    lhs: float
    rhs: float
    ratio: float


@dataclass(frozen=True, kw_only=True)
class TrialReport:
    """Sampled (x, r) checks: largest ratio seen and the trials that falsify the bound outright."""
    name: str
    trials: int
    max_ratio: float
    violations: tuple[dict, ...] = ()


@dataclass(frozen=True, kw_only=True)
class OverlapReport:
    """Largest number of overlapping pi_0(R_P) per tree and level; None for skipped trees."""
    max_overlap: int
    per_tree: dict[int, dict[int, int] | None]
    skipped: tuple[int, ...]


@dataclass(frozen=True, kw_only=True)
class IntervalCountReport:
    max_constant: float
    windows: int


def ratio(lhs: float, rhs: float) -> float:
    """lhs / rhs with 0/0 = 0 and x/0 = inf."""
    if rhs > 0:
        return lhs / rhs
    return 0.0 if lhs == 0 else float("inf")
