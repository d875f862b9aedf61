import numpy as np

from energy.models import EnergyReport
from lattice.models import CubeLattice

ASPECT = 1 / 8
A = 10.0


def synthetic_report(lattice: CubeLattice, E_G: np.ndarray, **overrides) -> EnergyReport:
    zeros = np.zeros(len(lattice.cubes))
    values = dict(E_G=E_G, E_J=zeros, E_J_int=zeros, E_J_ext=zeros, E_J_ext_tilde=zeros,
                  masses=np.array([cube.mass for cube in lattice.cubes]),
                  levels=np.array([cube.level for cube in lattice.cubes], dtype=np.intp), A=A, nodes_per_decade=16)
    values.update(overrides)
    return EnergyReport(**values)
