from core.serializer import csv_text
from energy.models import CoronaDecomposition, EnergyReport

ENERGY_COLUMNS = ("cube", "level", "mass", "E_G", "E_J", "E_J_int", "E_J_ext", "E_J_ext_tilde", "tree", "is_bce")


class EnergyCsvSerializer:
    """Per-cube energy rows with the tree root and BCE flag of the corona, if one is given."""
    def serialize(self, report: EnergyReport, corona: CoronaDecomposition | None = None,
                  echo: tuple[str, ...] = ()) -> str:
        bce = corona.is_bce() if corona is not None else None
        rows = []
        for cube in range(len(report)):
            tree = corona.trees[corona.tree_of[cube]].root if corona is not None else ""
            rows.append((cube, int(report.levels[cube]), float(report.masses[cube]), float(report.E_G[cube]),
                         float(report.E_J[cube]), float(report.E_J_int[cube]), float(report.E_J_ext[cube]),
                         float(report.E_J_ext_tilde[cube]), tree, int(bce[cube]) if bce is not None else ""))
        return csv_text(ENERGY_COLUMNS, rows, echo)
