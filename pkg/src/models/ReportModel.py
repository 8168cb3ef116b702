"""Report data model: convergence JSON and the solution / stencil CSV tables"""
from pathlib import Path

import numpy as np
from pydantic import BaseModel

from src.models.schemas.mesh import Mesh
from src.models.schemas.report import ConvergenceReport
from src.models.schemas.solution import DiscreteSolution
from src.models.schemas.stencil import StencilCoefficients
from .BaseDataModel import BaseDataModel

FLOAT = "%.17g"
STENCIL_COLUMNS = ("edge_id", "eta", "alpha", "beta", "gamma", "delta", "residual_35", "residual_36", "nullspace_dim")


def flux_table_path(path: str | Path) -> Path:
    """sol.csv -> sol_fluxes.csv"""
    path = Path(path)
    return path.with_name(f"{path.stem}_fluxes{path.suffix or '.csv'}")


class ReportModel(BaseDataModel):

    def __init__(self, root_dir: str | Path | None = None):
        super().__init__(root_dir=root_dir)

    @classmethod
    def create_instance(cls, root_dir: str | Path | None = None) -> "ReportModel":
        return cls(root_dir=root_dir)

    def write_json(self, model: BaseModel, path: str | Path) -> Path:
        path = self.resolve(path)
        path.write_text(model.model_dump_json(indent=2))
        return path

    def read_report(self, path: str | Path) -> ConvergenceReport:
        return ConvergenceReport.model_validate_json(Path(path).read_text())

    def write_solution(self, mesh: Mesh, sol: DiscreteSolution, path: str | Path) -> tuple[Path, Path]:
        """
        Write cell rows (cell_id, cx, cy, u) to path and edge rows (edge_id, flux) next to it.

        cx, cy are cell centroids; flux is the normal flux along n_a (from K to L).
        """
        cells_path = self.resolve(path)
        fluxes_path = self.resolve(flux_table_path(path))
        F, E = mesh.num_cells, mesh.num_edges
        cells = np.column_stack([np.arange(F), mesh.centroids, sol.u])
        np.savetxt(cells_path, cells, fmt=["%d", FLOAT, FLOAT, FLOAT], delimiter=",",
                   header="cell_id,cx,cy,u", comments="")
        edges = np.column_stack([np.arange(E), sol.p])
        np.savetxt(fluxes_path, edges, fmt=["%d", FLOAT], delimiter=",",
                   header="edge_id,flux", comments="")
        return cells_path, fluxes_path

    def write_stencils(self, rows: list[tuple[int, StencilCoefficients]], path: str | Path) -> Path:
        path = self.resolve(path)
        table = np.array(
            [[a, *c.as_array(), c.residual_first, c.residual_second, c.nullspace_dim] for a, c in rows]
        ).reshape(-1, len(STENCIL_COLUMNS))
        np.savetxt(path, table, fmt=["%d"] + [FLOAT] * 7 + ["%d"], delimiter=",",
                   header=",".join(STENCIL_COLUMNS),
                   comments="")
        return path