# Domain schemas: mesh complex, stencils, discrete solutions and reports
from src.models.schemas.mesh import Mesh, EdgeNeighborhood, EdgeRecord, CellRecord, NO_CELL

__all__ = ["Mesh", "EdgeNeighborhood", "EdgeRecord", "CellRecord", "NO_CELL"]
