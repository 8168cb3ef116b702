"""Mesh controller: structured generation, file loading, neighborhoods and validation"""
from typing import Optional

from src.controllers.BaseController import BaseController
from src.core.geometry import quality_theta
from src.core.topology import build_structured, validate_mesh
from src.models.MeshModel import MeshModel
from src.models.schemas.mesh import Mesh
from src.stores.schemes.SchemeEnums import SplitEnum
from src.utils.config import Config
from src.utils.errors import UsageError
from src.utils.logger import get_logger

logger = get_logger(__name__)


class MeshController(BaseController):
    """Controller for building, loading and checking triangulations"""

    def __init__(self, settings: Config | None = None):
        """Initialize MeshController"""
        super().__init__(settings)
        self.mesh_model = MeshModel.create_instance()

    def build_structured(self, n: int, split: "str | SplitEnum | None" = None) -> Mesh:
        """
        Triangulate the unit square with an n x n grid of split squares.

        Args:
            n: Squares per side (>= 1)
            split: "diagonal" or "antidiagonal" (default from settings)

        Raises:
            UsageError: If n < 1 or the split is unknown
        """
        if n < 1:
            raise UsageError(f"n must be a positive integer, got {n}")
        try:
            split = SplitEnum(split or self.app_settings.default_split)
        except ValueError:
            raise UsageError(f"unknown split '{split}'") from None
        mesh = build_structured(n, split)
        logger.debug(f"Structured mesh n={n} split={split.value}: V={mesh.num_vertices} "
                     f"E={mesh.num_edges} F={mesh.num_cells}")
        return mesh

    def read(self, node_path: str, ele_path: str) -> Mesh:
        mesh = self.mesh_model.read_mesh_files(node_path, ele_path)
        logger.info(f"Loaded mesh {node_path}: V={mesh.num_vertices} E={mesh.num_edges} F={mesh.num_cells}")
        return mesh

    def write(self, mesh: Mesh, node_path: str, ele_path: str) -> None:
        self.mesh_model.write_mesh_files(mesh, node_path, ele_path)

    def resolve(self, n: Optional[int] = None, mesh_files: Optional[str] = None,
                split: "str | SplitEnum | None" = None) -> Mesh:
        """
        Mesh from exactly one of a structured size or a "node,ele" file pair.

        Raises:
            UsageError: If both or neither are given, or the pair is malformed
        """
        if (n is None) == (mesh_files is None):
            raise UsageError("give exactly one of --n and --mesh")
        if n is not None:
            return self.build_structured(n, split)
        parts = [p.strip() for p in mesh_files.split(",")]
        if len(parts) != 2 or not all(parts):
            raise UsageError(f"--mesh expects '<node>,<ele>', got '{mesh_files}'")
        return self.read(*parts)

    def validate(self, mesh: Mesh) -> list[str]:
        report = validate_mesh(mesh)
        if report:
            logger.warning(f"Mesh validation found {len(report)} violation(s)")
        else:
            logger.info(f"Mesh valid: V={mesh.num_vertices} E={mesh.num_edges} F={mesh.num_cells} "
                        f"theta={quality_theta(mesh):.4f}")
        return report
