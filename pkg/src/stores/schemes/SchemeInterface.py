"""Abstract base class for discretization scheme providers"""
from abc import ABC, abstractmethod
from typing import Callable

from numpy.typing import NDArray

from src.models.schemas.mesh import Mesh
from src.models.schemas.solution import DiscreteSolution
from src.stores.schemes.SchemeEnums import SchemeEnum


class SchemeInterface(ABC):
    """
    Abstract base class for schemes solving -div grad u = f, u = 0 on the boundary.

    Every provider returns cell values and edge fluxes oriented along the edge normals,
    so conservation and error norms are computed the same way for all of them.
    """

    scheme: SchemeEnum

    @abstractmethod
    def solve(self, mesh: Mesh, f: Callable[[NDArray, NDArray], NDArray]) -> DiscreteSolution:
        """
        Assemble and solve the discrete problem.

        Args:
            mesh: Triangulation of the domain
            f: Source term evaluated elementwise at arrays of coordinates

        Returns:
            DiscreteSolution with u per cell and p per edge
        """
        pass

    @property
    def closure_label(self) -> str | None:
        return None
