"""Error taxonomy shared by the kernels, the CLI and the HTTP routes.

Usage errors (bad input files, unknown names, oversized requests) map to exit code 1 and
HTTP 422; numerical failures map to exit code 2 and HTTP 500.
"""
from typing import Optional


class DualFluxError(Exception):
    """Base class for all library errors"""
    exit_code: int = 2


class UsageError(DualFluxError, ValueError):
    exit_code = 1


class NumericalError(DualFluxError):
    exit_code = 2


class MeshParseError(UsageError):
    def __init__(self, message: str, line: Optional[int] = None, source: str = "mesh"):
        self.line = line
        self.source = source
        where = f"{source} line {line}: " if line is not None else f"{source}: "
        super().__init__(where + message)


class UnknownCaseError(UsageError):
    pass


class InvalidClosureError(UsageError):
    pass


class SizeLimitError(UsageError):
    pass


class TopologyError(NumericalError):
    pass


class DegenerateTriangleError(TopologyError):
    pass


class BoundaryEdgeError(NumericalError):
    def __init__(self, edge: int):
        self.edge = edge
        super().__init__(f"edge {edge} is a boundary edge")


class IncompleteNeighborhoodError(NumericalError):
    def __init__(self, edge: int):
        self.edge = edge
        super().__init__(f"edge {edge} has an incomplete six-triangle neighborhood")


class RankDeficiencyError(NumericalError):
    def __init__(self, edge: int, ratio: float):
        self.edge = edge
        self.ratio = ratio
        super().__init__(
            f"flux constraint system of edge {edge} is rank deficient "
            f"(sigma_min/sigma_max = {ratio:.3e})"
        )


class NonAdmissibleMeshError(NumericalError):
    def __init__(self, edge: int, distance: float):
        self.edge = edge
        self.distance = distance
        super().__init__(
            f"mesh is not admissible for two-point fluxes: edge {edge} has center distance {distance:.3e}"
        )


class SingularSystemError(NumericalError):
    pass


class ConvergenceLevelError(NumericalError):
    def __init__(self, n: int, cause: Exception):
        self.n = n
        self.cause = cause
        super().__init__(f"level n={n} failed: {cause}")
        self.exit_code = getattr(cause, "exit_code", 2)
