"""Discrete inf-sup constant of the Galerkin RT0 x P0 pair"""
import numpy as np
import scipy.linalg as sla

from src.core.rt0 import divergence_matrix, mass_matrix
from src.models.schemas.mesh import Mesh
from src.utils.errors import SizeLimitError

DEFAULT_MAX_SIZE = 2000


def structured_size(n: int) -> int:
    """E + F of build_structured(n): 3n^2 + 2n edges and 2n^2 cells"""
    return 5 * n * n + 2 * n


def check_size(size: int, max_size: int = DEFAULT_MAX_SIZE) -> None:
    if size > max_size:
        raise SizeLimitError(f"inf-sup estimate needs E+F <= {max_size}, mesh has {size}")


def infsup_matrices(mesh: Mesh) -> tuple[np.ndarray, np.ndarray]:
    """
    Dense form matrix G = [[M, B^T], [B, 0]] of (p, q) + (u, div q) + (div p, v) and the
    norm matrix X = diag(M + B^T |K|^-1 B, |K|) of ||q||^2 + ||div q||^2 + ||v||^2.
    """
    M = mass_matrix(mesh).toarray()
    B = divergence_matrix(mesh).toarray()
    F = mesh.num_cells
    G = np.block([[M, B.T], [B, np.zeros((F, F))]])
    X = sla.block_diag(M + B.T @ (B / mesh.areas[:, None]), np.diag(mesh.areas))
    return G, X


def estimate_infsup(mesh: Mesh, max_size: int = DEFAULT_MAX_SIZE) -> float:
    """
    Smallest generalized singular value of G with respect to X. G is symmetric, so this is
    the smallest |lambda| of G z = lambda X z.

    Raises:
        SizeLimitError: If E + F exceeds max_size
    """
    check_size(mesh.num_edges + mesh.num_cells, max_size)
    G, X = infsup_matrices(mesh)
    eigenvalues = sla.eigh(G, X, eigvals_only=True)
    return float(np.min(np.abs(eigenvalues)))
