"""Discrete systems and solutions produced by the scheme providers"""
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import scipy.sparse as sps
from numpy.typing import NDArray

from src.stores.schemes.SchemeEnums import SchemeEnum


@dataclass(frozen=True)
class SolveStats:
    method: str
    iterations: int = 0
    residual: float = 0.0
    seconds: float = 0.0

    @property
    def iterative(self) -> bool:
        return self.method in ("schur-cg", "bicgstab-ilu")


@dataclass(frozen=True, eq=False)
class DiscreteSolution:
    """Cell values u (one per cell) and normal fluxes p (one per edge, along n_a)"""
    u: NDArray[np.float64]
    p: NDArray[np.float64]
    scheme: Optional[SchemeEnum]
    stats: SolveStats = field(default_factory=lambda: SolveStats("exact"))
    closure: Optional[str] = None


@dataclass(frozen=True, eq=False)
class SaddleSystem:
    """[[M, B^T], [B, 0]] [p; u] = [0; rhs_f] with rhs_f = -integral of f per cell"""
    M: sps.csr_matrix
    B: sps.csr_matrix
    rhs_f: NDArray[np.float64]


@dataclass(frozen=True, eq=False)
class TpfaSystem:
    """Two-point system on control volumes (groups of cells joined across zero-distance edges)"""
    matrix: sps.csr_matrix
    rhs: NDArray[np.float64]
    groups: NDArray[np.int64]              # (F,) control volume of each cell
    transmissibility: NDArray[np.float64]  # (E,) zero on edges inside a control volume
    cell_integrals: NDArray[np.float64]    # (F,) integral of f per cell

    @property
    def num_groups(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True, eq=False)
class PetrovGalerkinSystem:
    """-B Phi u = integral of f, where Phi maps cell values to edge fluxes"""
    matrix: sps.csr_matrix
    rhs: NDArray[np.float64]
    flux: sps.csr_matrix
    boundary_transmissibility: NDArray[np.float64]   # (F,) row sums of matrix
    stencil_count: int
    fallback_count: int
