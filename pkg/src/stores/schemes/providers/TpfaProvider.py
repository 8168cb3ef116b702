"""Mass-lumped two-point finite volumes on circumcentric control volumes"""
import time
from typing import Callable

import numpy as np
import scipy.sparse as sps
import scipy.sparse.linalg as spla
from scipy.sparse.csgraph import connected_components

from src.core.quadrature import cell_integrals
from src.models.schemas.mesh import Mesh
from src.models.schemas.solution import DiscreteSolution, SolveStats, TpfaSystem
from src.stores.schemes.SchemeEnums import SchemeEnum
from src.stores.schemes.SchemeInterface import SchemeInterface
from src.utils.errors import NonAdmissibleMeshError, SingularSystemError
from src.utils.logger import get_logger

logger = get_logger(__name__)


def center_distances(mesh: Mesh) -> np.ndarray:
    """Signed distance along n_a between the circumcenters of K and L, or from K's to the edge"""
    cc = mesh.circumcenters
    K, L = mesh.edge_cells[:, 0], mesh.edge_cells[:, 1]
    far = np.where(mesh.is_boundary_edge[:, None], mesh.edge_midpoints, cc[np.maximum(L, 0)])
    return np.einsum("ij,ij->i", far - cc[K], mesh.edge_normals)


def assemble_tpfa(mesh: Mesh, f: Callable, degree: int = 3, tolerance: float = 1e-12) -> TpfaSystem:
    """
    Transmissibilities |a|/d_a and the symmetric system on control volumes.

    Interior edges with |d_a| <= tolerance*|a| join their cells into one control volume
    (two right triangles sharing a hypotenuse share a circumcenter).

    Raises:
        NonAdmissibleMeshError: On the first edge with d_a < -tolerance*|a|, or a boundary
            edge with d_a <= tolerance*|a|
    """
    d = center_distances(mesh)
    length = mesh.edge_lengths
    boundary = mesh.is_boundary_edge
    slack = tolerance * length

    bad = np.flatnonzero((~boundary & (d < -slack)) | (boundary & (d <= slack)))
    if bad.size:
        a = int(bad[0])
        raise NonAdmissibleMeshError(a, float(d[a]))

    merged = ~boundary & (np.abs(d) <= slack)
    F = mesh.num_cells
    K, L = mesh.edge_cells[:, 0], mesh.edge_cells[:, 1]
    join = sps.coo_matrix((np.ones(merged.sum()), (K[merged], L[merged])), shape=(F, F))
    num_groups, groups = connected_components(join, directed=False)

    T = np.zeros(mesh.num_edges)
    active = ~merged
    T[active] = length[active] / d[active]

    gK = groups[K]
    inner = ~boundary & active
    gL = groups[L[inner]]
    gKi = gK[inner]
    Ti = T[inner]
    gKb = gK[boundary]
    rows = np.concatenate([gKi, gL, gKi, gL, gKb])
    cols = np.concatenate([gKi, gL, gL, gKi, gKb])
    vals = np.concatenate([Ti, Ti, -Ti, -Ti, T[boundary]])
    matrix = sps.coo_matrix((vals, (rows, cols)), shape=(num_groups, num_groups)).tocsr()

    integrals = cell_integrals(mesh, f, degree)
    rhs = np.bincount(groups, weights=integrals, minlength=num_groups)
    return TpfaSystem(matrix=matrix, rhs=rhs, groups=groups.astype(np.int64),
                      transmissibility=T, cell_integrals=integrals)


def recover_fluxes(mesh: Mesh, sys: TpfaSystem, u: np.ndarray) -> np.ndarray:
    """Two-point fluxes, then fluxes inside control volumes from the per-cell balances"""
    K, L = mesh.edge_cells[:, 0], mesh.edge_cells[:, 1]
    boundary = mesh.is_boundary_edge
    u_far = np.where(boundary, 0.0, u[np.maximum(L, 0)])
    p = sys.transmissibility * (u_far - u[K])

    internal = ~boundary & (sys.groups[K] == sys.groups[np.maximum(L, 0)])
    if not internal.any():
        return p
    p[internal] = 0.0
    # balance: sum_i sign_i p_i = -integral f per cell
    defect = -sys.cell_integrals - (p[mesh.cell_edges] * mesh.cell_signs).sum(axis=1)
    internal_edges = np.flatnonzero(internal)
    for g in np.unique(sys.groups[K[internal_edges]]):
        cells = np.flatnonzero(sys.groups == g)
        edges = internal_edges[sys.groups[K[internal_edges]] == g]
        local = np.zeros((cells.size, edges.size))
        for j, a in enumerate(edges):
            local[np.searchsorted(cells, K[a]), j] = 1.0
            local[np.searchsorted(cells, L[a]), j] = -1.0
        p[edges], *_ = np.linalg.lstsq(local, defect[cells], rcond=None)
    return p


class TpfaProvider(SchemeInterface):
    """Symmetric M-matrix system solved by sparse LU"""

    scheme = SchemeEnum.TPFA

    def __init__(self, quadrature_degree: int = 3, admissibility_tolerance: float = 1e-12):
        self.quadrature_degree = quadrature_degree
        self.admissibility_tolerance = admissibility_tolerance

    def assemble(self, mesh: Mesh, f: Callable) -> TpfaSystem:
        return assemble_tpfa(mesh, f, self.quadrature_degree, self.admissibility_tolerance)

    def solve(self, mesh: Mesh, f: Callable) -> DiscreteSolution:
        start = time.perf_counter()
        sys = self.assemble(mesh, f)
        ug = spla.spsolve(sys.matrix.tocsc(), sys.rhs)
        ug = np.atleast_1d(ug)
        if not np.all(np.isfinite(ug)):
            raise SingularSystemError("two-point system is singular")
        residual = float(np.linalg.norm(sys.matrix @ ug - sys.rhs))
        u = ug[sys.groups]
        p = recover_fluxes(mesh, sys, u)
        seconds = time.perf_counter() - start
        logger.info(
            f"TPFA solve: F={mesh.num_cells} volumes={sys.num_groups} "
            f"residual={residual:.3e} seconds={seconds:.3f}"
        )
        return DiscreteSolution(u=u, p=p, scheme=self.scheme,
                                stats=SolveStats("direct", 0, residual, seconds))


def solve_tpfa(mesh: Mesh, f: Callable, **options) -> DiscreteSolution:
    """Two-point solve outside the factory; options go to TpfaProvider"""
    return TpfaProvider(**options).solve(mesh, f)
