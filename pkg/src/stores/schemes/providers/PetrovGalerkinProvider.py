"""Petrov-Galerkin finite volumes with six-point fluxes"""
import time
from typing import Callable

import numpy as np
import scipy.sparse as sps
import scipy.sparse.linalg as spla

from src.core.quadrature import cell_integrals
from src.core.rt0 import divergence_matrix
from src.core.stencil import assemble_constraints, flux_weights, solve_stencil
from src.core.topology import edge_neighborhood
from src.models.schemas.mesh import Mesh
from src.models.schemas.solution import DiscreteSolution, PetrovGalerkinSystem, SolveStats
from src.models.schemas.stencil import ClosureRule
from src.stores.schemes.SchemeEnums import SchemeEnum
from src.stores.schemes.SchemeInterface import SchemeInterface
from src.utils.errors import SingularSystemError
from src.utils.logger import get_logger
from src.utils.metrics import STENCIL_COUNT

logger = get_logger(__name__)


def centroid_transmissibility(mesh: Mesh) -> np.ndarray:
    """|a|/d with d the distance along n_a between centroids (or centroid to edge on the boundary)"""
    g = mesh.centroids
    K, L = mesh.edge_cells[:, 0], mesh.edge_cells[:, 1]
    far = np.where(mesh.is_boundary_edge[:, None], mesh.edge_midpoints, g[np.maximum(L, 0)])
    d = np.einsum("ij,ij->i", far - g[K], mesh.edge_normals)
    return mesh.edge_lengths / d


def assemble_petrov_galerkin(
    mesh: Mesh,
    f: Callable,
    closure: ClosureRule | str | None = None,
    degree: int = 3,
    rank_tolerance: float = 1e-10,
) -> PetrovGalerkinSystem:
    """
    Flux operator Phi (E x F) and the cell balance system -B Phi u = integral of f.

    Interior edges with a complete neighborhood use the six-point flux; the other interior
    edges and the boundary edges (ghost value 0) use the two-point flux between centroids.

    Raises:
        RankDeficiencyError: Propagated from the stencil solve of the offending edge
    """
    closure = ClosureRule.parse(closure)
    T = centroid_transmissibility(mesh)
    rows, cols, vals = [], [], []
    stencils = fallbacks = 0

    for a in range(mesh.num_edges):
        K, L = (int(i) for i in mesh.edge_cells[a])
        if L < 0:
            rows.append(a)
            cols.append(K)
            vals.append(-T[a])
            continue
        nb = edge_neighborhood(mesh, a)
        if nb.complete:
            c = solve_stencil(assemble_constraints(mesh, nb), closure, rank_tolerance)
            for name, w in flux_weights(c).items():
                rows.append(a)
                cols.append(getattr(nb, name))
                vals.append(w)
            stencils += 1
        else:
            rows += [a, a]
            cols += [K, L]
            vals += [-T[a], T[a]]
            fallbacks += 1

    flux = sps.coo_matrix((vals, (rows, cols)), shape=(mesh.num_edges, mesh.num_cells)).tocsr()
    matrix = (-(divergence_matrix(mesh) @ flux)).tocsr()
    boundary_t = np.asarray(matrix.sum(axis=1)).ravel()
    STENCIL_COUNT.labels(closure=closure.kind.value).inc(stencils)
    logger.debug(f"Petrov-Galerkin assembly: {stencils} six-point edges, {fallbacks} two-point fallbacks")
    return PetrovGalerkinSystem(
        matrix=matrix,
        rhs=cell_integrals(mesh, f, degree),
        flux=flux,
        boundary_transmissibility=boundary_t,
        stencil_count=stencils,
        fallback_count=fallbacks,
    )


class PetrovGalerkinProvider(SchemeInterface):
    """Nonsymmetric cell system solved by sparse LU or ILU-preconditioned BiCGSTAB"""

    scheme = SchemeEnum.PETROV

    def __init__(
        self,
        closure: ClosureRule | str | None = None,
        solver: str = "direct",
        rtol: float = 1e-12,
        maxiter: int = 5000,
        quadrature_degree: int = 3,
        rank_tolerance: float = 1e-10,
    ):
        self.closure = ClosureRule.parse(closure)
        self.solver = solver
        self.rtol = rtol
        self.maxiter = maxiter
        self.quadrature_degree = quadrature_degree
        self.rank_tolerance = rank_tolerance

    @property
    def closure_label(self) -> str:
        return str(self.closure)

    def assemble(self, mesh: Mesh, f: Callable) -> PetrovGalerkinSystem:
        return assemble_petrov_galerkin(mesh, f, self.closure, self.quadrature_degree, self.rank_tolerance)

    def solve(self, mesh: Mesh, f: Callable) -> DiscreteSolution:
        """
        Raises:
            SingularSystemError: If the cell system has no finite solution
        """
        start = time.perf_counter()
        sys = self.assemble(mesh, f)
        A = sys.matrix.tocsc()
        iterations = 0
        if self.solver == "bicgstab":
            ilu = spla.spilu(A)
            precond = spla.LinearOperator(A.shape, matvec=ilu.solve, dtype=float)

            def count(_):
                nonlocal iterations
                iterations += 1

            u, info = spla.bicgstab(A, sys.rhs, rtol=self.rtol, maxiter=self.maxiter,
                                    M=precond, callback=count)
            if info != 0:
                raise SingularSystemError(f"BiCGSTAB did not converge (info={info})")
            method = "bicgstab-ilu"
        else:
            u = np.atleast_1d(spla.spsolve(A, sys.rhs))
            method = "direct"
        if not np.all(np.isfinite(u)):
            raise SingularSystemError("Petrov-Galerkin cell system is singular")

        residual = float(np.linalg.norm(sys.matrix @ u - sys.rhs))
        p = sys.flux @ u
        seconds = time.perf_counter() - start
        logger.info(
            f"Petrov-Galerkin solve: F={mesh.num_cells} closure={self.closure} "
            f"stencils={sys.stencil_count} fallbacks={sys.fallback_count} "
            f"method={method} residual={residual:.3e} seconds={seconds:.3f}"
        )
        return DiscreteSolution(u=u, p=p, scheme=self.scheme,
                                stats=SolveStats(method, iterations, residual, seconds),
                                closure=str(self.closure))


def solve_petrov_galerkin(
    mesh: Mesh, f: Callable, closure: ClosureRule | str | None = None, **options
) -> DiscreteSolution:
    """Petrov-Galerkin solve outside the factory; options go to PetrovGalerkinProvider"""
    return PetrovGalerkinProvider(closure, **options).solve(mesh, f)
