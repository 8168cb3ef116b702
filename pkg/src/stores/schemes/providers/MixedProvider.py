"""Classical RT0 x P0 mixed finite elements"""
import time
from typing import Callable

import numpy as np
import scipy.sparse as sps
import scipy.sparse.linalg as spla
from numpy.typing import NDArray

from src.core.quadrature import cell_integrals
from src.core.rt0 import divergence_matrix, mass_matrix
from src.models.schemas.mesh import Mesh
from src.models.schemas.solution import DiscreteSolution, SaddleSystem, SolveStats
from src.stores.schemes.SchemeEnums import SchemeEnum
from src.stores.schemes.SchemeInterface import SchemeInterface
from src.utils.errors import SingularSystemError
from src.utils.logger import get_logger

logger = get_logger(__name__)


def assemble_mixed(mesh: Mesh, f: Callable, degree: int = 3) -> SaddleSystem:
    """Mass block, divergence block and -integral of f per cell. Dirichlet data u = 0 is natural."""
    return SaddleSystem(
        M=mass_matrix(mesh),
        B=divergence_matrix(mesh),
        rhs_f=-cell_integrals(mesh, f, degree),
    )


def saddle_matrix(sys: SaddleSystem) -> sps.csc_matrix:
    return sps.bmat([[sys.M, sys.B.T], [sys.B, None]], format="csc")


def mixed_residuals(sys: SaddleSystem, sol: DiscreteSolution) -> tuple[float, float]:
    """Max-norm residuals of M p + B^T u = 0 and B p = rhs_f, each row being one basis test"""
    r_p = sys.M @ sol.p + sys.B.T @ sol.u
    r_u = sys.B @ sol.p - sys.rhs_f
    return float(np.abs(r_p).max(initial=0.0)), float(np.abs(r_u).max(initial=0.0))


def recover_momentum(sys: SaddleSystem, u: NDArray) -> NDArray[np.float64]:
    """Fluxes from cell values: M p = -B^T u"""
    return spla.spsolve(sys.M.tocsc(), -(sys.B.T @ np.asarray(u, dtype=float)))


class MixedProvider(SchemeInterface):
    """Saddle-point solve by sparse LU, or Schur complement conjugate gradients on B M^-1 B^T"""

    scheme = SchemeEnum.MIXED

    def __init__(
        self,
        solver: str = "direct",
        rtol: float = 1e-12,
        maxiter: int = 5000,
        quadrature_degree: int = 3,
    ):
        self.solver = solver
        self.rtol = rtol
        self.maxiter = maxiter
        self.quadrature_degree = quadrature_degree

    def assemble(self, mesh: Mesh, f: Callable) -> SaddleSystem:
        return assemble_mixed(mesh, f, self.quadrature_degree)

    def solve_saddle(self, sys: SaddleSystem) -> DiscreteSolution:
        """
        Solve the block system; the Schur path is also the fallback of a failed direct solve.

        Raises:
            SingularSystemError: If neither strategy yields a finite solution
        """
        start = time.perf_counter()
        if self.solver == "direct":
            try:
                sol = self._solve_direct(sys)
                return self._with_time(sol, start)
            except (RuntimeError, SingularSystemError) as e:
                logger.warning(f"Direct saddle solve failed ({e}); falling back to Schur complement CG")
        return self._with_time(self._solve_schur(sys), start)

    def solve(self, mesh: Mesh, f: Callable) -> DiscreteSolution:
        sys = self.assemble(mesh, f)
        sol = self.solve_saddle(sys)
        logger.info(
            f"Mixed solve: E={mesh.num_edges} F={mesh.num_cells} method={sol.stats.method} "
            f"residual={sol.stats.residual:.3e} seconds={sol.stats.seconds:.3f}"
        )
        return sol

    def _solve_direct(self, sys: SaddleSystem) -> DiscreteSolution:
        E = sys.M.shape[0]
        rhs = np.concatenate([np.zeros(E), sys.rhs_f])
        K = saddle_matrix(sys)
        x = spla.spsolve(K, rhs)
        if not np.all(np.isfinite(x)):
            raise SingularSystemError("saddle-point matrix is singular")
        residual = float(np.linalg.norm(K @ x - rhs))
        return DiscreteSolution(
            u=x[E:], p=x[:E], scheme=self.scheme,
            stats=SolveStats("direct", 0, residual),
        )

    def _solve_schur(self, sys: SaddleSystem) -> DiscreteSolution:
        lu = spla.splu(sys.M.tocsc())
        B, BT = sys.B, sys.B.T.tocsr()
        F = B.shape[0]
        schur = spla.LinearOperator((F, F), matvec=lambda v: B @ lu.solve(BT @ v), dtype=float)

        iterations = 0

        def count(_):
            nonlocal iterations
            iterations += 1

        u, info = spla.cg(schur, -sys.rhs_f, rtol=self.rtol, maxiter=self.maxiter, callback=count)
        if info != 0 or not np.all(np.isfinite(u)):
            raise SingularSystemError(f"Schur complement CG did not converge (info={info})")
        p = lu.solve(-(BT @ u))
        r_p, r_u = mixed_residuals(sys, DiscreteSolution(u, p, self.scheme))
        return DiscreteSolution(
            u=u, p=p, scheme=self.scheme,
            stats=SolveStats("schur-cg", iterations, float(np.hypot(r_p, r_u))),
        )

    @staticmethod
    def _with_time(sol: DiscreteSolution, start: float) -> DiscreteSolution:
        stats = SolveStats(sol.stats.method, sol.stats.iterations, sol.stats.residual,
                           time.perf_counter() - start)
        return DiscreteSolution(sol.u, sol.p, sol.scheme, stats, sol.closure)
