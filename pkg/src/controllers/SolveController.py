"""Solve controller: runs one scheme on one mesh and measures the result"""
import time

import numpy as np

from src.controllers.BaseController import BaseController
from src.core.norms import cell_value_error, conservation_residuals, conservation_tolerance, error_norms
from src.models.ReportModel import ReportModel
from src.models.schemas.cases import ManufacturedCase, mms_case
from src.models.schemas.mesh import Mesh
from src.models.schemas.report import SolveSummary
from src.models.schemas.solution import DiscreteSolution
from src.models.schemas.stencil import ClosureRule
from src.stores.schemes.SchemeEnums import CaseEnum, SchemeEnum
from src.stores.schemes.SchemeInterface import SchemeInterface
from src.stores.schemes.SchemeProviderFactory import SchemeProviderFactory
from src.utils.config import Config
from src.utils.errors import DualFluxError
from src.utils.logger import get_logger
from src.utils.metrics import SOLVE_COUNT, SOLVE_LATENCY

logger = get_logger(__name__)


class SolveController(BaseController):
    """Controller for single discrete solves"""

    def __init__(self, settings: Config | None = None):
        super().__init__(settings)
        self.factory = SchemeProviderFactory(self.app_settings)
        self.report_model = ReportModel.create_instance()

    def provider(self, scheme: "str | SchemeEnum", closure: "str | ClosureRule | None" = None) -> SchemeInterface:
        return self.factory.create(scheme, closure)

    def run(self, mesh: Mesh, provider: SchemeInterface, case: ManufacturedCase) -> DiscreteSolution:
        """Solve with metrics bookkeeping; errors are counted and re-raised"""
        label = provider.scheme.value
        start = time.perf_counter()
        try:
            sol = provider.solve(mesh, case.f)
        except DualFluxError:
            SOLVE_COUNT.labels(scheme=label, status="error").inc()
            raise
        SOLVE_LATENCY.labels(scheme=label).observe(time.perf_counter() - start)
        SOLVE_COUNT.labels(scheme=label, status="ok").inc()
        return sol

    def conservation(self, mesh: Mesh, sol: DiscreteSolution, case: ManufacturedCase) -> tuple[float, bool]:
        """Largest cell balance defect and whether every cell meets its tolerance"""
        defects = np.abs(conservation_residuals(mesh, sol, case.f, self.app_settings.rhs_quadrature_degree))
        tolerance = conservation_tolerance(mesh, case.f, sol.stats.iterative,
                                           self.app_settings.error_quadrature_degree)
        bad = int(np.count_nonzero(defects > tolerance))
        if bad:
            logger.warning(f"Conservation defect above tolerance on {bad} cell(s), worst {defects.max():.3e}")
        return float(defects.max(initial=0.0)), bad == 0

    def solve(
        self,
        mesh: Mesh,
        scheme: "str | SchemeEnum",
        case: "str | CaseEnum" = CaseEnum.SINSIN,
        closure: "str | ClosureRule | None" = None,
    ) -> tuple[DiscreteSolution, SolveSummary]:
        """
        Solve one manufactured problem and measure its errors.

        Returns:
            The discrete solution and a summary with errors and solver statistics
        """
        problem = mms_case(case)
        provider = self.provider(scheme, closure)
        sol = self.run(mesh, provider, problem)
        norms = error_norms(mesh, sol, problem, self.app_settings.error_quadrature_degree)
        centers = mesh.circumcenters if provider.scheme == SchemeEnum.TPFA else mesh.centroids
        residual, _ = self.conservation(mesh, sol, problem)
        summary = SolveSummary(
            scheme=provider.scheme.value,
            case=problem.name.value,
            closure=provider.closure_label,
            num_cells=mesh.num_cells,
            num_edges=mesh.num_edges,
            h=mesh.mesh_size,
            e_u=norms.e_u, e_p=norms.e_p, e_div=norms.e_div, e_V=norms.e_V,
            e_cell=cell_value_error(mesh, sol, problem, centers),
            conservation=residual,
            method=sol.stats.method,
            iterations=sol.stats.iterations,
            residual=sol.stats.residual,
            seconds=sol.stats.seconds,
        )
        return sol, summary

    def write_solution(self, mesh: Mesh, sol: DiscreteSolution, path: str):
        cells_path, fluxes_path = self.report_model.write_solution(mesh, sol, path)
        logger.info(f"Wrote {cells_path} and {fluxes_path}")
        return cells_path, fluxes_path
