"""Stencil controller: per-edge constraint solves, export and momenta diagnostics"""
import numpy as np

from src.controllers.BaseController import BaseController
from src.core.stencil import (
    SIDES,
    eta1_from_K,
    eta1_from_L,
    eta2_pair,
    neighborhood_frame,
    side_momenta,
    stencil_table,
)
from src.core.topology import edge_neighborhood
from src.models.ReportModel import ReportModel
from src.models.schemas.mesh import Mesh
from src.models.schemas.stencil import ClosureRule, StencilCoefficients
from src.utils.config import Config
from src.utils.logger import get_logger
from src.utils.metrics import STENCIL_COUNT

logger = get_logger(__name__)


class StencilController(BaseController):
    """Controller for six-point stencils on a mesh"""

    def __init__(self, settings: Config | None = None):
        super().__init__(settings)
        self.report_model = ReportModel.create_instance()

    def closure(self, closure: "str | ClosureRule | None" = None) -> ClosureRule:
        return ClosureRule.parse(closure or self.app_settings.default_closure)

    def table(self, mesh: Mesh, closure: "str | ClosureRule | None" = None) -> list[tuple[int, StencilCoefficients]]:
        rule = self.closure(closure)
        rows = stencil_table(mesh, rule, self.app_settings.rank_tolerance)
        STENCIL_COUNT.labels(closure=rule.kind.value).inc(len(rows))
        logger.info(f"Solved {len(rows)} stencils ({rule}) on {mesh.num_edges} edges")
        return rows

    def export(self, rows: list[tuple[int, StencilCoefficients]], path: str) -> str:
        return str(self.report_model.write_stencils(rows, path))

    def momenta_discrepancies(self, mesh: Mesh, rows: list[tuple[int, StencilCoefficients]]) -> dict[str, float]:
        """
        Largest relative gaps between the two evaluations of each flux momentum over the rows:
        eta1 from L vs from K, eta2 and eta2-tilde from L vs from K, and the endpoint
        identity of the side momenta.
        """
        worst = {"eta1": 0.0, "eta2": 0.0, "eta2tilde": 0.0, "sides": 0.0}
        for a, c in rows:
            frame = neighborhood_frame(mesh, edge_neighborhood(mesh, a))
            s = frame.length
            size = float(np.abs(c.as_array()).sum()) or 1.0

            gap1 = abs(eta1_from_L(c, frame) - eta1_from_K(c, frame)) / (s * size)
            pair = eta2_pair(c, frame)
            gap2 = abs(pair.eta2_L - pair.eta2_K) / (s * s * size)
            gap2t = abs(pair.eta2tilde_L - pair.eta2tilde_K) / (s * s * size)

            gap_sides = 0.0
            for name, m in side_momenta(c, frame).items():
                u, v = SIDES[name][:2]
                length = float(np.linalg.norm(frame.point(v) - frame.point(u)))
                coef = getattr(c, name)
                identity = length ** 2 * coef - 2.0 * length * m.first + m.second
                gap_sides = max(gap_sides, abs(identity - m.second_tilde) / (s * s * size))

            worst["eta1"] = max(worst["eta1"], gap1)
            worst["eta2"] = max(worst["eta2"], gap2)
            worst["eta2tilde"] = max(worst["eta2tilde"], gap2t)
            worst["sides"] = max(worst["sides"], gap_sides)
        return worst
