"""Harness controller: convergence studies, rate fits and the inf-sup diagnostic"""
from pathlib import Path
from typing import Iterable, Optional

import numpy as np

from src.controllers.BaseController import BaseController
from src.controllers.MeshController import MeshController
from src.controllers.SolveController import SolveController
from src.core.infsup import check_size, estimate_infsup, structured_size
from src.core.norms import fit_rate
from src.models.ReportModel import ReportModel
from src.models.schemas.cases import mms_case
from src.models.schemas.mesh import Mesh
from src.models.schemas.report import ConvergenceReport, LevelRecord, RateRecord
from src.models.schemas.stencil import ClosureRule
from src.stores.schemes.SchemeEnums import CaseEnum, SchemeEnum, SplitEnum
from src.utils.config import Config
from src.utils.errors import ConvergenceLevelError, DualFluxError, UsageError
from src.utils.logger import get_logger

logger = get_logger(__name__)

METRICS = ("e_u", "e_p", "e_div", "e_V", "e_cell")
MIN_LEVELS = 3


def check_levels(levels: Iterable[int]) -> list[int]:
    """
    Raises:
        UsageError: Unless levels are at least three strictly ascending positive integers
    """
    levels = [int(n) for n in levels]
    if len(levels) < MIN_LEVELS:
        raise UsageError(f"a convergence study needs at least {MIN_LEVELS} levels, got {len(levels)}")
    if levels[0] < 1 or any(b <= a for a, b in zip(levels, levels[1:])):
        raise UsageError(f"levels must be strictly ascending positive integers, got {levels}")
    return levels


def fit_rates(records: list[LevelRecord]) -> tuple[RateRecord, list[str]]:
    """
    Least-squares rate of every error metric over the levels. A metric that grows from the
    coarsest to the next level is fitted without the coarsest level and flagged; growth
    further down is only flagged.
    """
    h = np.array([r.h for r in records])
    rates, flags = {}, []
    for metric in METRICS:
        errors = np.array([getattr(r, metric) for r in records])
        start = 0
        if errors[1] > errors[0]:
            flags.append(f"{metric}: non-monotone at coarsest level n={records[0].n}, excluded from rate fit")
            start = 1
        for prev, cur, record in zip(errors[start + 1:], errors[start + 2:], records[start + 2:]):
            if cur > prev:
                flags.append(f"{metric}: non-monotone at level n={record.n}")
        rates[metric] = fit_rate(h[start:], errors[start:])
    return RateRecord(**rates), flags


class HarnessController(BaseController):
    """Controller running manufactured-solution studies on structured meshes"""

    def __init__(self, settings: Config | None = None):
        super().__init__(settings)
        self.mesh_controller = MeshController(self.app_settings)
        self.solve_controller = SolveController(self.app_settings)
        self.report_model = ReportModel.create_instance()

    def run_level(self, n: int, scheme, case, closure, split) -> LevelRecord:
        mesh = self.mesh_controller.build_structured(n, split)
        try:
            _, summary = self.solve_controller.solve(mesh, scheme, case, closure)
        except DualFluxError as e:
            raise ConvergenceLevelError(n, e) from e
        logger.info(f"Level n={n}: h={summary.h:.4e} e_u={summary.e_u:.4e} e_V={summary.e_V:.4e} "
                    f"seconds={summary.seconds:.3f}")
        return LevelRecord(
            n=n, h=summary.h,
            e_u=summary.e_u, e_p=summary.e_p, e_div=summary.e_div, e_V=summary.e_V,
            e_cell=summary.e_cell, seconds=summary.seconds,
        )

    def convergence_study(
        self,
        scheme: "str | SchemeEnum",
        case: "str | CaseEnum" = CaseEnum.SINSIN,
        levels: Iterable[int] = (8, 16, 32, 64),
        closure: "str | ClosureRule | None" = None,
        split: "str | SplitEnum | None" = None,
    ) -> ConvergenceReport:
        """
        Solve the case on build_structured(n) for every level and fit convergence rates.

        Raises:
            UsageError: For bad levels, an unknown scheme, case or closure
            ConvergenceLevelError: If a level fails, carrying its n
        """
        levels = check_levels(levels)
        provider = self.solve_controller.provider(scheme, closure)
        problem = mms_case(case)
        try:
            split = SplitEnum(split or self.app_settings.default_split)
        except ValueError:
            raise UsageError(f"unknown split '{split}'") from None
        records = [self.run_level(n, provider.scheme, problem.name, closure, split) for n in levels]
        rates, flags = fit_rates(records)
        for flag in flags:
            logger.warning(flag)
        logger.info(f"Rates for {provider.scheme.value}: " + ", ".join(
            f"{m}={getattr(rates, m):.3f}" for m in METRICS))
        return ConvergenceReport(
            scheme=provider.scheme.value,
            case=problem.name.value,
            closure=provider.closure_label,
            split=split.value,
            levels=records,
            rates=rates,
            flags=flags,
        )

    def infsup(self, mesh: Mesh, max_size: Optional[int] = None) -> float:
        value = estimate_infsup(mesh, max_size or self.app_settings.infsup_max_size)
        logger.info(f"Inf-sup estimate on E={mesh.num_edges} F={mesh.num_cells}: {value:.6f}")
        return value

    def structured_infsup(self, n: int, split: "str | SplitEnum | None" = None,
                          max_size: Optional[int] = None) -> float:
        """Inf-sup estimate on build_structured(n), size-checked before the mesh is built"""
        max_size = max_size or self.app_settings.infsup_max_size
        check_size(structured_size(n), max_size)
        return self.infsup(self.mesh_controller.build_structured(n, split), max_size)

    def write_report(self, report: ConvergenceReport, path: str | Path) -> Path:
        return self.report_model.write_json(report, path)

    def read_report(self, path: str | Path) -> ConvergenceReport:
        return self.report_model.read_report(path)
