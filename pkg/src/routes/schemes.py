"""Scheme API routes"""
from typing import Optional

from fastapi import APIRouter, Depends, HTTPException, Path, status
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from src.controllers.HarnessController import HarnessController
from src.controllers.MeshController import MeshController
from src.controllers.SolveController import SolveController
from src.utils.config import Config
from src.utils.errors import DualFluxError, UsageError
from src.utils.helpers import get_settings
from src.utils.logger import get_logger

router = APIRouter(
    prefix="/api/v1/schemes",
    tags=["api_v1", "schemes"],
)

logger = get_logger(__name__)

MAX_LEVEL = 256


class SolveRequest(BaseModel):
    """Request model for one solve on a structured mesh"""
    scheme: str
    case: str = "sinsin"
    n: int = Field(ge=1, le=MAX_LEVEL)
    closure: Optional[str] = None
    split: Optional[str] = None


class ConvergeRequest(BaseModel):
    """Request model for a convergence study"""
    scheme: str
    case: str = "sinsin"
    levels: list[int] = Field(default_factory=lambda: [8, 16, 32], min_length=3)
    closure: Optional[str] = None
    split: Optional[str] = None


def _as_http_error(e: DualFluxError) -> HTTPException:
    if isinstance(e, UsageError):
        return HTTPException(status_code=422, detail=str(e))
    logger.error(f"Numerical failure: {e}")
    return HTTPException(status_code=status.HTTP_500_INTERNAL_SERVER_ERROR, detail=str(e))


@router.post("/solve")
def solve(solve_request: SolveRequest, settings: Config = Depends(get_settings)):
    """
    Solve a manufactured problem on build_structured(n).

    Returns:
        JSON response with the error norms and solver statistics
    """
    try:
        mesh = MeshController(settings).build_structured(solve_request.n, solve_request.split)
        _, summary = SolveController(settings).solve(
            mesh, solve_request.scheme, solve_request.case, solve_request.closure
        )
    except DualFluxError as e:
        raise _as_http_error(e)

    logger.info(f"Solve request {solve_request.scheme} n={solve_request.n}: e_V={summary.e_V:.4e}")
    return JSONResponse(
        status_code=status.HTTP_200_OK,
        content={"message": "solve_completed", "summary": summary.model_dump()},
    )


@router.post("/converge")
def converge(converge_request: ConvergeRequest, settings: Config = Depends(get_settings)):
    """
    Run a convergence study over structured levels.

    Returns:
        JSON response with the convergence report
    """
    if any(n > MAX_LEVEL for n in converge_request.levels):
        raise HTTPException(
            status_code=422,
            detail=f"levels above {MAX_LEVEL} are not served over HTTP",
        )
    try:
        report = HarnessController(settings).convergence_study(
            converge_request.scheme,
            converge_request.case,
            converge_request.levels,
            converge_request.closure,
            converge_request.split,
        )
    except DualFluxError as e:
        raise _as_http_error(e)

    return JSONResponse(
        status_code=status.HTTP_200_OK,
        content={"message": "convergence_completed", "report": report.model_dump()},
    )


@router.get("/infsup/{n}")
def infsup(n: int = Path(ge=1, le=MAX_LEVEL), split: Optional[str] = None, settings: Config = Depends(get_settings)):
    """Inf-sup estimate of the Galerkin RT0 x P0 pair on build_structured(n)"""
    try:
        value = HarnessController(settings).structured_infsup(n, split)
    except DualFluxError as e:
        raise _as_http_error(e)

    return JSONResponse(
        status_code=status.HTTP_200_OK,
        content={"message": "infsup_estimated", "n": n, "infsup": value},
    )
