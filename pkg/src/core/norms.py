"""Error norms, conservation checks and rate fitting"""
from typing import Callable, NamedTuple, Optional

import numpy as np
from numpy.typing import NDArray

from src.core.quadrature import cell_integrals, cell_quadrature
from src.core.rt0 import cell_divergence, cell_field, interpolate_hdiv
from src.models.schemas.cases import ManufacturedCase
from src.models.schemas.mesh import Mesh
from src.models.schemas.solution import DiscreteSolution, SolveStats
from src.utils.logger import get_logger

logger = get_logger(__name__)

DIRECT_CONSERVATION_TOLERANCE = 1e-10
ITERATIVE_CONSERVATION_FACTOR = 1e-8


class ErrorNorms(NamedTuple):
    e_u: float
    e_p: float
    e_div: float
    e_V: float


def _as_vector(values, shape) -> NDArray[np.float64]:
    """Stack (vx, vy) evaluated on points of `shape` into an array of shape (*shape, 2)"""
    vx, vy = (np.broadcast_to(np.asarray(v, dtype=float), shape) for v in values)
    return np.stack([vx, vy], axis=-1)


def error_norms(mesh: Mesh, sol: DiscreteSolution, case: ManufacturedCase, degree: int = 5) -> ErrorNorms:
    """
    L2 errors of u (against the cellwise constant u_T), of p (against the RT0
    reconstruction) and of div p (against -f), and their combination in the graph norm.
    """
    points, weights = cell_quadrature(mesh, degree)
    x, y = points[..., 0], points[..., 1]

    u_exact = np.broadcast_to(np.asarray(case.u(x, y), dtype=float), weights.shape)
    e_u2 = float(np.sum(weights * (u_exact - sol.u[:, None]) ** 2))

    p_exact = _as_vector(case.p(x, y), weights.shape)
    p_h = cell_field(mesh, sol.p, np.arange(mesh.num_cells), points)
    e_p2 = float(np.sum(weights * np.sum((p_exact - p_h) ** 2, axis=-1)))

    f = np.broadcast_to(np.asarray(case.f(x, y), dtype=float), weights.shape)
    div_h = cell_divergence(mesh, sol.p)
    e_div2 = float(np.sum(weights * (-f - div_h[:, None]) ** 2))

    return ErrorNorms(np.sqrt(e_u2), np.sqrt(e_p2), np.sqrt(e_div2), np.sqrt(e_u2 + e_p2 + e_div2))


def cell_value_error(mesh: Mesh, sol: DiscreteSolution, case: ManufacturedCase,
                     centers: Optional[NDArray] = None) -> float:
    """Discrete L2 error sqrt(sum |K| (u_K - u(x_K))^2) at the given cell centers (centroids by default)"""
    x = mesh.centroids if centers is None else np.asarray(centers, dtype=float)
    u_exact = np.broadcast_to(np.asarray(case.u(x[:, 0], x[:, 1]), dtype=float), (mesh.num_cells,))
    return float(np.sqrt(np.sum(mesh.areas * (sol.u - u_exact) ** 2)))


def exact_data_solution(mesh: Mesh, case: ManufacturedCase, u_degree: int = 5, p_degree: int = 3) -> DiscreteSolution:
    """Cell means of u and edge fluxes of grad u: the projections the schemes approximate"""
    u = cell_integrals(mesh, case.u, u_degree) / mesh.areas
    p = interpolate_hdiv(mesh, case.p, p_degree)
    return DiscreteSolution(u=u, p=p, scheme=None, stats=SolveStats("exact"))


def conservation_residuals(mesh: Mesh, sol: DiscreteSolution, f: Callable, degree: int = 3) -> NDArray[np.float64]:
    """Per cell: sum of outward fluxes plus the integral of f"""
    outflow = (sol.p[mesh.cell_edges] * mesh.cell_signs).sum(axis=1)
    return outflow + cell_integrals(mesh, f, degree)


def conservation_check(mesh: Mesh, sol: DiscreteSolution, f: Callable, degree: int = 3) -> float:
    return float(np.abs(conservation_residuals(mesh, sol, f, degree)).max(initial=0.0))


def conservation_tolerance(mesh: Mesh, f: Callable, iterative: bool, degree: int = 5) -> NDArray[np.float64]:
    """Per-cell bound: 1e-10 after a direct solve, 1e-8 max(1, ||f||) |K|^(1/2) after an iterative one"""
    if not iterative:
        return np.full(mesh.num_cells, DIRECT_CONSERVATION_TOLERANCE)
    f_norm = float(np.sqrt(cell_integrals(mesh, lambda x, y: np.asarray(f(x, y), dtype=float) ** 2, degree).sum()))
    return ITERATIVE_CONSERVATION_FACTOR * max(1.0, f_norm) * np.sqrt(mesh.areas)


def fit_rate(h: NDArray, errors: NDArray) -> float:
    """Least-squares slope of log(error) against log(h); 0 when some error vanishes"""
    h = np.asarray(h, dtype=float)
    errors = np.asarray(errors, dtype=float)
    if len(h) < 2:
        return 0.0
    if np.any(errors <= 0):
        logger.warning("Rate fit skipped: some errors are zero")
        return 0.0
    slope, _ = np.polyfit(np.log(h), np.log(errors), 1)
    return float(slope)
