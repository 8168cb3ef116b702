"""Flux constraints of the dual Raviart-Thomas basis and the six-point gradient.

Roman letters K, L, M, P, Q, R stand for the centroids of the six triangles around an edge
S->N and O for the midpoint of SN. The unknowns (eta, alpha, beta, gamma, delta) are the
fluxes of the dual basis function across SN, EN, NW, WS and SE.
"""
from typing import Optional

import numpy as np
from numpy.typing import NDArray

from src.core.topology import edge_neighborhood
from src.models.schemas.mesh import EdgeNeighborhood, Mesh
from src.models.schemas.stencil import (
    ClosureRule,
    ConstraintSystem,
    EtaSecondMomenta,
    NeighborhoodFrame,
    SideMomenta,
    StencilCoefficients,
)
from src.stores.schemes.SchemeEnums import ClosureEnum
from src.utils.errors import IncompleteNeighborhoodError, RankDeficiencyError

DEFAULT_RANK_TOLERANCE = 1e-10

# side -> (U, V, outer triangle X, inner triangle Y, vertex of Y opposite UV)
SIDES = {
    "alpha": ("E", "N", "M", "L", "S"),
    "beta": ("N", "W", "P", "K", "S"),
    "gamma": ("W", "S", "Q", "K", "N"),
    "delta": ("S", "E", "R", "L", "N"),
}
SIDE_OF_TRIANGLE = {"M": "alpha", "P": "beta", "Q": "gamma", "R": "delta"}

# weight of the outer fluxes in the MIN_OUTER objective
_OUTER_ONLY = np.diag([0.0, 1.0, 1.0, 1.0, 1.0])


def frame_from_points(S, N, W, E, A, B, C, D, edge: int = -1) -> NeighborhoodFrame:
    pts = [np.asarray(p, dtype=float).reshape(2) for p in (S, N, W, E, A, B, C, D)]
    return NeighborhoodFrame(*pts, edge=edge)


def neighborhood_frame(mesh: Mesh, nb: EdgeNeighborhood) -> NeighborhoodFrame:
    """
    Coordinates of the neighborhood's eight vertices.

    Raises:
        IncompleteNeighborhoodError: If an outer triangle is missing
    """
    if not nb.complete:
        raise IncompleteNeighborhoodError(nb.edge)
    X = mesh.vertices
    return frame_from_points(X[nb.S], X[nb.N], X[nb.W], X[nb.E],
                             X[nb.A], X[nb.B], X[nb.C], X[nb.D], edge=nb.edge)


def frame_constraints(frame: NeighborhoodFrame, nb: Optional[EdgeNeighborhood] = None) -> ConstraintSystem:
    """Rows 1-2: eta KL + alpha LM + beta KP + gamma KQ + delta LR = |SN| n.
    Row 3: alpha LM.WA + beta KP.EB + gamma KQ.EC + delta LR.WD = -3|SN| n.(OL + OK)."""
    g = frame.centroid
    KL, LM, KP = g("L") - g("K"), g("M") - g("L"), g("P") - g("K")
    KQ, LR = g("Q") - g("K"), g("R") - g("L")
    WA, EB = frame.A - frame.W, frame.B - frame.E
    EC, WD = frame.C - frame.E, frame.D - frame.W
    s, n, O = frame.length, frame.normal, frame.midpoint

    matrix = np.zeros((3, 5))
    matrix[:2] = np.column_stack([KL, LM, KP, KQ, LR])
    matrix[2] = [0.0, LM @ WA, KP @ EB, KQ @ EC, LR @ WD]
    rhs = np.empty(3)
    rhs[:2] = s * n
    rhs[2] = -3.0 * s * float(n @ ((g("L") - O) + (g("K") - O)))
    return ConstraintSystem(matrix=matrix, rhs=rhs, frame=frame, neighborhood=nb)


def assemble_constraints(mesh: Mesh, nb: EdgeNeighborhood) -> ConstraintSystem:
    return frame_constraints(neighborhood_frame(mesh, nb), nb)


def constraint_residuals(sys: ConstraintSystem, x: NDArray) -> tuple[float, float]:
    r = sys.matrix @ x - sys.rhs
    return float(np.linalg.norm(r[:2])), float(abs(r[2]))


def residual_bounds(sys: ConstraintSystem, factor: float = DEFAULT_RANK_TOLERANCE) -> tuple[float, float]:
    """Acceptance bounds for the two residuals: factor*|SN| and factor*3|SN|(|OL| + |OK|)"""
    f, s, O = sys.frame, sys.scale, sys.frame.midpoint
    second = 3.0 * s * (np.linalg.norm(f.centroid("L") - O) + np.linalg.norm(f.centroid("K") - O))
    return factor * s, factor * float(second)


def _equilibrated(sys: ConstraintSystem) -> tuple[NDArray, NDArray]:
    s = sys.scale
    scale = np.array([s, s, s * s])
    A = sys.matrix / scale[:, None]
    b = sys.rhs / scale
    norms = np.linalg.norm(A, axis=1)
    norms[norms == 0.0] = 1.0
    return A / norms[:, None], b / norms


def numerical_rank(sigma: NDArray, rank_tolerance: float = DEFAULT_RANK_TOLERANCE) -> int:
    """Number of singular values above rank_tolerance * sigma_max"""
    if sigma.size == 0 or sigma[0] == 0.0:
        return 0
    return int(np.sum(sigma > rank_tolerance * sigma[0]))


def nullspace_basis(sys: ConstraintSystem, rank_tolerance: float = DEFAULT_RANK_TOLERANCE) -> NDArray[np.float64]:
    """(5, k) orthonormal basis of the kernel of the constraint matrix, k = 5 - numerical rank"""
    A, _ = _equilibrated(sys)
    _, sigma, Vt = np.linalg.svd(A, full_matrices=True)
    return Vt[numerical_rank(sigma, rank_tolerance):].T


def solve_stencil(
    sys: ConstraintSystem,
    closure: ClosureRule | str | None = None,
    rank_tolerance: float = DEFAULT_RANK_TOLERANCE,
) -> StencilCoefficients:
    """
    Pick one member of the two-parameter solution family.

    MIN_NORM: minimum Euclidean norm of the non-dimensional 5-vector.
    MIN_OUTER: minimum norm of (alpha, beta, gamma, delta), eta free.
    FIXED(t1, t2): minimum-norm solution plus t1 z1 + t2 z2 with (z1, z2) the
    right singular vectors spanning the kernel.

    Raises:
        RankDeficiencyError: If sigma_min/sigma_max of the equilibrated matrix <= rank_tolerance
    """
    rule = ClosureRule.parse(closure)
    A, b = _equilibrated(sys)
    U, sigma, Vt = np.linalg.svd(A, full_matrices=True)
    ratio = float(sigma[-1] / sigma[0]) if sigma[0] > 0 else 0.0
    if ratio <= rank_tolerance:
        raise RankDeficiencyError(sys.edge, ratio)

    x = Vt[:3].T @ ((U.T @ b) / sigma)
    Z = Vt[3:].T
    nullspace_dim = A.shape[1] - numerical_rank(sigma, rank_tolerance)
    if rule.kind == ClosureEnum.MIN_OUTER:
        t, *_ = np.linalg.lstsq(_OUTER_ONLY @ Z, _OUTER_ONLY @ x, rcond=None)
        x = x - Z @ t
    elif rule.kind == ClosureEnum.FIXED:
        x = x + Z @ np.asarray(rule.t)

    r_first, r_second = constraint_residuals(sys, x)
    return StencilCoefficients.from_array(x, residual_first=r_first, residual_second=r_second, nullspace_dim=nullspace_dim)


def stencil_for_edge(
    mesh: Mesh,
    a: int,
    closure: ClosureRule | str | None = None,
    rank_tolerance: float = DEFAULT_RANK_TOLERANCE,
) -> StencilCoefficients:
    nb = edge_neighborhood(mesh, a)
    return solve_stencil(assemble_constraints(mesh, nb), closure, rank_tolerance)


def gradient_six_point(c: StencilCoefficients, u_K: float, u_L: float, u_M: float,
                       u_P: float, u_Q: float, u_R: float) -> float:
    """Flux of grad u across SN from the six cell values"""
    return (c.eta * (u_L - u_K) + c.alpha * (u_M - u_L) + c.beta * (u_P - u_K)
            + c.gamma * (u_Q - u_K) + c.delta * (u_R - u_L))


def flux_weights(c: StencilCoefficients) -> dict[str, float]:
    """Coefficient of each cell value in the six-point flux; they sum to zero"""
    return {
        "K": -c.eta - c.beta - c.gamma,
        "L": c.eta - c.alpha - c.delta,
        "M": c.alpha,
        "P": c.beta,
        "Q": c.gamma,
        "R": c.delta,
    }


def stencil_table(
    mesh: Mesh,
    closure: ClosureRule | str | None = None,
    rank_tolerance: float = DEFAULT_RANK_TOLERANCE,
) -> list[tuple[int, StencilCoefficients]]:
    """Stencils of every interior edge whose neighborhood is complete, by edge index"""
    rows = []
    for a in mesh.interior_edges:
        nb = edge_neighborhood(mesh, int(a))
        if nb.complete:
            rows.append((int(a), solve_stencil(assemble_constraints(mesh, nb), closure, rank_tolerance)))
    return rows


# -- momenta -----------------------------------------------------------------------------

def _unit(v: NDArray) -> NDArray:
    return v / np.linalg.norm(v)


def eta1_from_L(c: StencilCoefficients, frame: NeighborhoodFrame) -> float:
    g, t = frame.centroid, _unit(frame.N - frame.S)
    v = (g("L") - frame.S) * c.eta + (g("M") - g("L")) * c.alpha + (g("R") - g("L")) * c.delta
    return float(v @ t)


def eta1_from_K(c: StencilCoefficients, frame: NeighborhoodFrame) -> float:
    g, t = frame.centroid, _unit(frame.N - frame.S)
    v = (g("K") - frame.S) * c.eta - (g("P") - g("K")) * c.beta - (g("Q") - g("K")) * c.gamma
    return float(v @ t)


def eta2_pair(c: StencilCoefficients, frame: NeighborhoodFrame) -> EtaSecondMomenta:
    """Second momenta of the SN flux about S (plain) and N (tilde), seen from L and from K"""
    f, g = frame, frame.centroid
    S, N, W, E, A, B, C, D = f.S, f.N, f.W, f.E, f.A, f.B, f.C, f.D
    SN = N - S

    def sq(v):
        return float(v @ v)

    eta2_L = ((f.gyration2("L") + sq(g("L") - S)) * c.eta
              + (A - S) @ ((E - S) + (A - S) + SN) / 6.0 * c.alpha
              + (D - N) @ ((D - S) + (E - S) + SN) / 6.0 * c.delta)
    eta2tilde_L = ((f.gyration2("L") + sq(g("L") - N)) * c.eta
                   + (A - S) @ (-SN + (E - N) + (A - N)) / 6.0 * c.alpha
                   + (D - N) @ (-SN + (D - N) + (E - N)) / 6.0 * c.delta)
    eta2tilde_K = ((f.gyration2("K") + sq(g("K") - N)) * c.eta
                   - (B - S) @ ((B - N) + (W - N) - SN) / 6.0 * c.beta
                   - (C - N) @ ((W - N) + (C - N) - SN) / 6.0 * c.gamma)
    eta2_K = ((f.gyration2("K") + sq(g("K") - S)) * c.eta
              - (B - S) @ (SN + (B - S) + (W - S)) / 6.0 * c.beta
              - (C - N) @ (SN + (W - S) + (C - S)) / 6.0 * c.gamma)
    return EtaSecondMomenta(float(eta2_L), float(eta2tilde_L), float(eta2_K), float(eta2tilde_K))


def side_momenta(c: StencilCoefficients, frame: NeighborhoodFrame) -> dict[str, SideMomenta]:
    """First and second momenta of alpha, beta, gamma, delta about both ends of their side"""
    out = {}
    for name, (u, v, x, _, _) in SIDES.items():
        U, V, X = frame.point(u), frame.point(v), frame.centroid(x)
        t = _unit(V - U)
        coef = getattr(c, name)
        rho2 = frame.gyration2(x)
        out[name] = SideMomenta(
            first=float((X - U) @ t) * coef,
            first_tilde=-float((X - V) @ t) * coef,
            second=(rho2 + float((X - U) @ (X - U))) * coef,
            second_tilde=(rho2 + float((X - V) @ (X - V))) * coef,
        )
    return out


def _side(side: str) -> tuple[str, tuple[str, str, str, str, str]]:
    name = SIDE_OF_TRIANGLE.get(side.upper(), side.lower())
    if name not in SIDES:
        raise ValueError(f"unknown side '{side}'")
    return name, SIDES[name]


def _outer_normal(frame: NeighborhoodFrame, u: str, v: str) -> NDArray:
    d = frame.point(v) - frame.point(u)
    return np.array([d[1], -d[0]]) / np.linalg.norm(d)


def dual_cell_average(c: StencilCoefficients, frame: NeighborhoodFrame, side: str) -> NDArray[np.float64]:
    """Integral of the dual function over the outer triangle of a side, e.g. (ME.n_EN) alpha n_EN for M"""
    name, (u, v, x, _, _) = _side(side)
    n = _outer_normal(frame, u, v)
    return float((frame.point(u) - frame.centroid(x)) @ n) * getattr(c, name) * n


def dual_cell_moment(c: StencilCoefficients, frame: NeighborhoodFrame, side: str) -> float:
    """(1/(2|Y|)) (V - O_Y).n (X - U).n * coefficient for inner triangle Y of the side"""
    name, (u, v, x, y, o) = _side(side)
    n = _outer_normal(frame, u, v)
    height = float((frame.point(v) - frame.point(o)) @ n)
    lever = float((frame.centroid(x) - frame.point(u)) @ n)
    return height * lever * getattr(c, name) / (2.0 * frame.area(y))
