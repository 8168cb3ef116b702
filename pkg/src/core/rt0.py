"""Lowest-order Raviart-Thomas fields on a triangulation.

On a cell with counterclockwise vertices v0, v1, v2, the basis function of local edge i
(opposite v_i) is sign_i * (x - v_i) / (2|cell|): this is (x - W)/(2|K|) on K and
-(x - E)/(2|L|) on L. Its unit normal flux across its own edge is 1 and 0 across the others.
"""
from typing import Callable, Optional

import numpy as np
import scipy.sparse as sps
from numpy.typing import ArrayLike, NDArray

from src.core.quadrature import edge_quadrature, edge_rule
from src.models.schemas.mesh import Mesh

DEFAULT_LOCATION_TOLERANCE = 1e-12


def barycentric(mesh: Mesh, c: int, x: ArrayLike) -> NDArray[np.float64]:
    p = mesh.cell_points[c]
    x = np.asarray(x, dtype=float)
    T = np.column_stack([p[1] - p[0], p[2] - p[0]])
    l12 = np.linalg.solve(T, x - p[0])
    return np.array([1.0 - l12.sum(), l12[0], l12[1]])


def contains(mesh: Mesh, c: int, x: ArrayLike, tolerance: float = DEFAULT_LOCATION_TOLERANCE) -> bool:
    return bool(np.all(barycentric(mesh, c, x) >= -tolerance))


def locate(mesh: Mesh, x: ArrayLike, tolerance: float = DEFAULT_LOCATION_TOLERANCE) -> Optional[int]:
    """Lowest-index cell containing x, or None"""
    x = np.asarray(x, dtype=float)
    p = mesh.cell_points
    d1 = p[:, 1] - p[:, 0]
    d2 = p[:, 2] - p[:, 0]
    r = x[None, :] - p[:, 0]
    det = d1[:, 0] * d2[:, 1] - d1[:, 1] * d2[:, 0]
    l1 = (r[:, 0] * d2[:, 1] - r[:, 1] * d2[:, 0]) / det
    l2 = (d1[:, 0] * r[:, 1] - d1[:, 1] * r[:, 0]) / det
    inside = (l1 >= -tolerance) & (l2 >= -tolerance) & (1.0 - l1 - l2 >= -tolerance)
    hits = np.flatnonzero(inside)
    return int(hits[0]) if hits.size else None


def local_basis(mesh: Mesh, c: int, local: int, x: ArrayLike) -> NDArray[np.float64]:
    """Basis function of the cell's local edge evaluated with the cell's affine formula"""
    v = mesh.cell_points[c, local]
    return mesh.cell_signs[c, local] * (np.asarray(x, dtype=float) - v) / (2.0 * mesh.areas[c])


def eval_basis(mesh: Mesh, a: int, x: ArrayLike, tolerance: float = DEFAULT_LOCATION_TOLERANCE) -> NDArray[np.float64]:
    """phi_a(x); points on the shared edge are attributed to K"""
    for c in mesh.edge_cells[a]:
        if c < 0:
            continue
        if contains(mesh, int(c), x, tolerance):
            local = int(np.flatnonzero(mesh.cell_edges[c] == a)[0])
            return local_basis(mesh, int(c), local, x)
    return np.zeros(2)


def div_basis(mesh: Mesh, a: int, c: int) -> float:
    K, L = mesh.edge_cells[a]
    if c == K:
        return 1.0 / mesh.areas[c]
    if c == L:
        return -1.0 / mesh.areas[c]
    return 0.0


def cell_field(mesh: Mesh, q: NDArray, cells: NDArray, points: NDArray) -> NDArray[np.float64]:
    """
    Evaluate sum_a q_a phi_a at points already known to lie in the given cells.

    Args:
        cells: (F',) cell indices
        points: (F', n, 2) points, row i inside cells[i]
    """
    cells = np.asarray(cells)
    verts = mesh.cell_points[cells]                                  # (F', 3, 2)
    coef = np.asarray(q)[mesh.cell_edges[cells]] * mesh.cell_signs[cells]   # (F', 3)
    coef = coef / (2.0 * mesh.areas[cells])[:, None]
    # sum_i coef_i (x - v_i) = (sum_i coef_i) x - sum_i coef_i v_i
    total = coef.sum(axis=1)
    shift = np.einsum("fi,fid->fd", coef, verts)
    return total[:, None, None] * points - shift[:, None, :]


def eval_field(mesh: Mesh, q: NDArray, x: ArrayLike, tolerance: float = DEFAULT_LOCATION_TOLERANCE) -> NDArray[np.float64]:
    """Reconstructed RT0 field at x, zero outside the mesh"""
    c = locate(mesh, x, tolerance)
    if c is None:
        return np.zeros(2)
    pts = np.asarray(x, dtype=float).reshape(1, 1, 2)
    return cell_field(mesh, q, np.array([c]), pts)[0, 0]


def cell_divergence(mesh: Mesh, q: NDArray) -> NDArray[np.float64]:
    """Cellwise constant divergence of sum_a q_a phi_a"""
    return (np.asarray(q)[mesh.cell_edges] * mesh.cell_signs).sum(axis=1) / mesh.areas


def flux_dof(mesh: Mesh, b: int, q: NDArray, degree: int = 2) -> float:
    """Normal flux of sum_a q_a phi_a across edge b, evaluated from the K side"""
    K = int(mesh.edge_cells[b, 0])
    t, w = edge_rule(degree)
    S, N = mesh.vertices[mesh.edge_vertices[b]]
    pts = (S[None, :] + t[:, None] * (N - S)[None, :])[None, :, :]
    values = cell_field(mesh, q, np.array([K]), pts)[0] @ mesh.edge_normals[b]
    return float(mesh.edge_lengths[b] * (values @ w))


def mass_matrix(mesh: Mesh) -> sps.csr_matrix:
    """E x E matrix (phi_a, phi_b), assembled per cell with the exact midpoint rule"""
    p = mesh.cell_points                                             # (F, 3, 2)
    mids = 0.5 * (p[:, [1, 2, 0]] + p[:, [2, 0, 1]])                 # (F, 3, 2)
    # d[f, k, i] = midpoint_k - v_i
    d = mids[:, :, None, :] - p[:, None, :, :]
    local = np.einsum("fkid,fkjd->fij", d, d) / 3.0                  # (1/|K|) * integral
    s = mesh.cell_signs.astype(float)
    local *= s[:, :, None] * s[:, None, :]
    local /= (4.0 * mesh.areas)[:, None, None]

    rows = np.repeat(mesh.cell_edges, 3, axis=1).ravel()
    cols = np.tile(mesh.cell_edges, (1, 3)).ravel()
    E = mesh.num_edges
    return sps.coo_matrix((local.ravel(), (rows, cols)), shape=(E, E)).tocsr()


def divergence_matrix(mesh: Mesh) -> sps.csr_matrix:
    """F x E matrix with entries integral_K div phi_b = +-1"""
    F, E = mesh.num_cells, mesh.num_edges
    rows = np.repeat(np.arange(F), 3)
    return sps.coo_matrix(
        (mesh.cell_signs.ravel().astype(float), (rows, mesh.cell_edges.ravel())), shape=(F, E)
    ).tocsr()


def interpolate_hdiv(
    mesh: Mesh,
    w: Callable[[NDArray, NDArray], NDArray],
    degree: int = 3,
) -> NDArray[np.float64]:
    """Edge fluxes integral_a w . n_a of a vector field w(x, y) -> (wx, wy)"""
    points, weights = edge_quadrature(mesh, degree)
    wx, wy = (np.broadcast_to(np.asarray(v, dtype=float), weights.shape)
              for v in w(points[..., 0], points[..., 1]))
    normal = mesh.edge_normals
    flux = wx * normal[:, 0:1] + wy * normal[:, 1:2]
    return (flux * weights).sum(axis=1)
