"""Quadrature rules on triangles (barycentric) and on straight segments (Gauss-Legendre)"""
from functools import lru_cache
from typing import Callable

import numpy as np
from numpy.typing import NDArray

from src.core.geometry import TriGeom

TRIANGLE_DEGREES = (1, 2, 3, 5)
EDGE_DEGREES = (1, 2, 3)


@lru_cache(maxsize=None)
def triangle_rule(degree: int) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """Barycentric points (q, 3) and weights (q,) summing to 1.

    Raises:
        ValueError: If the degree has no rule
    """
    if degree == 1:
        bary = np.array([[1 / 3, 1 / 3, 1 / 3]])
        w = np.array([1.0])
    elif degree == 2:
        bary = np.array([[0.0, 0.5, 0.5], [0.5, 0.0, 0.5], [0.5, 0.5, 0.0]])
        w = np.full(3, 1 / 3)
    elif degree == 3:
        bary = np.array([
            [1 / 3, 1 / 3, 1 / 3],
            [0.6, 0.2, 0.2],
            [0.2, 0.6, 0.2],
            [0.2, 0.2, 0.6],
        ])
        w = np.array([-27 / 48, 25 / 48, 25 / 48, 25 / 48])
    elif degree == 5:
        s15 = np.sqrt(15.0)
        a1, b1 = (6 - s15) / 21, (9 + 2 * s15) / 21
        a2, b2 = (6 + s15) / 21, (9 - 2 * s15) / 21
        w1, w2 = (155 - s15) / 1200, (155 + s15) / 1200
        bary = np.array([
            [1 / 3, 1 / 3, 1 / 3],
            [b1, a1, a1], [a1, b1, a1], [a1, a1, b1],
            [b2, a2, a2], [a2, b2, a2], [a2, a2, b2],
        ])
        w = np.array([9 / 40, w1, w1, w1, w2, w2, w2])
    else:
        raise ValueError(f"Triangular quadrature of degree {degree} not supported")
    bary.flags.writeable = False
    w.flags.writeable = False
    return bary, w


@lru_cache(maxsize=None)
def edge_rule(degree: int) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """Parameters in [0, 1] and weights summing to 1.

    Raises:
        ValueError: If the degree has no rule
    """
    if degree not in EDGE_DEGREES:
        raise ValueError(f"Edge quadrature of degree {degree} not supported")
    npts = (degree + 2) // 2
    x, w = np.polynomial.legendre.leggauss(npts)
    t, w = 0.5 * (x + 1.0), 0.5 * w
    t.flags.writeable = False
    w.flags.writeable = False
    return t, w


def _integrate(values: NDArray, weights: NDArray) -> float | NDArray:
    values = np.asarray(values, dtype=float)
    if values.ndim == 1:
        return float(values @ weights)
    return values @ weights


def quadrature_triangle(
    f: Callable[[NDArray, NDArray], NDArray],
    tri: TriGeom,
    degree: int,
) -> float | NDArray:
    """Integrate a scalar field f(x, y) or a vector field returning (fx, fy) over one triangle"""
    bary, w = triangle_rule(degree)
    pts = bary @ tri.vertices
    values = np.asarray(f(pts[:, 0], pts[:, 1]), dtype=float)
    if values.ndim == 0:
        values = np.full(len(w), float(values))
    return tri.area * _integrate(values, w)


def quadrature_edge(
    f: Callable[[NDArray, NDArray], NDArray],
    p: NDArray,
    q: NDArray,
    degree: int,
) -> float | NDArray:
    """Integrate f along the segment from p to q with the arclength measure"""
    t, w = edge_rule(degree)
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    pts = p[None, :] + t[:, None] * (q - p)[None, :]
    values = np.asarray(f(pts[:, 0], pts[:, 1]), dtype=float)
    if values.ndim == 0:
        values = np.full(len(w), float(values))
    return float(np.linalg.norm(q - p)) * _integrate(values, w)


def cell_quadrature(mesh, degree: int) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """Quadrature points (F, q, 2) and area-scaled weights (F, q) for every cell of a mesh"""
    bary, w = triangle_rule(degree)
    points = np.einsum("qk,fkd->fqd", bary, mesh.cell_points)
    weights = mesh.areas[:, None] * w[None, :]
    return points, weights


def edge_quadrature(mesh, degree: int) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """Quadrature points (E, q, 2) and length-scaled weights (E, q) for every edge of a mesh"""
    t, w = edge_rule(degree)
    start = mesh.vertices[mesh.edge_vertices[:, 0]]
    points = start[:, None, :] + t[None, :, None] * mesh.edge_vectors[:, None, :]
    weights = mesh.edge_lengths[:, None] * w[None, :]
    return points, weights


def cell_integrals(mesh, f: Callable[[NDArray, NDArray], NDArray], degree: int) -> NDArray[np.float64]:
    """Integral of a scalar field over every cell"""
    points, weights = cell_quadrature(mesh, degree)
    values = np.broadcast_to(np.asarray(f(points[..., 0], points[..., 1]), dtype=float), weights.shape)
    return (values * weights).sum(axis=1)
