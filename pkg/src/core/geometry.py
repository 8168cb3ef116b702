"""Per-triangle geometry and the mesh regularity measure"""
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike, NDArray

from src.utils.errors import DegenerateTriangleError

DEFAULT_DEGENERACY_TOLERANCE = 1e-14


def vec2(p: ArrayLike) -> NDArray[np.float64]:
    out = np.asarray(p, dtype=float).reshape(2)
    if not np.all(np.isfinite(out)):
        raise ValueError(f"non-finite point {out}")
    return out


def rot_minus90(v: NDArray) -> NDArray:
    """Rotate by -90 degrees: (x, y) -> (y, -x)"""
    return np.array([v[1], -v[0]])


def unit_normal(p: ArrayLike, q: ArrayLike) -> NDArray[np.float64]:
    """Unit normal of the directed segment p->q, pointing to its right"""
    t = vec2(q) - vec2(p)
    return rot_minus90(t) / np.linalg.norm(t)


def cross(u: NDArray, v: NDArray) -> float:
    return float(u[0] * v[1] - u[1] * v[0])


@dataclass(frozen=True)
class TriGeom:
    vertices: NDArray[np.float64]     # (3, 2)
    area: float
    centroid: NDArray[np.float64]
    inradius_diameter: float          # rho_K, twice the inradius
    diameter: float                   # h_K, longest side
    circumcenter: NDArray[np.float64]
    gyration_radius: float

    @property
    def quality(self) -> float:
        return self.diameter / self.inradius_diameter


def signed_area(p0: ArrayLike, p1: ArrayLike, p2: ArrayLike) -> float:
    p0, p1, p2 = vec2(p0), vec2(p1), vec2(p2)
    return 0.5 * cross(p1 - p0, p2 - p0)


def tri_geom(
    p0: ArrayLike,
    p1: ArrayLike,
    p2: ArrayLike,
    tolerance: float = DEFAULT_DEGENERACY_TOLERANCE,
) -> TriGeom:
    """
    Exact geometric quantities of one triangle.

    Raises:
        DegenerateTriangleError: If |signed area| < tolerance * diameter^2
    """
    pts = np.array([vec2(p0), vec2(p1), vec2(p2)])
    sides = np.array([np.linalg.norm(pts[(i + 2) % 3] - pts[(i + 1) % 3]) for i in range(3)])
    diameter = float(sides.max())
    area = abs(signed_area(*pts))
    if diameter == 0.0 or area < tolerance * diameter ** 2:
        raise DegenerateTriangleError(f"degenerate triangle {pts.tolist()} (area {area:.3e})")

    a, b, c = pts
    d = 2.0 * (a[0] * (b[1] - c[1]) + b[0] * (c[1] - a[1]) + c[0] * (a[1] - b[1]))
    na, nb, nc = a @ a, b @ b, c @ c
    circumcenter = np.array([
        (na * (b[1] - c[1]) + nb * (c[1] - a[1]) + nc * (a[1] - b[1])) / d,
        (na * (c[0] - b[0]) + nb * (a[0] - c[0]) + nc * (b[0] - a[0])) / d,
    ])

    return TriGeom(
        vertices=pts,
        area=area,
        centroid=pts.mean(axis=0),
        inradius_diameter=4.0 * area / float(sides.sum()),
        diameter=diameter,
        circumcenter=circumcenter,
        gyration_radius=float(np.sqrt((sides ** 2).sum() / 36.0)),
    )


def second_moment_about(tri: TriGeom, p: ArrayLike) -> float:
    """(1/|T|) * integral over T of |x - p|^2, by the parallel-axis identity"""
    d = tri.centroid - vec2(p)
    return tri.gyration_radius ** 2 + float(d @ d)


def quality_theta(mesh) -> float:
    """Regularity measure: max over cells of h_K / rho_K"""
    return float((mesh.diameters / mesh.inradius_diameters).max())
