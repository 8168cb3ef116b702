"""Construction, queries and validation of the triangulation complex"""
from typing import Optional

import numpy as np
from numpy.typing import ArrayLike

from src.core.geometry import DEFAULT_DEGENERACY_TOLERANCE
from src.models.schemas.mesh import NO_CELL, EdgeNeighborhood, Mesh
from src.stores.schemes.SchemeEnums import SplitEnum
from src.utils.errors import BoundaryEdgeError, DegenerateTriangleError, TopologyError


def mesh_from_cells(
    vertices: ArrayLike,
    cells: ArrayLike,
    tolerance: float = DEFAULT_DEGENERACY_TOLERANCE,
) -> Mesh:
    """
    Build a Mesh from vertex coordinates and triangles given by vertex indices.

    Clockwise triangles are reordered counterclockwise. Edges are numbered in order of first
    appearance; the first cell met on an edge becomes its K and fixes the orientation S->N.

    Raises:
        TopologyError: If an index is out of range, an edge has more than two cells or two
            cells traverse a shared edge in the same direction
        DegenerateTriangleError: If a cell repeats a vertex or has (near) zero area
    """
    vertices = np.asarray(vertices, dtype=float)
    cells = np.array(cells, dtype=np.int64, copy=True)
    if vertices.ndim != 2 or vertices.shape[1] != 2:
        raise TopologyError(f"vertices must have shape (V, 2), got {vertices.shape}")
    if cells.ndim != 2 or cells.shape[1] != 3:
        raise TopologyError(f"cells must have shape (F, 3), got {cells.shape}")
    if not np.all(np.isfinite(vertices)):
        raise TopologyError("non-finite vertex coordinates")
    V = vertices.shape[0]
    if cells.size and (cells.min() < 0 or cells.max() >= V):
        raise TopologyError(f"cell vertex index outside 0..{V - 1}")

    for c, (i, j, k) in enumerate(cells):
        if len({i, j, k}) < 3:
            raise DegenerateTriangleError(f"cell {c} repeats a vertex: {(int(i), int(j), int(k))}")
        p0, p1, p2 = vertices[i], vertices[j], vertices[k]
        area = 0.5 * ((p1[0] - p0[0]) * (p2[1] - p0[1]) - (p1[1] - p0[1]) * (p2[0] - p0[0]))
        diam2 = max(np.sum((p1 - p0) ** 2), np.sum((p2 - p1) ** 2), np.sum((p0 - p2) ** 2))
        if abs(area) < tolerance * diam2:
            raise DegenerateTriangleError(f"cell {c} is degenerate (signed area {area:.3e})")
        if area < 0:
            cells[c] = (i, k, j)

    F = cells.shape[0]
    edge_index: dict[tuple[int, int], int] = {}
    edge_vertices: list[tuple[int, int]] = []
    edge_cells: list[list[int]] = []
    cell_edges = np.empty((F, 3), dtype=np.int64)
    cell_signs = np.empty((F, 3), dtype=np.int64)

    for c in range(F):
        for i in range(3):
            s, n = int(cells[c, (i + 1) % 3]), int(cells[c, (i + 2) % 3])
            key = (min(s, n), max(s, n))
            a = edge_index.get(key)
            if a is None:
                a = len(edge_vertices)
                edge_index[key] = a
                edge_vertices.append((s, n))
                edge_cells.append([c, NO_CELL])
                sign = 1
            else:
                if edge_cells[a][1] != NO_CELL:
                    raise TopologyError(f"edge {key} has more than two incident cells")
                if edge_vertices[a] != (n, s):
                    raise TopologyError(
                        f"cells {edge_cells[a][0]} and {c} overlap across edge {key}"
                    )
                edge_cells[a][1] = c
                sign = -1
            cell_edges[c, i] = a
            cell_signs[c, i] = sign

    return Mesh(
        vertices=vertices,
        edge_vertices=np.array(edge_vertices, dtype=np.int64).reshape(-1, 2),
        edge_cells=np.array(edge_cells, dtype=np.int64).reshape(-1, 2),
        cell_vertices=cells,
        cell_edges=cell_edges,
        cell_signs=cell_signs,
    )


def build_structured(n: int, split: SplitEnum | str = SplitEnum.DIAGONAL) -> Mesh:
    """
    Uniform triangulation of the unit square with (n+1)^2 vertices.

    Vertex (i, j) sits at (i/n, j/n) with index i + j(n+1). Each grid square is cut along
    (i,j)-(i+1,j+1) for DIAGONAL or along (i+1,j)-(i,j+1) for ANTIDIAGONAL.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    split = SplitEnum(split)
    ticks = np.arange(n + 1) / n
    xx, yy = np.meshgrid(ticks, ticks)
    vertices = np.column_stack([xx.ravel(), yy.ravel()])

    cells = []
    for j in range(n):
        for i in range(n):
            v00 = i + j * (n + 1)
            v10, v01, v11 = v00 + 1, v00 + n + 1, v00 + n + 2
            if split == SplitEnum.DIAGONAL:
                cells += [(v00, v10, v11), (v00, v11, v01)]
            else:
                cells += [(v00, v10, v01), (v10, v11, v01)]
    return mesh_from_cells(vertices, cells)


def renumber(mesh: Mesh, permutation: ArrayLike) -> Mesh:
    """Same triangulation with vertex i relabeled permutation[i]"""
    perm = np.asarray(permutation, dtype=np.int64)
    if sorted(perm.tolist()) != list(range(mesh.num_vertices)):
        raise ValueError("permutation must be a permutation of 0..V-1")
    vertices = np.empty_like(mesh.vertices)
    vertices[perm] = mesh.vertices
    return mesh_from_cells(vertices, perm[mesh.cell_vertices])


def _across(mesh: Mesh, inner: int, p: int, q: int) -> tuple[Optional[int], Optional[int]]:
    """Cell on the other side of edge {p, q} from `inner`, and its vertex opposite that edge"""
    a = mesh.find_edge(p, q)
    if a is None:
        raise TopologyError(f"cell {inner} has no edge {(p, q)}")
    other = mesh.other_cell(a, inner)
    if other is None:
        return None, None
    return other, mesh.opposite_vertex(other, a)


def edge_neighborhood(mesh: Mesh, a: int) -> EdgeNeighborhood:
    """
    Six-triangle frame of interior edge a.

    Raises:
        BoundaryEdgeError: If a lies on the boundary
    """
    if mesh.is_boundary_edge[a]:
        raise BoundaryEdgeError(a)
    S, N = (int(i) for i in mesh.edge_vertices[a])
    K, L = (int(i) for i in mesh.edge_cells[a])
    W = mesh.opposite_vertex(K, a)
    E = mesh.opposite_vertex(L, a)

    M, A = _across(mesh, L, E, N)
    P, B = _across(mesh, K, N, W)
    Q, C = _across(mesh, K, W, S)
    R, D = _across(mesh, L, S, E)
    return EdgeNeighborhood(edge=a, S=S, N=N, W=W, E=E, K=K, L=L,
                            A=A, B=B, C=C, D=D, M=M, P=P, Q=Q, R=R)


def validate_mesh(mesh: Mesh) -> list[str]:
    """
    Check the complex invariants; one "<invariant>: <detail>" entry per violation.

    Invariant names: cell-orientation, edge-incidence, incidence-closure, direct-pair,
    boundary-normal, euler.
    """
    report: list[str] = []
    F, E = mesh.num_cells, mesh.num_edges

    for c in np.flatnonzero(mesh.signed_areas <= 0):
        report.append(f"cell-orientation: cell {c} is not counterclockwise")

    K, L = mesh.edge_cells[:, 0], mesh.edge_cells[:, 1]
    bad_k = (K < 0) | (K >= F)
    bad_l = ((L < 0) & (L != NO_CELL)) | (L >= F) | (L == K)
    for a in np.flatnonzero(bad_k | bad_l):
        report.append(f"edge-incidence: edge {a} has co-boundary {tuple(mesh.edge_cells[a])}")
    counts = np.bincount(mesh.edge_cells[mesh.edge_cells >= 0].ravel(), minlength=F)[:F]
    for c in np.flatnonzero(counts != 3):
        report.append(f"edge-incidence: cell {c} lies in the co-boundary of {counts[c]} edges")
    if report and any(r.startswith("edge-incidence") for r in report):
        return report

    for c in range(F):
        v = mesh.cell_vertices[c]
        for i in range(3):
            a = mesh.cell_edges[c, i]
            if not 0 <= a < E:
                report.append(f"incidence-closure: cell {c} references edge {a}")
                continue
            if set(mesh.edge_vertices[a].tolist()) != {int(v[(i + 1) % 3]), int(v[(i + 2) % 3])}:
                report.append(f"incidence-closure: edge {a} endpoints are not vertices of cell {c}")
            if c not in mesh.edge_cells[a]:
                report.append(f"incidence-closure: cell {c} missing from co-boundary of edge {a}")
            elif (mesh.cell_signs[c, i] == 1) != (mesh.edge_cells[a, 0] == c):
                report.append(f"incidence-closure: sign of edge {a} in cell {c}")

    normals = mesh.edge_normals
    interior = mesh.interior_edges
    det = normals[interior, 0] * mesh.edge_vectors[interior, 1] - normals[interior, 1] * mesh.edge_vectors[interior, 0]
    jump = mesh.centroids[L[interior]] - mesh.centroids[K[interior]]
    toward_l = np.einsum("ij,ij->i", normals[interior], jump)
    for a, d, t in zip(interior, det, toward_l):
        if d <= 0 or t <= 0:
            report.append(f"direct-pair: normal of edge {a} does not point from K to L")

    boundary = mesh.boundary_edges
    outward = np.einsum(
        "ij,ij->i", normals[boundary], mesh.edge_midpoints[boundary] - mesh.centroids[K[boundary]]
    )
    for a in boundary[outward <= 0]:
        report.append(f"boundary-normal: normal of boundary edge {a} points inward")

    chi = mesh.num_vertices - E + F
    if chi != 1:
        report.append(f"euler: V - E + F = {chi}")
    return report
