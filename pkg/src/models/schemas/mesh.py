"""Triangulation as a two-dimensional cellular complex.

Orientation conventions:
  * cell vertices are stored counterclockwise;
  * an edge a = (S, N) has K on the left of S->N and L on the right (L = -1 on the boundary);
  * the unit normal n_a is N-S rotated by -90 degrees, so it points from K to L (outward on
    the boundary) and det[n_a | N-S] > 0;
  * local edge i of a cell is the edge opposite its vertex i, and the orientation sign is +1
    when the cell is the K of that edge.
"""
from dataclasses import dataclass, field
from functools import cached_property
from typing import NamedTuple, Optional

import numpy as np
from numpy.typing import NDArray

NO_CELL = -1


def _frozen(array: NDArray, dtype) -> NDArray:
    out = np.array(array, dtype=dtype, copy=True)
    out.flags.writeable = False
    return out


class EdgeRecord(NamedTuple):
    S: int
    N: int
    K: int
    L: Optional[int]


class CellRecord(NamedTuple):
    v: tuple[int, int, int]
    e: tuple[int, int, int]
    sign: tuple[int, int, int]


@dataclass(frozen=True, eq=False)
class Mesh:
    """Immutable triangulation with precomputed incidence and geometry caches"""
    vertices: NDArray[np.float64]          # (V, 2)
    edge_vertices: NDArray[np.int64]       # (E, 2) columns S, N
    edge_cells: NDArray[np.int64]          # (E, 2) columns K, L (L = -1 on the boundary)
    cell_vertices: NDArray[np.int64]       # (F, 3) counterclockwise
    cell_edges: NDArray[np.int64]          # (F, 3) local edge i opposite vertex i
    cell_signs: NDArray[np.int64]          # (F, 3) +1 if the cell is K of the edge

    def __post_init__(self):
        object.__setattr__(self, "vertices", _frozen(self.vertices, np.float64))
        for name in ("edge_vertices", "edge_cells", "cell_vertices", "cell_edges", "cell_signs"):
            object.__setattr__(self, name, _frozen(getattr(self, name), np.int64))

    # -- sizes -------------------------------------------------------------------------
    @property
    def num_vertices(self) -> int:
        return self.vertices.shape[0]

    @property
    def num_edges(self) -> int:
        return self.edge_vertices.shape[0]

    @property
    def num_cells(self) -> int:
        return self.cell_vertices.shape[0]

    # -- records -----------------------------------------------------------------------
    def edge(self, a: int) -> EdgeRecord:
        S, N = (int(i) for i in self.edge_vertices[a])
        K, L = (int(i) for i in self.edge_cells[a])
        return EdgeRecord(S, N, K, None if L == NO_CELL else L)

    def cell(self, c: int) -> CellRecord:
        return CellRecord(
            tuple(int(i) for i in self.cell_vertices[c]),
            tuple(int(i) for i in self.cell_edges[c]),
            tuple(int(i) for i in self.cell_signs[c]),
        )

    @property
    def edges(self) -> list[EdgeRecord]:
        return [self.edge(a) for a in range(self.num_edges)]

    @property
    def cells(self) -> list[CellRecord]:
        return [self.cell(c) for c in range(self.num_cells)]

    @cached_property
    def is_boundary_edge(self) -> NDArray[np.bool_]:
        return self.edge_cells[:, 1] == NO_CELL

    @cached_property
    def interior_edges(self) -> NDArray[np.int64]:
        return np.flatnonzero(~self.is_boundary_edge)

    @cached_property
    def boundary_edges(self) -> NDArray[np.int64]:
        return np.flatnonzero(self.is_boundary_edge)

    @cached_property
    def edge_lookup(self) -> dict[frozenset, int]:
        """Unordered vertex pair -> edge index"""
        return {
            frozenset((int(s), int(n))): a for a, (s, n) in enumerate(self.edge_vertices)
        }

    def find_edge(self, p: int, q: int) -> Optional[int]:
        return self.edge_lookup.get(frozenset((p, q)))

    def other_cell(self, a: int, c: int) -> Optional[int]:
        K, L = (int(i) for i in self.edge_cells[a])
        other = L if K == c else K
        return None if other == NO_CELL else other

    def opposite_vertex(self, c: int, a: int) -> int:
        """Vertex of cell c that is not an endpoint of edge a"""
        local = int(np.flatnonzero(self.cell_edges[c] == a)[0])
        return int(self.cell_vertices[c, local])

    # -- geometry caches ---------------------------------------------------------------
    @cached_property
    def cell_points(self) -> NDArray[np.float64]:
        """(F, 3, 2) vertex coordinates per cell"""
        return self.vertices[self.cell_vertices]

    @cached_property
    def signed_areas(self) -> NDArray[np.float64]:
        p = self.cell_points
        d1 = p[:, 1] - p[:, 0]
        d2 = p[:, 2] - p[:, 0]
        return 0.5 * (d1[:, 0] * d2[:, 1] - d1[:, 1] * d2[:, 0])

    @cached_property
    def areas(self) -> NDArray[np.float64]:
        return np.abs(self.signed_areas)

    @cached_property
    def centroids(self) -> NDArray[np.float64]:
        return self.cell_points.mean(axis=1)

    @cached_property
    def circumcenters(self) -> NDArray[np.float64]:
        p = self.cell_points
        a, b, c = p[:, 0], p[:, 1], p[:, 2]
        d = 2.0 * (a[:, 0] * (b[:, 1] - c[:, 1]) + b[:, 0] * (c[:, 1] - a[:, 1])
                   + c[:, 0] * (a[:, 1] - b[:, 1]))
        na, nb, nc = (np.einsum("ij,ij->i", q, q) for q in (a, b, c))
        ux = (na * (b[:, 1] - c[:, 1]) + nb * (c[:, 1] - a[:, 1]) + nc * (a[:, 1] - b[:, 1])) / d
        uy = (na * (c[:, 0] - b[:, 0]) + nb * (a[:, 0] - c[:, 0]) + nc * (b[:, 0] - a[:, 0])) / d
        return np.column_stack([ux, uy])

    @cached_property
    def side_lengths(self) -> NDArray[np.float64]:
        """(F, 3) length of local edge i (opposite vertex i)"""
        p = self.cell_points
        return np.stack(
            [np.linalg.norm(p[:, (i + 2) % 3] - p[:, (i + 1) % 3], axis=1) for i in range(3)],
            axis=1,
        )

    @cached_property
    def diameters(self) -> NDArray[np.float64]:
        return self.side_lengths.max(axis=1)

    @cached_property
    def inradius_diameters(self) -> NDArray[np.float64]:
        return 4.0 * self.areas / self.side_lengths.sum(axis=1)

    @cached_property
    def gyration_radii_squared(self) -> NDArray[np.float64]:
        return (self.side_lengths ** 2).sum(axis=1) / 36.0

    @cached_property
    def edge_vectors(self) -> NDArray[np.float64]:
        return self.vertices[self.edge_vertices[:, 1]] - self.vertices[self.edge_vertices[:, 0]]

    @cached_property
    def edge_lengths(self) -> NDArray[np.float64]:
        return np.linalg.norm(self.edge_vectors, axis=1)

    @cached_property
    def edge_normals(self) -> NDArray[np.float64]:
        t = self.edge_vectors
        return np.column_stack([t[:, 1], -t[:, 0]]) / self.edge_lengths[:, None]

    @cached_property
    def edge_midpoints(self) -> NDArray[np.float64]:
        return 0.5 * (self.vertices[self.edge_vertices[:, 0]] + self.vertices[self.edge_vertices[:, 1]])

    @property
    def mesh_size(self) -> float:
        return float(self.diameters.max())


@dataclass(frozen=True)
class EdgeNeighborhood:
    """Six-triangle frame around one interior edge a = (S, N).

    K = (S, N, W), L = (N, S, E); M = (N, E, A) across E-N, P = (W, N, B) across N-W,
    Q = (S, W, C) across W-S, R = (E, S, D) across S-E. Outer triangles (and their far
    vertices) are None when the outer edge lies on the boundary.
    """
    edge: int
    S: int
    N: int
    W: int
    E: int
    K: int
    L: int
    A: Optional[int] = None
    B: Optional[int] = None
    C: Optional[int] = None
    D: Optional[int] = None
    M: Optional[int] = None
    P: Optional[int] = None
    Q: Optional[int] = None
    R: Optional[int] = None
    is_reversed: bool = field(default=False, compare=False)

    @property
    def complete(self) -> bool:
        return None not in (self.M, self.P, self.Q, self.R)

    @property
    def triangles(self) -> tuple[Optional[int], ...]:
        return (self.K, self.L, self.M, self.P, self.Q, self.R)

    def reversed(self) -> "EdgeNeighborhood":
        """Same neighborhood seen from the reversed edge (N, S)"""
        return EdgeNeighborhood(
            edge=self.edge,
            S=self.N, N=self.S, W=self.E, E=self.W, K=self.L, L=self.K,
            A=self.C, B=self.D, C=self.A, D=self.B,
            M=self.Q, P=self.R, Q=self.M, R=self.P,
            is_reversed=not self.is_reversed,
        )
