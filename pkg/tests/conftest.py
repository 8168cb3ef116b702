import numpy as np
import pytest

from src.core.topology import build_structured, mesh_from_cells
from src.models.schemas.mesh import Mesh
from src.utils.config import Config


def jittered(n: int, amplitude: float = 0.1, seed: int = 0) -> Mesh:
    """build_structured(n) with interior vertices moved by up to amplitude*h per coordinate"""
    base = build_structured(n)
    rng = np.random.default_rng(seed)
    vertices = base.vertices.copy()
    x, y = vertices[:, 0], vertices[:, 1]
    interior = (x > 0) & (x < 1) & (y > 0) & (y < 1)
    vertices[interior] += rng.uniform(-amplitude, amplitude, (interior.sum(), 2)) / n
    return mesh_from_cells(vertices, base.cell_vertices)


def annulus() -> Mesh:
    """Eight triangles around a square hole: a valid complex with Euler characteristic 0"""
    outer = [(0, 0), (3, 0), (3, 3), (0, 3)]
    inner = [(1, 1), (2, 1), (2, 2), (1, 2)]
    cells = []
    for k in range(4):
        o, o1, i, i1 = k, (k + 1) % 4, 4 + k, 4 + (k + 1) % 4
        cells += [(o, o1, i1), (o, i1, i)]
    return mesh_from_cells(np.array(outer + inner, dtype=float), cells)


def obtuse_pair() -> Mesh:
    """Two flat triangles on a common edge; both circumcenters lie beyond it"""
    vertices = np.array([(0.0, 0.0), (2.0, 0.0), (1.0, 0.2), (1.0, -0.2)])
    return mesh_from_cells(vertices, [(0, 1, 2), (1, 0, 3)])


@pytest.fixture
def settings():
    return Config()


@pytest.fixture
def rng():
    return np.random.default_rng(20240531)


@pytest.fixture(scope="session")
def mesh2():
    return build_structured(2)


@pytest.fixture(scope="session")
def mesh6():
    return build_structured(6)


@pytest.fixture(scope="session")
def jittered6():
    return jittered(6)


@pytest.fixture
def unit_square_files(tmp_path):
    """The two-triangle unit square as a .node/.ele pair"""
    node = tmp_path / "square.node"
    ele = tmp_path / "square.ele"
    node.write_text("4 2 0 0\n1 0 0\n2 1 0\n3 0 1\n4 1 1\n")
    ele.write_text("2 3 0\n1 1 2 4\n2 1 4 3\n")
    return node, ele
