"""Mesh data model for the ASCII .node/.ele triangulation format"""
from pathlib import Path

import numpy as np

from src.core.topology import mesh_from_cells
from src.models.schemas.mesh import Mesh
from src.utils.errors import MeshParseError
from .BaseDataModel import BaseDataModel


def _records(text: str) -> list[tuple[int, list[str]]]:
    """Non-empty lines with '#' comments stripped, paired with their 1-based line numbers"""
    out = []
    for number, line in enumerate(text.splitlines(), start=1):
        tokens = line.split("#", 1)[0].split()
        if tokens:
            out.append((number, tokens))
    return out


def _int(token: str, line: int, source: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise MeshParseError(f"expected an integer, got '{token}'", line, source) from None


def _float(token: str, line: int, source: str) -> float:
    try:
        value = float(token)
    except ValueError:
        raise MeshParseError(f"expected a number, got '{token}'", line, source) from None
    if not np.isfinite(value):
        raise MeshParseError(f"non-finite coordinate '{token}'", line, source)
    return value


def parse_node(text: str, source: str = "node") -> tuple[np.ndarray, int]:
    """
    Parse "V 2 nattr nmarker" then V lines "idx x y [attributes] [marker]".

    Returns:
        (V, 2) coordinates ordered by index, and the index base (0 or 1)
    """
    records = _records(text)
    if not records:
        raise MeshParseError("missing header", None, source)
    line, header = records[0]
    count = _int(header[0], line, source)
    if count < 3:
        raise MeshParseError(f"need at least 3 vertices, header declares {count}", line, source)
    if len(header) > 1 and _int(header[1], line, source) != 2:
        raise MeshParseError("only two-dimensional nodes are supported", line, source)
    body = records[1:]
    if len(body) != count:
        raise MeshParseError(f"header declares {count} vertices, found {len(body)}",
                             body[-1][0] if body else line, source)

    index = np.empty(count, dtype=np.int64)
    coords = np.empty((count, 2))
    for k, (line, tokens) in enumerate(body):
        if len(tokens) < 3:
            raise MeshParseError("expected 'idx x y'", line, source)
        index[k] = _int(tokens[0], line, source)
        coords[k] = (_float(tokens[1], line, source), _float(tokens[2], line, source))

    base = int(index.min())
    if base not in (0, 1) or not np.array_equal(np.sort(index), np.arange(base, base + count)):
        raise MeshParseError(f"vertex indices must be a permutation of 1..{count}", None, source)
    ordered = np.empty_like(coords)
    ordered[index - base] = coords
    return ordered, base


def parse_ele(text: str, num_vertices: int, base: int = 1, source: str = "ele") -> np.ndarray:
    """
    Parse "F 3 nattr" then F lines "idx v0 v1 v2 [attributes]".

    Returns:
        (F, 3) zero-based vertex indices ordered by triangle index
    """
    records = _records(text)
    if not records:
        raise MeshParseError("missing header", None, source)
    line, header = records[0]
    count = _int(header[0], line, source)
    if count < 1:
        raise MeshParseError(f"need at least one triangle, header declares {count}", line, source)
    if len(header) > 1 and _int(header[1], line, source) != 3:
        raise MeshParseError("only 3-node triangles are supported", line, source)
    body = records[1:]
    if len(body) != count:
        raise MeshParseError(f"header declares {count} triangles, found {len(body)}",
                             body[-1][0] if body else line, source)

    index = np.empty(count, dtype=np.int64)
    cells = np.empty((count, 3), dtype=np.int64)
    for k, (line, tokens) in enumerate(body):
        if len(tokens) < 4:
            raise MeshParseError("expected 'idx v0 v1 v2'", line, source)
        index[k] = _int(tokens[0], line, source)
        for j in range(3):
            v = _int(tokens[1 + j], line, source) - base
            if not 0 <= v < num_vertices:
                raise MeshParseError(
                    f"vertex index {v + base} outside {base}..{num_vertices - 1 + base}", line, source
                )
            cells[k, j] = v

    if not np.array_equal(np.sort(index), np.arange(index.min(), index.min() + count)):
        raise MeshParseError("triangle indices must be consecutive", None, source)
    order = np.argsort(index, kind="stable")
    return cells[order]


def format_node(mesh: Mesh) -> str:
    lines = [f"{mesh.num_vertices} 2 0 0"]
    lines += [f"{i + 1} {x:.17g} {y:.17g}" for i, (x, y) in enumerate(mesh.vertices)]
    return "\n".join(lines) + "\n"


def format_ele(mesh: Mesh) -> str:
    lines = [f"{mesh.num_cells} 3 0"]
    lines += [f"{c + 1} {a + 1} {b + 1} {d + 1}" for c, (a, b, d) in enumerate(mesh.cell_vertices)]
    return "\n".join(lines) + "\n"


class MeshModel(BaseDataModel):

    def __init__(self, root_dir: str | Path | None = None):
        super().__init__(root_dir=root_dir)

    @classmethod
    def create_instance(cls, root_dir: str | Path | None = None) -> "MeshModel":
        return cls(root_dir=root_dir)

    def load_mesh(self, node_text: str, ele_text: str, source: str = "mesh") -> Mesh:
        """
        Build a Mesh from .node and .ele texts.

        Raises:
            MeshParseError: On malformed text, with the offending line number
            TopologyError: If an edge has more than two cells or a cell is degenerate
        """
        vertices, base = parse_node(node_text, f"{source}.node")
        cells = parse_ele(ele_text, len(vertices), base, f"{source}.ele")
        return mesh_from_cells(vertices, cells, self.app_settings.degeneracy_tolerance)

    def save_mesh(self, mesh: Mesh) -> tuple[str, str]:
        """(.node text, .ele text) with 17 significant digits, 1-based indices"""
        return format_node(mesh), format_ele(mesh)

    def read_mesh_files(self, node_path: str | Path, ele_path: str | Path) -> Mesh:
        """
        Load a mesh from a .node/.ele file pair.

        Raises:
            MeshParseError: If a file is missing or malformed
        """
        node_path, ele_path = Path(node_path), Path(ele_path)
        for path in (node_path, ele_path):
            if not path.is_file():
                raise MeshParseError(f"no such file: {path}", None, str(path))
        return self.load_mesh(node_path.read_text(), ele_path.read_text(), str(node_path.with_suffix("")))

    def write_mesh_files(self, mesh: Mesh, node_path: str | Path, ele_path: str | Path) -> tuple[Path, Path]:
        node_text, ele_text = self.save_mesh(mesh)
        node_path, ele_path = self.resolve(node_path), self.resolve(ele_path)
        node_path.write_text(node_text)
        ele_path.write_text(ele_text)
        return node_path, ele_path
