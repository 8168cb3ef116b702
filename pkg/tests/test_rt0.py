import numpy as np
import pytest
import scipy.sparse as sps

from src.core.rt0 import (
    cell_divergence,
    cell_field,
    div_basis,
    divergence_matrix,
    eval_basis,
    eval_field,
    flux_dof,
    interpolate_hdiv,
    local_basis,
    locate,
    mass_matrix,
)
from src.core.topology import build_structured


def test_flux_duality():
    mesh = build_structured(3)
    E = mesh.num_edges
    duality = np.empty((E, E))
    for a in range(E):
        unit = np.zeros(E)
        unit[a] = 1.0
        for b in range(E):
            duality[b, a] = flux_dof(mesh, b, unit)
    np.testing.assert_allclose(duality, np.eye(E), atol=1e-12)


def test_constant_field_is_reproduced(jittered6):
    mesh = jittered6
    q = interpolate_hdiv(mesh, lambda x, y: (1.0, -2.0))
    np.testing.assert_allclose(q, mesh.edge_lengths * (mesh.edge_normals @ [1.0, -2.0]), atol=1e-14)
    values = cell_field(mesh, q, np.arange(mesh.num_cells), mesh.cell_points)
    np.testing.assert_allclose(values, np.broadcast_to([1.0, -2.0], values.shape), atol=1e-12)
    np.testing.assert_allclose(cell_divergence(mesh, q), 0.0, atol=1e-11)


def test_radial_field_is_reproduced(jittered6):
    mesh = jittered6
    q = interpolate_hdiv(mesh, lambda x, y: (x, y))
    np.testing.assert_allclose(cell_divergence(mesh, q), 2.0, rtol=1e-12)
    np.testing.assert_allclose(divergence_matrix(mesh) @ q, 2.0 * mesh.areas, rtol=1e-12)
    values = cell_field(mesh, q, np.arange(mesh.num_cells), mesh.cell_points)
    np.testing.assert_allclose(values, mesh.cell_points, atol=1e-12)


def test_mass_matrix(jittered6):
    mesh = jittered6
    M = mass_matrix(mesh)
    assert M.shape == (mesh.num_edges, mesh.num_edges)
    np.testing.assert_allclose((M - M.T).toarray(), 0.0, atol=1e-14)
    assert np.linalg.eigvalsh(M.toarray()).min() > 0
    q = interpolate_hdiv(mesh, lambda x, y: (1.0, 2.0))
    assert q @ (M @ q) == pytest.approx(5.0, rel=1e-12)
    r = interpolate_hdiv(mesh, lambda x, y: (x, y))
    assert r @ (M @ r) == pytest.approx(2.0 / 3.0, rel=1e-12)


def test_divergence_matrix_entries(mesh2):
    B = divergence_matrix(mesh2).toarray()
    assert B.shape == (mesh2.num_cells, mesh2.num_edges)
    for a in range(mesh2.num_edges):
        K, L = mesh2.edge_cells[a]
        column = B[:, a]
        assert column[K] == 1.0
        if L >= 0:
            assert column[L] == -1.0
        assert np.count_nonzero(column) == (2 if L >= 0 else 1)
        assert div_basis(mesh2, a, K) == pytest.approx(1.0 / mesh2.areas[K])


def test_basis_normal_flux_on_its_edge(mesh2):
    a = int(mesh2.interior_edges[0])
    K = int(mesh2.edge_cells[a, 0])
    midpoint = mesh2.edge_midpoints[a]
    assert eval_basis(mesh2, a, midpoint) @ mesh2.edge_normals[a] == pytest.approx(1.0 / mesh2.edge_lengths[a])
    inside_k = 0.5 * (midpoint + mesh2.centroids[K])
    local = int(np.flatnonzero(mesh2.cell_edges[K] == a)[0])
    expected = (inside_k - mesh2.cell_points[K, local]) / (2 * mesh2.areas[K])
    np.testing.assert_allclose(eval_basis(mesh2, a, inside_k), expected)


def test_point_location():
    mesh = build_structured(1)
    assert locate(mesh, (0.75, 0.1)) == 0
    assert locate(mesh, (0.1, 0.75)) == 1
    assert locate(mesh, (0.5, 0.5)) == 0
    assert locate(mesh, (1.5, 0.5)) is None
    np.testing.assert_array_equal(eval_field(mesh, np.ones(mesh.num_edges), (2.0, 2.0)), [0.0, 0.0])


def test_normal_component_is_continuous(jittered6, rng):
    mesh = jittered6
    for a in mesh.interior_edges:
        K, L = (int(c) for c in mesh.edge_cells[a])
        local_k = int(np.flatnonzero(mesh.cell_edges[K] == a)[0])
        local_l = int(np.flatnonzero(mesh.cell_edges[L] == a)[0])
        S, N = mesh.vertices[mesh.edge_vertices[a]]
        n = mesh.edge_normals[a]
        for t in rng.uniform(0, 1, 3):
            x = S + t * (N - S)
            jump = (local_basis(mesh, K, local_k, x) - local_basis(mesh, L, local_l, x)) @ n
            assert abs(jump) <= 1e-12


def test_basis_vanishes_at_the_opposite_vertex_and_away_from_its_cells(mesh2):
    for a in mesh2.interior_edges:
        K, L = mesh2.edge_cells[a]
        local = int(np.flatnonzero(mesh2.cell_edges[K] == a)[0])
        W = mesh2.cell_points[K, local]
        np.testing.assert_allclose(eval_basis(mesh2, a, W), 0.0, atol=1e-15)
        other = next(c for c in range(mesh2.num_cells) if c not in (K, L))
        np.testing.assert_array_equal(eval_basis(mesh2, a, mesh2.centroids[other]), [0.0, 0.0])


def test_mass_matrix_couples_edges_of_a_common_cell(jittered6):
    mesh = jittered6
    F, E = mesh.num_cells, mesh.num_edges
    incidence = sps.coo_matrix(
        (np.ones(3 * F), (np.repeat(np.arange(F), 3), mesh.cell_edges.ravel())), shape=(F, E)
    ).tocsr()
    expected = (incidence.T @ incidence).toarray() != 0
    actual = np.abs(mass_matrix(mesh).toarray()) > 0
    np.testing.assert_array_equal(actual, expected)
