import numpy as np
import pytest

from src.core.geometry import quality_theta, second_moment_about, signed_area, tri_geom, unit_normal
from src.core.quadrature import quadrature_triangle
from src.core.topology import build_structured
from src.utils.errors import DegenerateTriangleError


def test_right_triangle():
    tri = tri_geom((0, 0), (1, 0), (0, 1))
    assert tri.area == pytest.approx(0.5)
    np.testing.assert_allclose(tri.centroid, [1 / 3, 1 / 3])
    np.testing.assert_allclose(tri.circumcenter, [0.5, 0.5])
    assert tri.diameter == pytest.approx(np.sqrt(2))
    assert tri.inradius_diameter == pytest.approx(2 / (2 + np.sqrt(2)))
    assert tri.gyration_radius ** 2 == pytest.approx(4 / 36)


def test_orientation_does_not_change_area():
    assert signed_area((0, 0), (1, 0), (0, 1)) == pytest.approx(0.5)
    assert signed_area((0, 0), (0, 1), (1, 0)) == pytest.approx(-0.5)
    assert tri_geom((0, 0), (0, 1), (1, 0)).area == pytest.approx(0.5)


@pytest.mark.parametrize("points", [
    ((0, 0), (1, 0), (2, 0)),
    ((0, 0), (0, 0), (1, 1)),
    ((1, 1), (1, 1), (1, 1)),
])
def test_degenerate_triangles(points):
    with pytest.raises(DegenerateTriangleError):
        tri_geom(*points)


def test_non_finite_point():
    with pytest.raises(ValueError):
        tri_geom((0, 0), (np.nan, 0), (0, 1))


def test_unit_normal_points_right():
    np.testing.assert_allclose(unit_normal((0, 0), (2, 0)), [0, -1])
    np.testing.assert_allclose(unit_normal((0, 0), (0, 3)), [1, 0])


def test_second_moment_matches_quadrature(rng):
    checked = 0
    while checked < 100:
        p = rng.uniform(-2, 2, (3, 2))
        if abs(signed_area(*p)) < 1e-3:
            continue
        tri = tri_geom(*p)
        for vertex in p:
            exact = quadrature_triangle(
                lambda x, y: (x - vertex[0]) ** 2 + (y - vertex[1]) ** 2, tri, 2
            ) / tri.area
            assert second_moment_about(tri, vertex) == pytest.approx(exact, rel=1e-12)
        checked += 1


def test_mesh_caches_match_per_triangle_geometry(jittered6):
    mesh = jittered6
    for c in range(mesh.num_cells):
        tri = tri_geom(*mesh.cell_points[c])
        assert mesh.areas[c] == pytest.approx(tri.area, rel=1e-12)
        np.testing.assert_allclose(mesh.centroids[c], tri.centroid, atol=1e-14)
        np.testing.assert_allclose(mesh.circumcenters[c], tri.circumcenter, atol=1e-12)
        assert mesh.diameters[c] == pytest.approx(tri.diameter)
        assert mesh.gyration_radii_squared[c] == pytest.approx(tri.gyration_radius ** 2)
    assert mesh.areas.sum() == pytest.approx(1.0)


def test_quality_of_structured_meshes():
    for n in (1, 4, 9):
        assert quality_theta(build_structured(n)) == pytest.approx(1 + np.sqrt(2))


def test_edge_geometry(mesh6):
    lengths = np.linalg.norm(mesh6.edge_normals, axis=1)
    np.testing.assert_allclose(lengths, 1.0)
    dots = np.einsum("ij,ij->i", mesh6.edge_normals, mesh6.edge_vectors)
    np.testing.assert_allclose(dots, 0.0, atol=1e-15)
    assert mesh6.mesh_size == pytest.approx(np.sqrt(2) / 6)


def test_equilateral_triangle():
    s = 2.5
    tri = tri_geom((0, 0), (s, 0), (s / 2, s * np.sqrt(3) / 2))
    assert tri.quality == pytest.approx(np.sqrt(3))
    assert tri.gyration_radius == pytest.approx(s * np.sqrt(3) / 6)
    np.testing.assert_allclose(tri.circumcenter, tri.centroid, atol=1e-14)


def test_sliver_raises_quality():
    equilateral = tri_geom((0, 0), (1, 0), (0.5, np.sqrt(3) / 2))
    qualities = [tri_geom((0, 0), (1, 0), (0.5, height)).quality for height in (0.5, 0.1, 0.01)]
    assert equilateral.quality < qualities[0] < qualities[1] < qualities[2]


def test_quality_is_invariant_under_similarity(rng):
    p = np.array([(0.1, 0.2), (1.3, -0.4), (0.7, 0.9)])
    base = tri_geom(*p)
    for _ in range(10):
        angle = rng.uniform(0, 2 * np.pi)
        rotation = np.array([[np.cos(angle), -np.sin(angle)], [np.sin(angle), np.cos(angle)]])
        scale = rng.uniform(0.01, 100)
        shift = rng.uniform(-10, 10, 2)
        moved = tri_geom(*(scale * p @ rotation.T + shift))
        assert moved.quality == pytest.approx(base.quality, rel=1e-12)
        assert moved.diameter == pytest.approx(scale * base.diameter, rel=1e-12)
        assert moved.inradius_diameter == pytest.approx(scale * base.inradius_diameter, rel=1e-12)
