import numpy as np
import pytest

from src.core.stencil import (
    assemble_constraints,
    flux_weights,
    frame_constraints,
    frame_from_points,
    gradient_six_point,
    neighborhood_frame,
    nullspace_basis,
    numerical_rank,
    residual_bounds,
    solve_stencil,
    stencil_for_edge,
    stencil_table,
)
from src.core.topology import build_structured, edge_neighborhood
from src.models.schemas.stencil import ClosureRule, ConstraintSystem, StencilCoefficients
from src.stores.schemes.SchemeEnums import ClosureEnum
from src.utils.errors import IncompleteNeighborhoodError, InvalidClosureError, RankDeficiencyError

# Stencils of the three interior edge directions of build_structured(n), split (i,j)-(i+1,j+1)
EXPECTED = {
    "minnorm": {
        "vertical": (0.75, 0.125, -0.625, -0.125, 0.625),
        "diagonal": (1.5, 0.75, -0.75, -0.75, 0.75),
        "horizontal": (0.75, 0.625, -0.125, -0.625, 0.125),
    },
    "minouter": {
        "vertical": (1.5, -0.25, -0.25, 0.25, 0.25),
        "diagonal": (3.0, 0.0, 0.0, 0.0, 0.0),
        "horizontal": (1.5, 0.25, 0.25, -0.25, -0.25),
    },
}


def direction(mesh, a) -> str:
    dx, dy = np.abs(mesh.edge_vectors[a])
    if dx < 1e-12:
        return "vertical"
    if dy < 1e-12:
        return "horizontal"
    return "diagonal"


def complete_edges(mesh):
    return [int(a) for a in mesh.interior_edges if edge_neighborhood(mesh, int(a)).complete]


def test_min_norm_constraints_hold(mesh6):
    edges = complete_edges(mesh6)
    assert edges
    for a in edges:
        sys = assemble_constraints(mesh6, edge_neighborhood(mesh6, a))
        c = solve_stencil(sys, "minnorm")
        bound_first, bound_second = residual_bounds(sys, 1e-10)
        assert c.residual_first <= bound_first
        assert c.residual_second <= bound_second
        assert c.nullspace_dim == 2


@pytest.mark.parametrize("closure", ["minnorm", "minouter", "fixed:0.3,-0.7"])
def test_affine_fields_are_exact(mesh6, jittered6, rng, closure):
    for mesh in (mesh6, jittered6):
        rows = stencil_table(mesh, closure)
        g_cells = mesh.centroids
        for _ in range(10):
            grad = rng.normal(size=2)
            u = rng.normal() + g_cells @ grad
            for a, c in rows:
                nb = edge_neighborhood(mesh, a)
                flux = gradient_six_point(c, *(u[t] for t in nb.triangles))
                exact = mesh.edge_lengths[a] * (grad @ mesh.edge_normals[a])
                scale = mesh.edge_lengths[a] * np.linalg.norm(grad)
                assert abs(flux - exact) <= 1e-10 * scale


@pytest.mark.parametrize("closure", ["minnorm", "minouter"])
def test_structured_stencils(closure):
    mesh = build_structured(6)
    seen = set()
    for a, c in stencil_table(mesh, closure):
        kind = direction(mesh, a)
        np.testing.assert_allclose(c.as_array(), EXPECTED[closure][kind], atol=1e-10)
        seen.add(kind)
    assert seen == {"vertical", "diagonal", "horizontal"}


@pytest.mark.parametrize("closure", ["minnorm", "minouter"])
def test_reversed_frame_gives_antisymmetric_flux(jittered6, closure):
    for a in complete_edges(jittered6):
        frame = neighborhood_frame(jittered6, edge_neighborhood(jittered6, a))
        c = solve_stencil(frame_constraints(frame), closure)
        r = solve_stencil(frame_constraints(frame.reversed()), closure)
        expected = [c.eta, -c.gamma, -c.delta, -c.alpha, -c.beta]
        np.testing.assert_allclose(r.as_array(), expected, atol=1e-9 * np.abs(c.as_array()).max())


def test_symmetric_neighborhood():
    frame = frame_from_points(S=(0, -1), N=(0, 1), W=(-1, 0), E=(1, 0),
                              A=(1.2, 1.2), B=(-1.2, 1.2), C=(-1.2, -1.2), D=(1.2, -1.2))
    c = solve_stencil(frame_constraints(frame), "minnorm")
    assert c.delta == pytest.approx(c.alpha, abs=1e-12)
    assert c.gamma == pytest.approx(c.beta, abs=1e-12)
    assert c.beta == pytest.approx(-c.alpha, abs=1e-12)


def test_scaling_does_not_change_the_stencil(jittered6):
    a = complete_edges(jittered6)[0]
    frame = neighborhood_frame(jittered6, edge_neighborhood(jittered6, a))
    c = solve_stencil(frame_constraints(frame))
    scaled = solve_stencil(frame_constraints(frame.scaled(1e-3, origin=frame.S)))
    np.testing.assert_allclose(scaled.as_array(), c.as_array(), rtol=1e-9, atol=1e-12)


def test_fixed_closure_moves_along_the_kernel(jittered6):
    a = complete_edges(jittered6)[0]
    sys = assemble_constraints(jittered6, edge_neighborhood(jittered6, a))
    base = solve_stencil(sys, "minnorm").as_array()
    moved = solve_stencil(sys, "fixed:0.5,-1").as_array()
    assert np.linalg.norm(moved - base) == pytest.approx(np.hypot(0.5, 1.0), rel=1e-12)
    Z = nullspace_basis(sys)
    assert Z.shape == (5, 2)
    np.testing.assert_allclose(sys.matrix @ Z, 0.0, atol=1e-12)


def test_min_outer_has_smallest_outer_fluxes(jittered6, rng):
    a = complete_edges(jittered6)[0]
    sys = assemble_constraints(jittered6, edge_neighborhood(jittered6, a))
    best = np.linalg.norm(solve_stencil(sys, "minouter").as_array()[1:])
    for t in rng.normal(size=(20, 2)):
        other = solve_stencil(sys, ClosureRule(ClosureEnum.FIXED, tuple(t))).as_array()
        assert best <= np.linalg.norm(other[1:]) + 1e-12


def test_flux_weights_sum_to_zero(mesh6):
    for _, c in stencil_table(mesh6):
        assert sum(flux_weights(c).values()) == pytest.approx(0.0, abs=1e-12)


def test_table_lists_complete_edges_only(mesh6):
    assert [a for a, _ in stencil_table(mesh6)] == complete_edges(mesh6)


def test_incomplete_neighborhood(mesh2):
    a = next(int(a) for a in mesh2.interior_edges if not edge_neighborhood(mesh2, int(a)).complete)
    with pytest.raises(IncompleteNeighborhoodError) as info:
        stencil_for_edge(mesh2, a)
    assert info.value.edge == a


def test_rank_deficient_system(mesh6):
    a = complete_edges(mesh6)[0]
    frame = neighborhood_frame(mesh6, edge_neighborhood(mesh6, a))
    matrix = np.array([[1.0, 0, 0, 0, 0], [0, 1.0, 0, 0, 0], [1.0, 1.0, 0, 0, 0]])
    sys = ConstraintSystem(matrix=matrix, rhs=np.ones(3), frame=frame)
    with pytest.raises(RankDeficiencyError) as info:
        solve_stencil(sys)
    assert info.value.edge == a
    assert info.value.ratio < 1e-10
    assert nullspace_basis(sys).shape == (5, 3)


def test_numerical_rank():
    sigma = np.array([2.0, 1e-3, 1e-12])
    assert numerical_rank(sigma) == 2
    assert numerical_rank(sigma, 1e-2) == 1
    assert numerical_rank(np.zeros(3)) == 0


@pytest.mark.parametrize("text, kind, t", [
    ("minnorm", ClosureEnum.MIN_NORM, (0.0, 0.0)),
    ("MinOuter", ClosureEnum.MIN_OUTER, (0.0, 0.0)),
    ("fixed:1.5,-2", ClosureEnum.FIXED, (1.5, -2.0)),
])
def test_closure_parsing(text, kind, t):
    rule = ClosureRule.parse(text)
    assert rule.kind == kind
    assert rule.t == t
    assert ClosureRule.parse(str(rule)) == rule


@pytest.mark.parametrize("text", ["bogus", "fixed:1", "fixed:a,b", "minnorm:1,2", "fixed:inf,0"])
def test_invalid_closures(text):
    with pytest.raises(InvalidClosureError):
        ClosureRule.parse(text)


def test_with_values_keeps_residuals():
    c = StencilCoefficients(1.0, 2.0, 3.0, 4.0, 5.0, residual_first=1e-15, residual_second=2e-15)
    d = c.with_values(eta=0.0)
    assert d.as_array().tolist() == [0.0, 2.0, 3.0, 4.0, 5.0]
    assert d.residual_second == 2e-15
