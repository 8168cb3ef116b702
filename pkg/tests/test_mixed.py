import numpy as np
import pytest

from src.controllers.HarnessController import HarnessController
from src.core.norms import conservation_check, conservation_tolerance
from src.models.schemas.cases import mms_case
from src.stores.schemes.providers.MixedProvider import (
    MixedProvider,
    assemble_mixed,
    mixed_residuals,
    recover_momentum,
)
from src.stores.schemes.SchemeEnums import SchemeEnum
from src.utils.config import Config

SINSIN = mms_case("sinsin")


def test_direct_solve_satisfies_both_equations(jittered6):
    provider = MixedProvider()
    sys = provider.assemble(jittered6, SINSIN.f)
    sol = provider.solve_saddle(sys)
    assert sol.scheme == SchemeEnum.MIXED
    assert sol.stats.method == "direct"
    r_p, r_u = mixed_residuals(sys, sol)
    assert r_p <= 1e-10
    assert r_u <= 1e-10
    np.testing.assert_allclose(recover_momentum(sys, sol.u), sol.p, atol=1e-10)


def test_conservation(jittered6):
    sol = MixedProvider().solve(jittered6, SINSIN.f)
    tolerance = conservation_tolerance(jittered6, SINSIN.f, sol.stats.iterative)
    assert conservation_check(jittered6, sol, SINSIN.f) <= tolerance.min()


def test_zero_source_gives_zero_solution(mesh6):
    sol = MixedProvider().solve(mesh6, mms_case("zero").f)
    assert np.all(sol.u == 0.0)
    assert np.all(sol.p == 0.0)


def test_schur_complement_matches_direct(jittered6):
    direct = MixedProvider("direct").solve(jittered6, SINSIN.f)
    schur = MixedProvider("schur").solve(jittered6, SINSIN.f)
    assert schur.stats.method == "schur-cg"
    assert schur.stats.iterative
    assert schur.stats.iterations > 0
    np.testing.assert_allclose(schur.u, direct.u, rtol=1e-7, atol=1e-9)
    np.testing.assert_allclose(schur.p, direct.p, rtol=1e-7, atol=1e-9)


def test_rhs_is_minus_cell_integral(mesh2):
    sys = assemble_mixed(mesh2, lambda x, y: np.ones_like(x))
    np.testing.assert_allclose(sys.rhs_f, -mesh2.areas)
    assert sys.M.shape == (mesh2.num_edges, mesh2.num_edges)
    assert sys.B.shape == (mesh2.num_cells, mesh2.num_edges)


def test_quick_rates(settings):
    report = HarnessController(settings).convergence_study("mixed", "sinsin", [4, 8, 16])
    assert 0.8 <= report.rates.e_V <= 1.3
    assert 0.8 <= report.rates.e_u <= 1.3


@pytest.mark.slow
def test_mixed_rate_on_sinsin():
    report = HarnessController(Config()).convergence_study("mixed", "sinsin", [8, 16, 32, 64])
    assert 0.9 <= report.rates.e_V <= 1.3
    assert 0.9 <= report.rates.e_u <= 1.3
    for metric in ("e_u", "e_V"):
        errors = [getattr(level, metric) for level in report.levels[1:]]
        assert all(b < a for a, b in zip(errors, errors[1:]))


def test_constant_cell_values_drive_boundary_fluxes(mesh2):
    sys = MixedProvider().assemble(mesh2, SINSIN.f)
    u = np.full(mesh2.num_cells, 2.0)
    load = sys.B.T @ u
    np.testing.assert_allclose(load[mesh2.interior_edges], 0.0, atol=1e-14)
    assert np.all(load[mesh2.is_boundary_edge] != 0.0)
    p = recover_momentum(sys, u)
    assert np.abs(p).max() > 0.0
    np.testing.assert_allclose(sys.M @ p, -load, atol=1e-12)
