import numpy as np
import pytest
from pydantic import ValidationError

from src.controllers.HarnessController import HarnessController, check_levels, fit_rates
from src.controllers.MeshController import MeshController
from src.controllers.SolveController import SolveController
from src.core.infsup import estimate_infsup, structured_size
from src.core.norms import error_norms, exact_data_solution, fit_rate
from src.core.topology import build_structured, renumber
from src.models.schemas.cases import mms_case
from src.models.schemas.report import ConvergenceReport, LevelRecord
from src.models.schemas.solution import DiscreteSolution
from src.stores.schemes.SchemeEnums import CaseEnum
from src.utils.config import Config
from src.utils.errors import ConvergenceLevelError, SizeLimitError, UnknownCaseError, UsageError


def test_cases_satisfy_the_equation():
    x = np.array([0.2, 0.5, 0.7])
    y = np.array([0.3, 0.5, 0.9])
    sinsin = mms_case("SinSin")
    assert sinsin.name == CaseEnum.SINSIN
    np.testing.assert_allclose(sinsin.f(x, y), 2 * np.pi ** 2 * sinsin.u(x, y))
    bubble = mms_case("bubble")
    np.testing.assert_allclose(bubble.u(0.5, 0.5), 1 / 16)
    np.testing.assert_allclose(bubble.f(0.5, 0.5), 1.0)
    np.testing.assert_allclose(bubble.p(0.5, 0.5), (0.0, 0.0))
    assert np.all(mms_case("zero").f(x, y) == 0.0)


def test_unknown_case():
    with pytest.raises(UnknownCaseError) as info:
        mms_case("cosine")
    assert info.value.exit_code == 1


def test_zero_solution_errors_are_the_exact_norms():
    mesh = build_structured(16)
    zero = DiscreteSolution(u=np.zeros(mesh.num_cells), p=np.zeros(mesh.num_edges), scheme=None)
    norms = error_norms(mesh, zero, mms_case("sinsin"))
    assert norms.e_u == pytest.approx(0.5, rel=1e-4)
    assert norms.e_p == pytest.approx(np.pi / np.sqrt(2), rel=1e-4)
    assert norms.e_div == pytest.approx(np.pi ** 2, rel=1e-4)
    assert norms.e_V ** 2 == pytest.approx(norms.e_u ** 2 + norms.e_p ** 2 + norms.e_div ** 2)
    assert error_norms(mesh, zero, mms_case("zero")) == (0.0, 0.0, 0.0, 0.0)


def test_projections_converge_at_first_order():
    case = mms_case("sinsin")
    levels = [4, 8, 16]
    meshes = [build_structured(n) for n in levels]
    norms = [error_norms(m, exact_data_solution(m, case), case) for m in meshes]
    h = [m.mesh_size for m in meshes]
    for metric in ("e_u", "e_p", "e_div"):
        rate = fit_rate(h, [getattr(e, metric) for e in norms])
        assert 0.8 <= rate <= 1.3, metric


def test_errors_do_not_depend_on_numbering(settings, rng):
    mesh = build_structured(4)
    other = renumber(mesh, rng.permutation(mesh.num_vertices))
    controller = SolveController(settings)
    _, a = controller.solve(mesh, "mixed", "sinsin")
    _, b = controller.solve(other, "mixed", "sinsin")
    for metric in ("e_u", "e_p", "e_div", "e_V"):
        assert getattr(b, metric) == pytest.approx(getattr(a, metric), rel=1e-9)


def test_fit_rate():
    h = np.array([1 / 4, 1 / 8, 1 / 16])
    assert fit_rate(h, h ** 2) == pytest.approx(2.0)
    assert fit_rate(h, [1.0, 0.0, 0.0]) == 0.0
    assert fit_rate(h[:1], [1.0]) == 0.0


def records(**metrics):
    ns = [4, 8, 16, 32]
    return [
        LevelRecord(n=n, h=1 / n, **{m: values[i] for m, values in metrics.items()})
        for i, n in enumerate(ns)
    ]


def test_fit_rates_flags_growth():
    rates, flags = fit_rates(records(
        e_u=[1.0, 2.0, 1.0, 0.5],
        e_p=[1.0, 0.5, 0.25, 0.125],
        e_div=[1.0, 0.5, 0.6, 0.3],
        e_V=[1.0, 0.5, 0.25, 0.125],
        e_cell=[1.0, 0.25, 0.0625, 0.015625],
    ))
    assert rates.e_u == pytest.approx(1.0)
    assert rates.e_p == pytest.approx(1.0)
    assert rates.e_cell == pytest.approx(2.0)
    assert flags == [
        "e_u: non-monotone at coarsest level n=4, excluded from rate fit",
        "e_div: non-monotone at level n=16",
    ]


@pytest.mark.parametrize("levels", [[8, 16], [8, 8, 16], [0, 1, 2], [16, 8, 32]])
def test_bad_levels(levels):
    with pytest.raises(UsageError):
        check_levels(levels)


def test_study_rejects_bad_names(settings):
    controller = HarnessController(settings)
    with pytest.raises(UsageError):
        controller.convergence_study("fem", "sinsin", [2, 4, 8])
    with pytest.raises(UnknownCaseError):
        controller.convergence_study("mixed", "cosine", [2, 4, 8])
    with pytest.raises(UsageError):
        controller.convergence_study("mixed", "sinsin", [2, 4, 8], split="zigzag")


def test_failed_level_carries_its_size():
    controller = HarnessController(Config(saddle_solver="schur", iterative_maxiter=1))
    with pytest.raises(ConvergenceLevelError) as info:
        controller.convergence_study("mixed", "sinsin", [4, 8, 16])
    assert info.value.n == 4
    assert info.value.exit_code == 2
    assert "n=4" in str(info.value)


def test_study_report(settings):
    report = HarnessController(settings).convergence_study("tpfa", "bubble", [2, 4, 8], split="antidiagonal")
    assert report.scheme == "tpfa"
    assert report.case == "bubble"
    assert report.split == "antidiagonal"
    assert report.closure is None
    assert [level.n for level in report.levels] == [2, 4, 8]
    assert [level.h for level in report.levels] == pytest.approx([np.sqrt(2) / n for n in (2, 4, 8)])


def test_report_round_trip(settings, tmp_path):
    controller = HarnessController(settings)
    report = controller.convergence_study("mixed", "sinsin", [2, 4, 8])
    path = controller.write_report(report, tmp_path / "out" / "report.json")
    assert controller.read_report(path) == report


def test_report_requires_decreasing_sizes():
    levels = [LevelRecord(n=n, h=h, e_u=1, e_p=1, e_div=1, e_V=1) for n, h in ((4, 0.25), (8, 0.25))]
    with pytest.raises(ValidationError):
        ConvergenceReport(scheme="mixed", case="sinsin", levels=levels,
                          rates={"e_u": 1, "e_p": 1, "e_div": 1, "e_V": 1})


def test_infsup_is_bounded_below():
    values = [estimate_infsup(build_structured(n)) for n in (2, 4, 8)]
    assert all(v > 0 for v in values)
    assert values[-1] >= 0.8 * values[0]
    mu = 2 * np.pi ** 2
    assert values[-1] == pytest.approx(mu / (1 + mu), abs=0.02)


def test_infsup_does_not_depend_on_numbering(rng):
    mesh = build_structured(3)
    other = renumber(mesh, rng.permutation(mesh.num_vertices))
    assert estimate_infsup(other) == pytest.approx(estimate_infsup(mesh), rel=1e-9)


def test_infsup_size_limit(settings):
    with pytest.raises(SizeLimitError):
        HarnessController(settings).infsup(build_structured(4), max_size=50)
    with pytest.raises(SizeLimitError):
        estimate_infsup(build_structured(40))


def test_structured_size_matches_the_mesh():
    for n in (1, 3, 7):
        mesh = build_structured(n)
        assert structured_size(n) == mesh.num_edges + mesh.num_cells


def test_oversized_structured_infsup_is_rejected_before_meshing(settings, monkeypatch):
    def refuse(*args, **kwargs):
        raise AssertionError("mesh built for an oversized inf-sup request")

    monkeypatch.setattr(MeshController, "build_structured", refuse)
    with pytest.raises(SizeLimitError):
        HarnessController(settings).structured_infsup(600)
