"""Command-line entry point: solve, converge, stencil, validate, infsup and serve"""
import argparse
import sys
from pathlib import Path
from typing import Optional, Sequence

import uvicorn

from src.controllers.HarnessController import HarnessController
from src.controllers.MeshController import MeshController
from src.controllers.SolveController import SolveController
from src.controllers.StencilController import StencilController
from src.stores.schemes.SchemeEnums import CaseEnum, SchemeEnum, SplitEnum
from src.utils.config import config
from src.utils.errors import DualFluxError, UsageError
from src.utils.helpers import format_float, parse_int_list
from src.utils.logger import get_logger, get_uvicorn_log_config, setup_logging
from src.utils.metrics import metrics_text

logger = get_logger(__name__)


class ArgumentParser(argparse.ArgumentParser):
    """Parser whose usage errors surface as UsageError (exit code 1)"""

    def error(self, message: str):
        raise UsageError(message)


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--quiet", action="store_true", help="Only log errors")
    parser.add_argument("--log-level", default=None, help="Logging level (default from LOG_LEVEL)")
    parser.add_argument("--metrics", default=None, help="Write the Prometheus text exposition to this path")


def _add_mesh(parser: argparse.ArgumentParser) -> None:
    group = parser.add_mutually_exclusive_group()
    group.add_argument("--n", type=int, default=None, help="Structured n x n mesh of the unit square")
    group.add_argument("--mesh", default=None, help="Mesh files as <node>,<ele>")
    parser.add_argument("--split", choices=[s.value for s in SplitEnum], default=None)


def build_parser() -> ArgumentParser:
    parser = ArgumentParser(prog="dualflux", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=ArgumentParser)

    solve = sub.add_parser("solve", help="Solve one manufactured problem")
    _add_mesh(solve)
    solve.add_argument("--scheme", choices=[s.value for s in SchemeEnum], required=True)
    solve.add_argument("--case", default=CaseEnum.SINSIN.value)
    solve.add_argument("--closure", default=None, help="minnorm, minouter or fixed:t1,t2")
    solve.add_argument("--out", default=None, help="Cell table CSV; fluxes go to <stem>_fluxes.csv")
    solve.add_argument("--json", default=None, help="Write the solve summary as JSON")
    _add_common(solve)

    converge = sub.add_parser("converge", help="Convergence study on structured meshes")
    converge.add_argument("--scheme", choices=[s.value for s in SchemeEnum], required=True)
    converge.add_argument("--case", default=CaseEnum.SINSIN.value)
    converge.add_argument("--closure", default=None)
    converge.add_argument("--split", choices=[s.value for s in SplitEnum], default=None)
    converge.add_argument("--levels", default="8,16,32,64")
    converge.add_argument("--json", default=None, help="Write the convergence report as JSON")
    _add_common(converge)

    stencil = sub.add_parser("stencil", help="Export six-point stencils of all complete interior edges")
    _add_mesh(stencil)
    stencil.add_argument("--closure", default=None)
    stencil.add_argument("--out", default=None)
    _add_common(stencil)

    validate = sub.add_parser("validate", help="Check mesh invariants")
    _add_mesh(validate)
    _add_common(validate)

    infsup = sub.add_parser("infsup", help="Inf-sup estimate of the Galerkin RT0 x P0 pair")
    _add_mesh(infsup)
    _add_common(infsup)

    serve = sub.add_parser("serve", help="Run the HTTP API")
    serve.add_argument("--host", default=config.api_host)
    serve.add_argument("--port", type=int, default=config.api_port)
    _add_common(serve)

    return parser


def _emit(*lines: str) -> None:
    for line in lines:
        print(line)


def run_solve(args) -> int:
    mesh = MeshController().resolve(args.n, args.mesh, args.split)
    controller = SolveController()
    sol, summary = controller.solve(mesh, args.scheme, args.case, args.closure)
    if args.out:
        controller.write_solution(mesh, sol, args.out)
    if args.json:
        controller.report_model.write_json(summary, args.json)
    _emit(*(f"{key} = {format_float(value) if isinstance(value, float) else value}"
            for key, value in summary.model_dump().items()))
    return 0


def run_converge(args) -> int:
    controller = HarnessController()
    report = controller.convergence_study(
        args.scheme, args.case, parse_int_list(args.levels), args.closure, args.split
    )
    if args.json:
        controller.write_report(report, args.json)
    lines = ["n,h,e_u,e_p,e_div,e_V,e_cell,seconds"]
    lines += [",".join(format_float(v) if isinstance(v, float) else str(v) for v in level.model_dump().values())
              for level in report.levels]
    lines += [f"rate {key} = {value:.4f}" for key, value in report.rates.model_dump().items()]
    lines += [f"flag: {flag}" for flag in report.flags]
    _emit(*lines)
    return 0


def run_stencil(args) -> int:
    mesh = MeshController().resolve(args.n, args.mesh, args.split)
    controller = StencilController()
    rows = controller.table(mesh, args.closure)
    if args.out:
        controller.export(rows, args.out)
    gaps = controller.momenta_discrepancies(mesh, rows)
    _emit(f"stencils = {len(rows)}", *(f"max {key} gap = {value:.3e}" for key, value in gaps.items()))
    return 0


def run_validate(args) -> int:
    controller = MeshController()
    report = controller.validate(controller.resolve(args.n, args.mesh, args.split))
    if report:
        _emit(*report)
        return 2
    _emit("ok")
    return 0


def run_infsup(args) -> int:
    harness = HarnessController()
    if args.n is not None and args.mesh is None:
        value = harness.structured_infsup(args.n, args.split)
    else:
        value = harness.infsup(MeshController().resolve(args.n, args.mesh, args.split))
    _emit(f"infsup = {format_float(value)}")
    return 0


def run_serve(args) -> int:
    uvicorn.run(
        "src.core.app:create_app",
        factory=True,
        host=args.host,
        port=args.port,
        reload=config.debug,
        log_config=get_uvicorn_log_config(args.log_level),
    )
    return 0


COMMANDS = {
    "solve": run_solve,
    "converge": run_converge,
    "stencil": run_stencil,
    "validate": run_validate,
    "infsup": run_infsup,
    "serve": run_serve,
}


def cli_main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Run one CLI command.

    Returns:
        0 on success, 1 on usage errors, 2 on numerical failures or mesh violations
    """
    try:
        args = build_parser().parse_args(argv)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code
    except SystemExit as e:
        return int(e.code or 0)

    setup_logging("ERROR" if args.quiet else args.log_level, stream=sys.stderr)
    try:
        code = COMMANDS[args.command](args)
    except DualFluxError as e:
        logger.debug("Command failed", exc_info=True)
        print(f"error: {e}", file=sys.stderr)
        code = e.exit_code
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        code = UsageError.exit_code

    if args.metrics:
        path = Path(args.metrics)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(metrics_text())
    return code


def main():
    """Console script entry point"""
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
