"""
Command line front end: one subcommand per pipeline stage.
"""
import argparse
import sys
from enum import Enum
from pathlib import Path
from typing import Callable, Dict, List, Optional, TextIO

import numpy as np
from pydantic import BaseModel, ConfigDict, ValidationError

from hessian_lv.analysis.exponents import (Params, exponent_report,
                                           validate_params)
from hessian_lv.config import GRID_POINTS, TOOL_VERSION
from hessian_lv.dynamics.integrator import (IntegratorConfig, integrate_orbit,
                                            lambda_profile, level_crossings)
from hessian_lv.errors import DomainError, HessianLVError
from hessian_lv.io.protocol import OutputFormat, ResultDocument, ResultWriter
from hessian_lv.services.verify_service import VerifyService
from hessian_lv.solutions.branch import (bifurcation_diagram, count_solutions,
                                         default_grid, reconstruct_all)
from hessian_lv.utils.logger import setup_logger

logger = setup_logger(__name__)


class Subcommand(str, Enum):
    """Subcommands of the CLI."""
    EXPONENTS = "exponents"
    ORBIT = "orbit"
    BIFURCATION = "bifurcation"
    COUNT = "count"
    SOLVE = "solve"
    VERIFY = "verify"


class RunConfig(BaseModel):
    """Validated command line invocation."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    subcommand: Subcommand
    params: Params
    integrator: IntegratorConfig
    output_path: Optional[Path] = None
    format: OutputFormat = OutputFormat.CSV
    grid: int = GRID_POINTS


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with one subparser per Subcommand."""
    parser = argparse.ArgumentParser(
        prog="hessian-lv",
        description="Radial k-Hessian problems through their Lotka-Volterra phase plane",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {TOOL_VERSION}")
    subparsers = parser.add_subparsers(dest="subcommand", required=True)

    for command in Subcommand:
        sub = subparsers.add_parser(command.value)
        sub.add_argument("--n", type=int, required=True, help="Dimension n > 2k")
        sub.add_argument("--k", type=int, required=True, help="Hessian order k >= 1")
        sub.add_argument("--sigma", type=float, default=0.0, help="Weight exponent σ >= 0")
        sub.add_argument("--q", type=float, required=command != Subcommand.VERIFY,
                         help="Source exponent q > k (verify uses q*)")
        sub.add_argument("--lambda", dest="lam", type=float,
                         required=command in (Subcommand.COUNT, Subcommand.SOLVE),
                         help="Parameter λ > 0")
        sub.add_argument("--output", type=Path, default=None, help="Output path (default stdout)")
        sub.add_argument("--format", choices=[f.value for f in OutputFormat],
                         default=OutputFormat.CSV.value)
        sub.add_argument("--t-max", type=float, default=None)
        sub.add_argument("--rel-tol", type=float, default=None)
        sub.add_argument("--abs-tol", type=float, default=None)
        sub.add_argument("--max-steps", type=int, default=None)
        sub.add_argument("--grid", type=int, default=GRID_POINTS,
                         help="Grid size for bifurcation and solve")
    return parser


def to_run_config(args: argparse.Namespace) -> RunConfig:
    """
    Validate parsed arguments.

    Raises:
        DomainError: on any invalid numeric flag
    """
    # The verify subcommand defaults q to the critical exponent
    subcommand = Subcommand(args.subcommand)
    if subcommand == Subcommand.VERIFY and args.q is None:
        params = VerifyService(args.n, args.k, args.sigma).params
    else:
        params = validate_params(args.n, args.k, args.sigma, args.q, args.lam)

    # Only explicit flags override the environment defaults
    overrides = {
        "t_max": args.t_max,
        "rel_tol": args.rel_tol,
        "abs_tol": args.abs_tol,
        "max_steps": args.max_steps,
    }
    try:
        integrator = IntegratorConfig(**{key: value for key, value in overrides.items()
                                         if value is not None})
    except ValidationError as e:
        raise DomainError(f"invalid integrator flag: {e.errors()[0]['msg']}") from e
    if args.grid < 5:
        raise DomainError("--grid must be at least 5")

    return RunConfig(
        subcommand=subcommand,
        params=params,
        integrator=integrator,
        output_path=args.output,
        format=OutputFormat(args.format),
        grid=args.grid,
    )


class Application:
    """
    Dispatches a RunConfig to its handler and writes the results.
    """

    def __init__(self, stdout: Optional[TextIO] = None):
        """Initialize the application."""
        self.stdout = stdout or sys.stdout
        self.handlers: Dict[Subcommand, Callable[[RunConfig], int]] = {}
        self.setup_handlers()
        logger.debug("Application initialized")

    def setup_handlers(self) -> None:
        """Register one handler per subcommand."""
        self.register_handler(Subcommand.EXPONENTS, self.cmd_exponents)
        self.register_handler(Subcommand.ORBIT, self.cmd_orbit)
        self.register_handler(Subcommand.BIFURCATION, self.cmd_bifurcation)
        self.register_handler(Subcommand.COUNT, self.cmd_count)
        self.register_handler(Subcommand.SOLVE, self.cmd_solve)
        self.register_handler(Subcommand.VERIFY, self.cmd_verify)

    def register_handler(self, subcommand: Subcommand, handler: Callable[[RunConfig], int]) -> None:
        self.handlers[subcommand] = handler

    def emit(self, document, config: RunConfig, path: Optional[Path] = None) -> None:
        ResultWriter.write(document, config.format, path or config.output_path, self.stdout)

    def cmd_exponents(self, config: RunConfig) -> int:
        """Print every field of the exponent report."""
        report = exponent_report(config.params)
        self.emit(ResultDocument.create_exponents_document(report, config.params), config)
        return 0

    def cmd_orbit(self, config: RunConfig) -> int:
        """Write the orbit samples t, x, y, Lambda."""
        params = config.params
        orbit = integrate_orbit(params, config.integrator)
        lam = lambda_profile(orbit, params)(orbit.t)
        document = ResultDocument.create_orbit_document(orbit.t, orbit.xy, lam, params,
                                                        orbit.terminated.value)
        self.emit(document, config)
        return 0

    def cmd_bifurcation(self, config: RunConfig) -> int:
        """Write the branch (t0, lambda, A) on a uniform grid over the orbit."""
        params = config.params
        orbit = integrate_orbit(params, config.integrator)
        t_grid = np.linspace(orbit.t_start, orbit.t_end, config.grid)
        samples = bifurcation_diagram(orbit, params, t_grid)
        self.emit(ResultDocument.create_bifurcation_document(samples, params), config)
        return 0

    def cmd_count(self, config: RunConfig) -> int:
        """Print "<count> <saturated>" and optionally write the count document."""
        params = config.params
        orbit = integrate_orbit(params, config.integrator)
        count, saturated = count_solutions(orbit, params.lam, params)

        # JSON to stdout replaces the plain "<count> <saturated>" line
        document = ResultDocument.create_count_document(count, saturated, params)
        if config.format == OutputFormat.JSON and config.output_path is None:
            self.emit(document, config)
        else:
            self.stdout.write(f"{count} {'true' if saturated else 'false'}\n")
            if config.output_path is not None:
                self.emit(document, config)
        return 0

    def cmd_solve(self, config: RunConfig) -> int:
        """Write one r, u document per solution found at lambda."""
        params = config.params
        orbit = integrate_orbit(params, config.integrator)
        times = level_crossings(orbit, params.lam, params)
        if not times:
            logger.warning(f"No solution for λ = {params.lam:g} on the computed window")
        solutions = reconstruct_all(orbit, times, params, default_grid(config.grid))

        # One file per solution, suffixed with its index
        for index, solution in enumerate(solutions):
            document = ResultDocument.create_solution_document(solution, params, index)
            path = None
            if config.output_path is not None:
                out = config.output_path
                path = out.with_name(f"{out.stem}_{index}{out.suffix}")
            self.emit(document, config, path)
        return 0

    def cmd_verify(self, config: RunConfig) -> int:
        """Run the oracle suite; exit 3 if any oracle fails."""
        params = config.params
        service = VerifyService(params.n, params.k, params.sigma)
        results = service.run_all()

        # Write the document, then the PASS/FAIL lines
        if config.output_path is not None or config.format == OutputFormat.JSON:
            self.emit(ResultDocument.create_verify_document(results, service.params), config)
        if config.output_path is not None or config.format == OutputFormat.CSV:
            for result in results:
                status = "PASS" if result.passed else "FAIL"
                self.stdout.write(f"{status} {result.name} {result.residual:.3e}\n")
        return 0 if all(r.passed for r in results) else 3

    def run(self, config: RunConfig) -> int:
        """Run the handler for config.subcommand."""
        logger.info(f"Running {config.subcommand.value} for {config.params}")
        return self.handlers[config.subcommand](config)


def main(argv: Optional[List[str]] = None, stdout: Optional[TextIO] = None) -> int:
    """
    Entry point.

    Returns:
        0 ok, 2 validation, 3 numerical failure or refusal, 4 output failure
    """
    args = build_parser().parse_args(argv)

    # Library errors become an exit code and one line on stderr
    try:
        config = to_run_config(args)
        return Application(stdout).run(config)
    except HessianLVError as e:
        sys.stderr.write(f"hessian-lv: {e}\n")
        return e.exit_code


def main_cli() -> None:
    """Console script wrapper."""
    sys.exit(main())


if __name__ == "__main__":
    main_cli()
