"""
Subcommands of the ``fpgor`` command line: realize, montecarlo, gendata.

Each ``cmd_*`` takes the parsed arguments and returns an exit code:
0 on success, 2 when the solver finds no real candidate, 3 on bad input
or any other failure.
"""
import argparse
import logging
import sys
import time
from typing import Callable, Dict, List

from pydantic import ValidationError

from src import __version__
from src.baselines import grid_refine, npf, recursive_fpgor, tsd
from src.cli.datafile import (
    format_samples,
    parse_pole,
    read_config,
    read_data,
    write_text
)
from src.cli.reports import build_report, report_to_csv
from src.datagen import (
    MonteCarloConfig,
    add_noise,
    example_state_space,
    montecarlo,
    motivational_data,
    records_to_csv,
    reduced_state_space,
    simulate,
    state_space_from_poles,
    summarize,
    summary_to_csv
)
from src.errors import (
    ConvergenceError,
    DegenerateModelError,
    InvalidInputError,
    NoRealSolutionError
)
from src.mepsolve import realize
from src.signalmodel import FixedPoleSet

# Configure module logger
logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_NO_SOLUTION = 2
EXIT_INPUT = 3

METHODS = ("gor", "npf", "tsd", "grid", "recursive")
PRESETS = ("motivational", "example", "reduced")


class ArgumentParser(argparse.ArgumentParser):
    """argparse with usage errors raised instead of exiting with status 2."""

    def error(self, message):
        raise InvalidInputError(f"{self.prog}: {message}")


def _float_list(text: str) -> List[float]:
    try:
        return [float(item) for item in text.split(",") if item.strip()]
    except ValueError:
        raise InvalidInputError(f"Expected comma separated reals, got {text!r}")


def _solve(args: argparse.Namespace, signal, fixed: FixedPoleSet):
    method = args.method
    if method == "gor":
        return realize(signal, args.order, fixed, max_degree=args.max_degree)
    if method == "npf":
        return npf(signal, args.order, fixed, max_degree=args.max_degree)
    if method == "tsd":
        return tsd(signal, args.order, fixed, max_degree=args.max_degree)
    if method == "grid":
        return grid_refine(signal, args.order, fixed)
    if fixed.m:
        raise InvalidInputError("Method 'recursive' finds every pole itself; drop --fixed-pole")
    return recursive_fpgor(signal, args.order, max_degree=args.max_degree)


def cmd_realize(args: argparse.Namespace) -> int:
    """Fit one data file and write a RunReport (JSON or CSV)."""
    signal, digest = read_data(args.data)
    fixed = FixedPoleSet.with_conjugates(parse_pole(text) for text in args.fixed_pole or [])
    logger.info(f"realize: N={len(signal)}, n={args.order}, fixed={list(fixed)}, method={args.method}")

    start = time.perf_counter()
    result = _solve(args, signal, fixed)
    elapsed = time.perf_counter() - start

    report = build_report(
        result,
        method=args.method,
        N=len(signal),
        n=args.order,
        fixed_poles=list(fixed),
        digest=digest,
        all_candidates=args.all_candidates,
        timings={"solve_s": elapsed} if args.timing else None
    )
    text = report.to_json() if args.output == "json" else report_to_csv(report)
    write_text(text, args.out, sys.stdout)
    return EXIT_OK


def cmd_montecarlo(args: argparse.Namespace) -> int:
    """Run the noise experiment of a config file and write the trial CSV."""
    cfg = read_config(args.config)
    updates: Dict[str, object] = {}
    if args.trials is not None:
        updates["trials"] = args.trials
    if args.seed is not None:
        updates["base_seed"] = args.seed
    if args.sgor:
        updates["include_sgor"] = True
    if args.timing:
        updates["record_timing"] = True
    if updates:
        try:
            cfg = MonteCarloConfig.model_validate({**cfg.model_dump(), **updates})
        except ValidationError as e:
            raise InvalidInputError(f"Invalid Monte Carlo override: {e}")

    records = montecarlo(cfg, workers=args.workers)
    write_text(records_to_csv(records), args.out, sys.stdout)
    if args.summary:
        write_text(summary_to_csv(summarize(records)), args.summary, sys.stdout)
    return EXIT_OK


def cmd_gendata(args: argparse.Namespace) -> int:
    """Simulate a model (or a preset), add seeded noise and write a data file."""
    header = [f"fpgor {__version__} gendata"]
    if args.preset == "motivational":
        clean = motivational_data()
        header.append("preset=motivational")
    else:
        if args.preset == "example":
            model = example_state_space()
        elif args.preset == "reduced":
            model = reduced_state_space()
        elif args.pole:
            poles = FixedPoleSet(tuple(parse_pole(text) for text in args.pole))
            model = state_space_from_poles(
                poles,
                C=_float_list(args.C) if args.C else None,
                x0=_float_list(args.x0) if args.x0 else None
            )
        else:
            raise InvalidInputError("gendata needs --preset or at least one --pole")
        clean = simulate(model, args.samples)
        header.append(f"preset={args.preset or 'custom'} N={args.samples}")
        header.append("poles=" + " ".join(repr(complex(p)) for p in sorted(
            model.poles, key=lambda p: (p.real, p.imag))))

    header.append(f"sigma={args.sigma!r} seed={args.seed}")
    data = add_noise(clean, args.sigma, args.seed)
    write_text(format_samples(data, header), args.out, sys.stdout)
    return EXIT_OK


def build_parser() -> ArgumentParser:
    parser = ArgumentParser(
        prog="fpgor",
        description="Globally optimal least squares realization with fixed poles"
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--verbose", "-v", action="store_true", help="Debug logging")
    subparsers = parser.add_subparsers(dest="command", required=True, parser_class=ArgumentParser)

    p_realize = subparsers.add_parser("realize", help="Fit an autonomous model to a data file")
    p_realize.add_argument("data", help="Data file, one sample per line")
    p_realize.add_argument("--order", "-n", type=int, required=True, help="Model order n")
    p_realize.add_argument(
        "--fixed-pole", action="append", metavar="RE[,IM]",
        help="Fixed pole (repeatable); conjugates are added. Use --fixed-pole=RE,IM when RE is negative"
    )
    p_realize.add_argument("--method", choices=METHODS, default="gor")
    p_realize.add_argument("--output", choices=("json", "csv"), default="json")
    p_realize.add_argument("--all-candidates", action="store_true",
                           help="Report every critical point, not only the global one")
    p_realize.add_argument("--max-degree", type=int, default=None,
                           help="Degree cap of the block Macaulay solver")
    p_realize.add_argument("--timing", action="store_true", help="Include wall times")
    p_realize.add_argument("--out", "-o", default=None, help="Output file (default stdout)")
    p_realize.set_defaults(handler=cmd_realize)

    p_mc = subparsers.add_parser("montecarlo", help="Run the seeded noise experiment")
    p_mc.add_argument("config", help="key = value config file")
    p_mc.add_argument("--out", "-o", default=None, help="Trial CSV (default stdout)")
    p_mc.add_argument("--summary", default=None, help="Write per-sigma quartiles here")
    p_mc.add_argument("--trials", type=int, default=None)
    p_mc.add_argument("--seed", type=int, default=None)
    p_mc.add_argument("--sgor", action="store_true", help="Also run the unconstrained fit")
    p_mc.add_argument("--workers", type=int, default=None, help="Worker threads (default REALIZE_THREADS)")
    p_mc.add_argument("--timing", action="store_true", help="Record wall times")
    p_mc.set_defaults(handler=cmd_montecarlo)

    p_gen = subparsers.add_parser("gendata", help="Write simulated, optionally noisy data")
    p_gen.add_argument("--preset", choices=PRESETS, default=None)
    p_gen.add_argument("--pole", action="append", metavar="RE[,IM]",
                       help="Model pole (repeatable); the set must be conjugate-closed")
    p_gen.add_argument("--C", default=None, help="Output vector, comma separated")
    p_gen.add_argument("--x0", default=None, help="Initial state, comma separated")
    p_gen.add_argument("--samples", "-N", type=int, default=16)
    p_gen.add_argument("--sigma", type=float, default=0.0)
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--out", "-o", default=None)
    p_gen.set_defaults(handler=cmd_gendata)

    return parser


def run_command(handler: Callable[[argparse.Namespace], int], args: argparse.Namespace) -> int:
    """Map the error hierarchy onto exit codes."""
    try:
        return handler(args)
    except (InvalidInputError, DegenerateModelError) as e:
        logger.error(str(e))
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except NoRealSolutionError as e:
        logger.error(f"{e} ({len(e.eigenvalues)} eigenvalues)")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_NO_SOLUTION
    except ConvergenceError as e:
        logger.error(f"{e} (nullity history {e.nullity_history})")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_NO_SOLUTION
    except Exception as e:
        logger.error(f"Unexpected failure: {type(e).__name__}: {e}")
        logger.debug("Traceback", exc_info=True)
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_INPUT

