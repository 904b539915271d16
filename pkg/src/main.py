"""
fpgor - Main Entry Point
Globally optimal least squares realization with optional fixed poles.

Run with: python -m src.main realize data.txt --order 2 --fixed-pole -0.9557
"""
import logging
import sys
from typing import List, Optional

from dotenv import load_dotenv

# Load environment variables
load_dotenv()

from src.cli.commands import EXIT_INPUT, build_parser, run_command
from src.config import get_settings
from src.errors import InvalidInputError
from src.telemetry.tracing import init_telemetry, shutdown_telemetry


def configure_logging(verbose: bool) -> None:
    level = logging.DEBUG if verbose or get_settings().debug else logging.WARNING
    logging.basicConfig(
        level=level,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr
    )
    logging.getLogger("opentelemetry").setLevel(logging.WARNING)


def main(argv: Optional[List[str]] = None) -> int:
    """Parse the command line, run one subcommand and return its exit code."""
    try:
        args = build_parser().parse_args(argv)
    except InvalidInputError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT

    configure_logging(args.verbose)

    # Initialize telemetry
    init_telemetry()
    try:
        return run_command(args.handler, args)
    finally:
        shutdown_telemetry()


if __name__ == "__main__":
    sys.exit(main())
