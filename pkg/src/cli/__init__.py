"""Command line layer: file formats, reports and subcommands."""
from src.cli.commands import (
    EXIT_INPUT,
    EXIT_NO_SOLUTION,
    EXIT_OK,
    build_parser,
    cmd_gendata,
    cmd_montecarlo,
    cmd_realize,
    run_command
)
from src.cli.datafile import format_samples, parse_config, parse_pole, parse_samples, read_config, read_data
from src.cli.reports import RunReport, build_report, report_to_csv

__all__ = [
    "EXIT_INPUT",
    "EXIT_NO_SOLUTION",
    "EXIT_OK",
    "build_parser",
    "cmd_gendata",
    "cmd_montecarlo",
    "cmd_realize",
    "run_command",
    "format_samples",
    "parse_config",
    "parse_pole",
    "parse_samples",
    "read_config",
    "read_data",
    "RunReport",
    "build_report",
    "report_to_csv"
]
