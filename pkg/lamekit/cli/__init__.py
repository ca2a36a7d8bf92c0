"""Command-line interface: subcommands, output records and grid specs."""

from lamekit.cli.main import build_parser, main, run
from lamekit.cli.records import OutputRecord

__all__ = ["OutputRecord", "build_parser", "main", "run"]
