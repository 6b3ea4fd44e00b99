import argparse
import logging
import sys
from collections.abc import Sequence

from expsum.cli.commands.census import CensusCommands
from expsum.cli.commands.fibre import FibreCommands
from expsum.cli.commands.polygons import PolygonCommands
from expsum.cli.commands.sympow import SympowCommands
from expsum.cli.commands.verify import VerifyCommands
from expsum.core.config import ApplicationSettings, get_settings
from expsum.core.errors import (
    CapacityError,
    DomainInputError,
    ExpsumError,
    PrecisionError,
    StoreError,
    VerificationError,
)
from expsum.core.logging import configure_logging

logger = logging.getLogger(__name__)

EXIT_CODES: tuple[tuple[type[ExpsumError], int], ...] = (
    (DomainInputError, 2),
    (VerificationError, 1),
    (StoreError, 1),
    (PrecisionError, 1),
    (CapacityError, 1),
)


def exit_code_for(exc: ExpsumError) -> int:
    for error_type, code in EXIT_CODES:
        if isinstance(exc, error_type):
            return code
    return 1


class CommandRouter:
    """Command-line router: builds the parser and dispatches to the command classes."""

    def __init__(self, settings: ApplicationSettings | None = None) -> None:
        self.settings = settings or get_settings()
        self.parser = argparse.ArgumentParser(
            prog="expsum",
            description="L-functions of x^d + lambda x and symmetric powers of the cubic family",
        )
        self.parser.add_argument("-v", "--verbose", action="count", default=0)
        subparsers = self.parser.add_subparsers(dest="command", required=True)
        self.commands = (
            FibreCommands(self.settings),
            SympowCommands(self.settings),
            PolygonCommands(self.settings),
            VerifyCommands(self.settings),
            CensusCommands(self.settings),
        )
        for command in self.commands:
            command.register(subparsers)

    def run(self, argv: Sequence[str] | None = None) -> int:
        try:
            args = self.parser.parse_args(argv)
        except SystemExit as exc:
            if exc.code is None:
                return 0
            return exc.code if isinstance(exc.code, int) else 2

        configure_logging(self.settings, verbosity=args.verbose)
        try:
            return args.handler(args)
        except ExpsumError as exc:
            code = exit_code_for(exc)
            logger.debug("%s exited with %s", args.command, code, exc_info=True)
            sys.stderr.write(f"expsum: {type(exc).__name__}: {exc}\n")
            return code
