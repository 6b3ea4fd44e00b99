import argparse
import logging

from expsum.cli.output import write_json
from expsum.core.config import ApplicationSettings, get_settings
from expsum.services.verification import SUITES, VerificationService

logger = logging.getLogger(__name__)


class VerifyCommands:
    """CLI commands for the verification suites."""

    def __init__(self, settings: ApplicationSettings | None = None) -> None:
        self.settings = settings or get_settings()
        self.verification_service = VerificationService(self.settings)

    def register(self, subparsers: argparse._SubParsersAction) -> None:
        parser = subparsers.add_parser("verify", help="run verification suites")
        parser.add_argument("--suite", choices=(*SUITES, "all"), default="all")
        parser.add_argument("--p", type=int, nargs="+", default=None, dest="primes")
        parser.add_argument(
            "--kmax", type=int, default=None, help="largest k (identities: kernel dimension range)"
        )
        parser.add_argument("--nmax", type=int, default=None)
        parser.add_argument("--dmax", type=int, default=None)
        parser.add_argument("--prec", type=int, default=None, help="pi-digits")
        parser.set_defaults(handler=self.verify_command)

    def verify_command(self, args: argparse.Namespace) -> int:
        reports = self.verification_service.run_suite(
            args.suite,
            primes=tuple(args.primes) if args.primes else None,
            kmax=args.kmax,
            nmax=args.nmax,
            dmax=args.dmax,
            prec=args.prec,
        )
        write_json(reports[0] if len(reports) == 1 else reports)
        failed = [report.suite for report in reports if not report.passed]
        if failed:
            logger.warning("failed suites: %s", ", ".join(failed))
            return 1
        return 0
