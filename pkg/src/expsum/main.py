import sys
from collections.abc import Sequence

from expsum.cli.router import CommandRouter


def main(argv: Sequence[str] | None = None) -> int:
    """Entry point of the expsum command."""
    router = CommandRouter()
    return router.run(argv)


if __name__ == "__main__":
    sys.exit(main())
