import argparse
from pathlib import Path

import orjson
from pydantic import ValidationError

from expsum.cli.output import write_json
from expsum.core.config import ApplicationSettings, get_settings
from expsum.core.errors import DomainInputError
from expsum.crud.census import CensusCRUD
from expsum.schemas.census import CensusKeySchema, CensusRecordSchema


class CensusCommands:
    """CLI commands for the census store."""

    def __init__(self, settings: ApplicationSettings | None = None) -> None:
        self.settings = settings or get_settings()

    def register(self, subparsers: argparse._SubParsersAction) -> None:
        shared = argparse.ArgumentParser(add_help=False)
        shared.add_argument("--cache", type=Path, default=None)

        parser = subparsers.add_parser("census", help="stored L-polynomials")
        actions = parser.add_subparsers(dest="action", required=True)

        put = actions.add_parser("put", parents=[shared], help="store a record file")
        put.add_argument("--file", type=Path, required=True, dest="record_file")
        put.add_argument("--force", action="store_true")
        put.set_defaults(handler=self.put_command)

        get = actions.add_parser("get", parents=[shared], help="print one record")
        get.add_argument("--p", type=int, required=True)
        get.add_argument("--d", type=int, default=3)
        get.add_argument("--kind", choices=("fibre", "sympow"), required=True)
        get.add_argument("--k", type=int, default=None)
        get.add_argument("--lam", default=None, help="base-p digits, e.g. '3' or '1,2'")
        get.add_argument("--s", type=int, default=1)
        get.set_defaults(handler=self.get_command)

        listing = actions.add_parser("list", parents=[shared], help="print every stored key")
        listing.set_defaults(handler=self.list_command)

    def _crud(self, args: argparse.Namespace) -> CensusCRUD:
        return CensusCRUD(args.cache or self.settings.cache_dir)

    def put_command(self, args: argparse.Namespace) -> int:
        try:
            record = CensusRecordSchema.model_validate(orjson.loads(args.record_file.read_bytes()))
        except (OSError, orjson.JSONDecodeError, ValidationError) as exc:
            raise DomainInputError(f"cannot read record {args.record_file}: {exc}") from exc
        path = self._crud(args).put_record(record, force=args.force)
        write_json({"path": str(path)})
        return 0

    def get_command(self, args: argparse.Namespace) -> int:
        if args.kind == "sympow" and args.k is None:
            raise DomainInputError("sympow records need --k")
        if args.kind == "fibre" and args.lam is None:
            raise DomainInputError("fibre records need --lam")
        lam = [int(c) for c in args.lam.split(",")] if args.lam else None
        key = CensusKeySchema(p=args.p, d=args.d, kind=args.kind, k=args.k, lam=lam, s=args.s)
        write_json(self._crud(args).get_record(key))
        return 0

    def list_command(self, args: argparse.Namespace) -> int:
        write_json(self._crud(args).list_keys())
        return 0
