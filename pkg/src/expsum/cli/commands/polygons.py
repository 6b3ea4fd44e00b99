import argparse
from pathlib import Path

import orjson

from expsum.cli.output import write_json, write_polygon_csv
from expsum.core.config import ApplicationSettings, get_settings
from expsum.core.errors import DomainInputError, HypothesisFailed
from expsum.models.cyclotomic import CycloElem
from expsum.models.lpoly import LPoly
from expsum.schemas.census import CensusRecordSchema, PadicNumberSchema, rational_text
from expsum.services.newton_poly import NewtonPolyService


def load_polynomial(data: dict) -> tuple[LPoly, int]:
    """A census record, or a fibre / mk report, read back as (L-polynomial, p)."""
    if "key" in data:
        record = CensusRecordSchema.model_validate(data)
        poly = record.exact_lpoly() if record.exact is not None else record.padic_lpoly()
        return poly, record.key.p
    if "p" not in data:
        raise DomainInputError("polygon input needs a census record or a report with p")
    p = int(data["p"])
    if data.get("exact"):
        coeffs = tuple(CycloElem(p, tuple(int(c) for c in row)) for row in data["exact"])
        return LPoly(coeffs, "cyclotomic", {"p": p}), p
    if data.get("padic"):
        numbers = [PadicNumberSchema.model_validate(item) for item in data["padic"]]
        elems = tuple(number.to_elem() for number in numbers)
        return LPoly(elems, "padic", {"p": p, "prec": min(e.prec for e in elems)}), p
    raise DomainInputError("polygon input carries no coefficients")


class PolygonCommands:
    """CLI commands for predicted slopes and Newton polygon export."""

    def __init__(self, settings: ApplicationSettings | None = None) -> None:
        self.settings = settings or get_settings()
        self.newton_service = NewtonPolyService(self.settings)

    def register(self, subparsers: argparse._SubParsersAction) -> None:
        slopes = subparsers.add_parser("slopes", help="predicted fibre slopes")
        slopes.add_argument("--p", type=int, nargs="+", required=True)
        slopes.add_argument("--d", type=int, default=3)
        slopes.add_argument("--strict", action="store_true", help="require p >= d + 6")
        slopes.set_defaults(handler=self.slopes_command)

        polygon = subparsers.add_parser("polygon", help="Newton polygon of a stored polynomial")
        polygon.add_argument("--in", type=Path, required=True, dest="source")
        polygon.add_argument("--out", type=Path, required=True)
        polygon.set_defaults(handler=self.polygon_command)

    def slopes_command(self, args: argparse.Namespace) -> int:
        table = []
        for p in args.p:
            row: dict[str, object] = {"p": p, "d": args.d}
            try:
                slopes = self.newton_service.predicted_fibre_slopes(args.d, p, strict=args.strict)
                row["slopes"] = [rational_text(v) for v in slopes]
            except HypothesisFailed as exc:
                row["slopes"] = None
                row["reason"] = str(exc)
            table.append(row)
        write_json(table)
        return 0

    def polygon_command(self, args: argparse.Namespace) -> int:
        try:
            data = orjson.loads(args.source.read_bytes())
        except (OSError, orjson.JSONDecodeError) as exc:
            raise DomainInputError(f"cannot read {args.source}: {exc}") from exc
        poly, p = load_polynomial(data)
        polygon = self.newton_service.polygon_of(poly, p)
        write_polygon_csv(self.newton_service.polygon_rows(polygon), args.out)
        write_json({"p": p, "slopes": [rational_text(v) for v in polygon.slope_list()]})
        return 0
