import argparse
import logging
from pathlib import Path

from expsum.cli.output import census_for, parse_element, provenance, write_json, write_polygon_csv
from expsum.core.config import ApplicationSettings, get_settings
from expsum.core.errors import DomainInputError, HypothesisFailed
from expsum.crud.census import CensusCRUD
from expsum.models.finite_field import FieldDescriptor, FqElem, build_field
from expsum.models.lpoly import LPoly
from expsum.schemas.census import (
    CensusKeySchema,
    CensusRecordSchema,
    exact_payload,
    padic_payload,
    rational_text,
)
from expsum.schemas.reports import FibreReportSchema
from expsum.services.dwork_fibre import DworkFibreService
from expsum.services.newton_poly import NewtonPolyService
from expsum.services.oracle_sums import OracleService
from expsum.services.verification import padic_agree

logger = logging.getLogger(__name__)


class FibreCommands:
    """CLI commands for the L-functions of single fibres."""

    def __init__(self, settings: ApplicationSettings | None = None) -> None:
        self.settings = settings or get_settings()
        self.fibre_service = DworkFibreService(self.settings)
        self.oracle_service = OracleService(self.settings)
        self.newton_service = NewtonPolyService(self.settings, self.fibre_service.tower)

    def register(self, subparsers: argparse._SubParsersAction) -> None:
        parser = subparsers.add_parser("fibre", help="L(x^d + z x, T) by enumeration and by Dwork")
        parser.add_argument("--p", type=int, required=True)
        parser.add_argument("--d", type=int, default=3)
        parser.add_argument("--z", default="all", help="'3', '1,2' (base-p digits) or 'all'")
        parser.add_argument("--s", type=int, default=1)
        parser.add_argument("--prec", type=int, default=None, help="pi-digits")
        parser.add_argument("--json", type=Path, default=None, dest="json_out")
        parser.add_argument("--csv-polygon", type=Path, default=None)
        parser.add_argument("--cache", type=Path, default=None)
        parser.add_argument("--force", action="store_true")
        parser.set_defaults(handler=self.fibre_command)

    def fibre_command(self, args: argparse.Namespace) -> int:
        fld = build_field(args.p, args.s)
        prec = args.prec or self.settings.default_precision(args.p)
        if args.z == "all":
            elements = [fld.element_at(index) for index in range(1, fld.q)]
        else:
            elements = [parse_element(fld, args.z)]
        if args.csv_polygon is not None and len(elements) != 1:
            raise DomainInputError("--csv-polygon needs a single --z")

        census = census_for(self.settings, args.cache)
        reports = []
        for zbar in elements:
            report, padic = self.fibre_report(fld, zbar, args.d, prec, census, force=args.force)
            reports.append(report)
            if args.csv_polygon is not None:
                polygon = self.newton_service.polygon_of(padic, args.p)
                write_polygon_csv(self.newton_service.polygon_rows(polygon), args.csv_polygon)

        write_json(reports[0] if len(reports) == 1 else reports, args.json_out)
        return 0

    def fibre_report(
        self,
        fld: FieldDescriptor,
        zbar: FqElem,
        d: int,
        prec: int,
        census: CensusCRUD | None,
        *,
        force: bool = False,
    ) -> tuple[FibreReportSchema, LPoly]:
        key = CensusKeySchema(p=fld.p, d=d, kind="fibre", lam=list(zbar.coeffs), s=fld.s)
        stored = census.fetch_record(key) if census else None
        if stored is not None and stored.exact is not None:
            logger.info("reusing stored exact L-polynomial for %s", key.file_stem())
            exact = stored.exact_lpoly()
        else:
            exact = self.oracle_service.fibre_L_exact(fld, zbar, d)
        padic = self.fibre_service.fibre_L_padic(fld, zbar, d, prec)
        embedded = self.fibre_service.tower.embed_lpoly(exact, fld.p, prec, fld.s)
        slopes = self.newton_service.polygon_of(padic, fld.p).slope_list()

        predicted = None
        if fld.s == 1:
            try:
                predicted = self.newton_service.predicted_fibre_slopes(d, fld.p)
            except HypothesisFailed as exc:
                logger.info("no predicted slopes: %s", exc)

        if census is not None:
            record = CensusRecordSchema(
                key=key,
                exact=exact_payload(exact),
                padic=padic_payload(padic),
                provenance=provenance("both", prec),
            )
            census.put_record(record, force=force)

        report = FibreReportSchema(
            p=fld.p,
            d=d,
            s=fld.s,
            lam=list(zbar.coeffs),
            exact=exact_payload(exact),
            padic=padic_payload(padic),
            slopes=[rational_text(v) for v in slopes],
            predicted=[rational_text(v) for v in predicted] if predicted else None,
            match=padic_agree(padic.coeffs, embedded.coeffs, prec),
        )
        return report, padic
