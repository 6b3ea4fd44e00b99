import argparse
import logging
from pathlib import Path

from expsum.cli.output import census_for, provenance, write_json
from expsum.core.config import ApplicationSettings, get_settings
from expsum.core.errors import DomainInputError
from expsum.models.cyclotomic import CycloElem
from expsum.models.lpoly import LPoly
from expsum.models.padic import PadicElem
from expsum.schemas.census import (
    CensusKeySchema,
    CensusRecordSchema,
    PadicNumberSchema,
    exact_payload,
    padic_payload,
    rational_text,
)
from expsum.schemas.reports import MkReportSchema
from expsum.services.newton_poly import NewtonPolyService
from expsum.services.oracle_sums import OracleService
from expsum.services.sympow_cohom import SympowCohomService
from expsum.services.verification import padic_agree

logger = logging.getLogger(__name__)


def fe_payload(constant: object) -> list[str] | PadicNumberSchema | None:
    if isinstance(constant, CycloElem):
        return [str(c) for c in constant.coeffs]
    if isinstance(constant, PadicElem):
        return PadicNumberSchema.from_elem(constant)
    return None


class SympowCommands:
    """CLI commands for the symmetric-power L-functions M_k(T)."""

    def __init__(self, settings: ApplicationSettings | None = None) -> None:
        self.settings = settings or get_settings()
        self.sympow_service = SympowCohomService(self.settings)
        self.oracle_service = OracleService(self.settings)
        self.newton_service = NewtonPolyService(self.settings, self.sympow_service.tower)

    def register(self, subparsers: argparse._SubParsersAction) -> None:
        parser = subparsers.add_parser("mk", help="M_k(T) of the cubic family")
        parser.add_argument("--p", type=int, required=True)
        parser.add_argument("--k", type=int, required=True)
        parser.add_argument(
            "--method", choices=("oracle", "cohomology", "both"), default="both"
        )
        parser.add_argument("--prec", type=int, default=None, help="pi-digits")
        parser.add_argument("--json", type=Path, default=None, dest="json_out")
        parser.add_argument("--cache", type=Path, default=None)
        parser.add_argument("--force", action="store_true")
        parser.set_defaults(handler=self.mk_command)

    def mk_command(self, args: argparse.Namespace) -> int:
        p, k = args.p, args.k
        prec = args.prec or self.settings.default_precision(p)
        if k % 2 == 0 and args.method != "oracle":
            raise DomainInputError(f"k = {k} is even; cohomology computes odd k only")

        census = census_for(self.settings, args.cache)
        key = CensusKeySchema(p=p, d=3, kind="sympow", k=k)
        exact: LPoly | None = None
        padic: LPoly | None = None
        if args.method in ("oracle", "both"):
            stored = census.fetch_record(key) if census else None
            if stored is not None and stored.exact is not None:
                logger.info("reusing stored M_%s for p=%s", k, p)
                exact = stored.exact_lpoly()
            elif k % 2:
                exact = self.oracle_service.mk_exact_poly(p, k)
            else:
                exact = self.oracle_service.mk_even_poly(p, k)
        if args.method in ("cohomology", "both"):
            padic = self.sympow_service.mk_padic(p, k, prec)

        report = self.mk_report(p, k, args.method, prec, exact, padic)
        if census is not None:
            record = CensusRecordSchema(
                key=key,
                exact=exact_payload(exact) if exact is not None else None,
                padic=padic_payload(padic) if padic is not None else None,
                provenance=provenance(args.method, prec if padic is not None else None),
            )
            census.put_record(record, force=args.force)
        write_json(report, args.json_out)
        return 0

    def mk_report(
        self, p: int, k: int, method: str, prec: int, exact: LPoly | None, padic: LPoly | None
    ) -> MkReportSchema:
        primary = exact if exact is not None else padic
        assert primary is not None
        valuations = self.newton_service.coefficient_valuations(primary, p)
        polygon = self.newton_service.polygon_of(primary, p)
        if k % 2:
            fe_constant = self.sympow_service.check_fe(primary, k, p)
        else:
            fe_constant = primary.meta.get("reduced_fe")

        match = None
        if exact is not None and padic is not None:
            embedded = self.sympow_service.tower.embed_lpoly(exact, p, prec)
            match = padic_agree(padic.coeffs, embedded.coeffs, prec)
        ord_c1 = valuations[1] if len(valuations) > 1 else None
        return MkReportSchema(
            p=p,
            k=k,
            degree=primary.degree,
            method=method,
            exact=exact_payload(exact) if exact is not None else None,
            padic=padic_payload(padic) if padic is not None else None,
            ord_c1=rational_text(ord_c1) if ord_c1 is not None else None,
            slopes=[rational_text(v) for v in polygon.slope_list()],
            fe_constant=fe_payload(fe_constant),
            match=match,
        )
