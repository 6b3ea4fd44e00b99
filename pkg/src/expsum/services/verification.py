import logging
from collections.abc import Callable, Sequence
from fractions import Fraction
from math import gcd
from typing import Any, Literal

from expsum.core.config import ApplicationSettings, get_settings
from expsum.core.errors import DomainInputError, ExpsumError, VerificationError
from expsum.models.cyclotomic import CycloElem, in_index_r_subfield
from expsum.models.finite_field import build_field
from expsum.models.lpoly import LPoly, poly_divide_exact, poly_mul
from expsum.models.padic import PadicElem
from expsum.schemas.reports import CheckResultSchema, SuiteReportSchema
from expsum.services.deform_airy import DeformationService
from expsum.services.dwork_fibre import DworkFibreService
from expsum.services.identities import IdentityService
from expsum.services.newton_poly import NewtonPolyService
from expsum.services.oracle_sums import OracleService
from expsum.services.sympow_cohom import SympowCohomService

logger = logging.getLogger(__name__)

SuiteName = Literal["identities", "fibres", "sympow", "deform", "all"]
SUITES: tuple[str, ...] = ("identities", "fibres", "sympow", "deform")


def padic_agree(left: Sequence[Any], right: Sequence[Any], prec: int) -> bool:
    """Coefficient-wise equality modulo pi^prec; missing coefficients count as zero."""
    for m in range(max(len(left), len(right))):
        a = left[m] if m < len(left) else None
        b = right[m] if m < len(right) else None
        if a is None or b is None:
            rest = a if b is None else b
            if isinstance(rest, PadicElem) and not rest.with_precision(prec).is_zero():
                return False
            continue
        if (a - b).with_precision(prec).pi_valuation() is not None:
            return False
    return True


def fraction_text(values: Sequence[Fraction]) -> list[str]:
    return [str(v) for v in values]


class VerificationService:
    """Service for handling the verification suites."""

    def __init__(self, settings: ApplicationSettings | None = None) -> None:
        self.settings = settings or get_settings()
        self.fibre = DworkFibreService(self.settings)
        self.tower = self.fibre.tower
        self.oracle = OracleService(self.settings)
        self.sympow = SympowCohomService(self.settings, self.fibre)
        self.deformation = DeformationService(self.settings, self.fibre)
        self.newton = NewtonPolyService(self.settings, self.tower)
        self.identities = IdentityService(self.settings, self.tower)

    def _run_check(
        self, name: str, check: Callable[[], dict[str, Any] | None], *, required: bool = True
    ) -> CheckResultSchema:
        try:
            detail = check() or {}
        except VerificationError as exc:
            logger.warning("check %s failed: %s", name, exc)
            detail = {"error": str(exc), "index": exc.index}
            return CheckResultSchema(name=name, passed=False, required=required, detail=detail)
        except ExpsumError as exc:
            logger.warning("check %s could not run: %s", name, exc)
            detail = {"error": f"{type(exc).__name__}: {exc}"}
            return CheckResultSchema(name=name, passed=False, required=required, detail=detail)
        passed = bool(detail.pop("passed", True))
        return CheckResultSchema(name=name, passed=passed, required=required, detail=detail)

    def _report(self, suite: str, checks: list[CheckResultSchema]) -> SuiteReportSchema:
        passed = all(check.passed for check in checks if check.required)
        logger.info("suite %s: %d checks, passed=%s", suite, len(checks), passed)
        return SuiteReportSchema(suite=suite, passed=passed, checks=checks)

    def run_suite(self, suite: SuiteName, **options: Any) -> list[SuiteReportSchema]:
        names = SUITES if suite == "all" else (suite,)
        reports = []
        for name in names:
            runner = getattr(self, f"{name}_suite", None)
            if runner is None:
                raise DomainInputError(f"unknown suite {name}")
            accepted = {k: v for k, v in options.items() if v is not None}
            reports.append(runner(**accepted))
        return reports

    # identities

    def identities_suite(
        self, nmax: int = 20, dmax: int = 6, kmax: int = 40, **_: Any
    ) -> SuiteReportSchema:
        return self._report("identities", self._identity_checks(nmax, dmax, kmax))

    def _identity_checks(self, nmax: int, dmax: int, kmax: int) -> list[CheckResultSchema]:
        runs: list[tuple[str, Callable[[], CheckResultSchema]]] = [
            ("combo", lambda: self.identities.check_combo(nmax)),
            ("binsum", lambda: self.identities.check_binsum(dmax)),
            ("det_nk", lambda: self.identities.check_det_nk([2, 4, 6])),
            ("h_cramer", lambda: self.identities.check_h([2, 4, 6])),
            ("kernel_dimension", lambda: self.identities.check_kernel_dimension(kmax, [5, 7])),
            ("fermat", lambda: self.identities.check_fermat([13, 17, 5, 7, 11, 23])),
        ]
        out = []
        for name, run in runs:
            out.append(self._run_check(name, lambda run=run: run().detail))
        return out

    # fibres

    def fibre_pair(self, p: int, s: int, index: int, d: int, prec: int) -> dict[str, Any]:
        """Exact and p-adic fibre L-polynomials with their agreement and slopes."""
        fld = build_field(p, s)
        zbar = fld.element_at(index)
        exact = self.oracle.fibre_L_exact(fld, zbar, d)
        padic = self.fibre.fibre_L_padic(fld, zbar, d, prec)
        embedded = self.tower.embed_lpoly(exact, p, prec, s)
        polygon = self.newton.polygon_of(padic, p)
        return {
            "exact": exact,
            "padic": padic,
            "match": padic_agree(padic.coeffs, embedded.coeffs, prec),
            "slopes": polygon.slope_list(),
        }

    def _fibre_check(self, p: int, s: int, d: int, prec: int) -> dict[str, Any]:
        fld = build_field(p, s)
        predicted = self.newton.predicted_fibre_slopes(d, p) if s == 1 else None
        mismatches = []
        slope_failures = []
        worst = 0.0
        for index in range(1, fld.q):
            zbar = fld.element_at(index)
            if s > 1 and fld.degree(zbar) != s:
                continue
            pair = self.fibre_pair(p, s, index, d, prec)
            if not pair["match"]:
                mismatches.append(index)
            if predicted is not None and pair["slopes"] != predicted:
                slope_failures.append(index)
            self.oracle.check_fibre_fe(pair["exact"], fld.q)
            worst = max(worst, self.oracle.weil_deviation(pair["exact"], fld.q))
        return {
            "passed": not mismatches and not slope_failures and worst < 1e-6,
            "p": p,
            "s": s,
            "d": d,
            "prec": prec,
            "mismatches": mismatches,
            "slope_failures": slope_failures,
            "weil_deviation": worst,
            "predicted": fraction_text(predicted) if predicted else None,
        }

    def _frobenius_estimate_check(self, d: int, p: int, prec: int) -> dict[str, Any]:
        fld = build_field(p, 1)
        matrix = self.fibre.fibre_frob_matrix(fld, fld.one(), d, prec)
        failures = []
        for i in range(1, d):
            for j in range(1, d):
                expected = self.fibre.frob_leading_term(d, p, i, j).valuation
                if matrix[i - 1][j - 1].valuation() != expected:
                    failures.append([i, j])
        return {"passed": not failures, "d": d, "p": p, "failures": failures}

    def _fredholm_check(self, p: int, prec: int, tdeg: int = 3) -> dict[str, Any]:
        fld = build_field(p, 1)
        zbar = fld.one()
        series = self.fibre.fredholm_truncated(fld, zbar, 3, tdeg, prec)
        poly = self.fibre.fibre_L_padic(fld, zbar, 3, prec)
        product = self.fibre.elementary_product(poly, tdeg, prec)
        return {"passed": padic_agree(series, product, prec), "p": p, "tdeg": tdeg}

    def _ode_check(self, p: int, prec: int, atrunc: int = 12) -> dict[str, Any]:
        """The relative Frobenius must solve the Gauss-Manin equation to precision."""
        frob = self.fibre.frob_matrix(p, 3, atrunc, prec)
        residual = self.fibre.frob_ode_residual(frob)
        floor = Fraction(prec, p - 1) - 1
        return {
            "passed": residual is None or residual >= floor,
            "p": p,
            "residual": None if residual is None else str(residual),
        }

    def fibres_suite(
        self,
        primes: Sequence[int] = (5, 7, 11, 13),
        d: int = 3,
        prec: int | None = None,
        quadratic: Sequence[int] = (5, 7),
        quintic: Sequence[int] = (11, 13),
        **_: Any,
    ) -> SuiteReportSchema:
        checks = []
        for p in primes:
            work = prec or self.settings.default_precision(p)
            checks.append(
                self._run_check(f"fibre_p{p}", lambda p=p, w=work: self._fibre_check(p, 1, d, w))
            )
        for p in quadratic:
            work = prec or self.settings.default_precision(p)
            checks.append(
                self._run_check(f"fibre_p{p}_s2", lambda p=p, w=work: self._fibre_check(p, 2, d, w))
            )
        for p in quintic:
            work = prec or self.settings.default_precision(p)
            checks.append(
                self._run_check(f"fibre_d5_p{p}", lambda p=p, w=work: self._fibre_check(p, 1, 5, w))
            )
        for dd, p in ((3, 11), (3, 13), (5, 11)):
            work = prec or self.settings.default_precision(p)
            checks.append(
                self._run_check(
                    f"frob_estimate_d{dd}_p{p}",
                    lambda dd=dd, p=p, w=work: self._frobenius_estimate_check(dd, p, w),
                )
            )
        checks.append(self._run_check("fredholm_p7", lambda: self._fredholm_check(7, prec or 30)))
        checks.append(self._run_check("frob_ode_p7", lambda: self._ode_check(7, prec or 12)))
        return self._report("fibres", checks)

    # symmetric powers

    def mk_pair(self, p: int, k: int, prec: int) -> dict[str, Any]:
        """Oracle and cohomology M_k for odd k, with their agreement."""
        exact = self.oracle.mk_exact_poly(p, k)
        frob = self.sympow.beta_matrix(p, k, prec)
        padic = self.sympow.mk_padic(p, k, prec, frob)
        embedded = self.tower.embed_lpoly(exact, p, prec)
        return {
            "exact": exact,
            "padic": padic,
            "frob": frob,
            "match": padic_agree(padic.coeffs, embedded.coeffs, prec),
        }

    def _mk_check(self, p: int, k: int, prec: int) -> dict[str, Any]:
        pair = self.mk_pair(p, k, prec)
        exact: LPoly = pair["exact"]
        padic: LPoly = pair["padic"]
        self.sympow.check_fe(exact, k, p)
        polygon = self.newton.polygon_of(exact, p)
        valuations = self.newton.coefficient_valuations(exact, p)
        bound_ok, rows = self.newton.check_lower_bound(exact, k, p)
        self.sympow.check_primitive_floor(pair["frob"])
        # sigma_c fixes every power sum when c is a cube in F_p
        index = gcd(3, p - 1)
        subfield = all(
            in_index_r_subfield(c, index) for c in exact.coeffs if isinstance(c, CycloElem)
        )
        filtration = self.sympow.filtration_form(pair["frob"])
        return {
            "passed": pair["match"] and bound_ok and subfield and polygon.is_symmetric(k + 1),
            "subfield_index": index,
            "subfield": subfield,
            "filtration": [[None if v is None else str(v) for v in row] for row in filtration],
            "p": p,
            "k": k,
            "degree": exact.degree,
            "match": pair["match"],
            "padic_degree": padic.trimmed().degree,
            "ord_c1": str(valuations[1]) if len(valuations) > 1 else None,
            "slopes": fraction_text(polygon.slope_list()),
            "margins": [str(row.margin) for row in rows],
            "conjectural": [str(row.conjectural) for row in rows],
        }

    def _block_check(self, p: int, k: int, prec: int) -> dict[str, Any]:
        """Full V_k characteristic polynomial against M_k(T) P_k(T) from the oracle."""
        frob = self.sympow.beta_matrix(p, k, prec)
        full = self.sympow.full_vk_charpoly(p, k, prec, frob)
        primitive = self.sympow.mk_padic(p, k, prec, frob)
        constants = self.sympow.constant_block_charpoly(p, k, prec, frob)
        star = self.tower.embed_lpoly(self.oracle.mk_star_poly(p, k), p, prec)
        zero_fibre = self.tower.embed_lpoly(self.oracle.zero_fibre_factor(p, k), p, prec)
        product = poly_mul(list(primitive.coeffs), list(constants.coeffs))
        return {
            "passed": padic_agree(full.coeffs, star.coeffs, prec),
            "triangular": padic_agree(full.coeffs, product, prec),
            "constants_match": padic_agree(constants.coeffs, zero_fibre.coeffs, prec),
            "p": p,
            "k": k,
        }

    def _trivial_check(self, p: int, k: int) -> dict[str, Any]:
        """The oracle M_k(T) for even k must be divisible by N_k(T) down to degree k."""
        factor = self.sympow.trivial_factor(p, k)
        even = self.oracle.mk_even_poly(p, k)
        divisor = [CycloElem.from_int(p, int(c)) for c in factor.coeffs]
        quotient = poly_divide_exact(list(even.coeffs), divisor)
        divisible = all(c.is_zero() for c in quotient[k + 1 :])
        return {
            "passed": divisible,
            "p": p,
            "k": k,
            "trivial": [str(c) for c in factor.coeffs],
            "m_k": factor.meta["m_k"],
            "n_k": factor.meta["n_k"],
            "oracle_degree": even.degree,
        }

    def sympow_suite(
        self,
        primes: Sequence[int] = (7,),
        kmax: int = 3,
        prec: int | None = None,
        even: Sequence[tuple[int, int]] = ((7, 4), (5, 4), (11, 4), (7, 2)),
        **_: Any,
    ) -> SuiteReportSchema:
        checks = []
        for p in primes:
            work = prec or self.settings.default_precision(p)
            for k in range(1, min(kmax, p - 1) + 1, 2):
                checks.append(
                    self._run_check(
                        f"mk_p{p}_k{k}", lambda p=p, k=k, w=work: self._mk_check(p, k, w)
                    )
                )
                checks.append(
                    self._run_check(
                        f"blocks_p{p}_k{k}",
                        lambda p=p, k=k, w=work: self._block_check(p, k, w),
                        required=False,
                    )
                )
        for p, k in even:
            checks.append(
                self._run_check(f"trivial_p{p}_k{k}", lambda p=p, k=k: self._trivial_check(p, k))
            )
        return self._report("sympow", checks)

    # deformation

    def _solution_check(self, p: int, nterms: int, prec: int) -> dict[str, Any]:
        ctx = self.tower.context(p)
        z = self.tower.teichmuller(ctx, ctx.fld.one(), prec)
        solution = self.deformation.solve_deformation(z, nterms, prec)
        self.deformation.check_wronskian(solution)
        residual = self.deformation.airy_residual(solution)
        shorter = self.deformation.solve_deformation(z, nterms - 1, prec)
        prefix = all(
            solution.entry(i, j).coefficient(n) == shorter.entry(i, j).coefficient(n)
            for i in range(2)
            for j in range(2)
            for n in range(nterms - 1)
        )
        return {"passed": residual is None and prefix, "p": p, "nterms": nterms}

    def _det_check(self, p: int, s: int, prec: int) -> dict[str, Any]:
        value = self.deformation.check_det_frobenius(p, s, prec)
        exact = self.oracle.fibre_determinant(build_field(p, s))
        embedded = self.tower.embed_padic(exact, self.tower.context(p, s), prec)
        return {
            "passed": value == embedded,
            "p": p,
            "s": s,
            "valuation": str(value.valuation()),
        }

    def _intertwine_check(self, p: int, zbar: int, nterms: int, prec: int) -> dict[str, Any]:
        residual = self.deformation.check_frob_intertwine(p, zbar, nterms, prec)
        return {"p": p, "z": zbar, "residual": residual}

    def deform_suite(self, prec: int | None = None, nterms: int = 10, **_: Any):
        checks = [self._run_check("airy_p7", lambda: self._solution_check(7, nterms, prec or 20))]
        for p, s in ((7, 1), (5, 1), (5, 2), (11, 1)):
            work = prec or 2 * (p - 1)
            checks.append(
                self._run_check(f"det_p{p}_s{s}", lambda p=p, s=s, w=work: self._det_check(p, s, w))
            )
        for zbar in (0, 1):
            checks.append(
                self._run_check(
                    f"intertwine_p7_z{zbar}",
                    lambda z=zbar: self._intertwine_check(7, z, nterms, prec or 12),
                )
            )
        return self._report("deform", checks)
