"""Deformation of the cubic fibres: the Airy system dC/da = B(a) C.

B(a) = [[0, pi], [-pi a / 3, 0]] is the connection on {x, x^2} divided by a.
Local solutions are built term by term around Teichmuller centres and used to
transport the relative Frobenius: A(a) C(z^p, a^p) = C(z, a) A(z).
"""

import logging
from collections.abc import Sequence
from fractions import Fraction
from math import comb, factorial

from expsum.core.config import ApplicationSettings, get_settings
from expsum.core.errors import (
    ConstancyViolation,
    DomainInputError,
    IntertwineViolation,
    PrecisionExhausted,
)
from expsum.models.cohomology import LocalSolution
from expsum.models.finite_field import FqElem, build_field
from expsum.models.padic import PadicContext, PadicElem, ceil_div, p_valuation
from expsum.models.padic_series import PadicSeriesA
from expsum.services.dwork_fibre import DworkFibreService

logger = logging.getLogger(__name__)

Series = list[PadicElem]


def _series_mul(left: Series, right: Series, nterms: int, zero: PadicElem) -> Series:
    out = [zero] * nterms
    for i, a in enumerate(left[:nterms]):
        if a.is_zero():
            continue
        for j, b in enumerate(right[: nterms - i]):
            out[i + j] = out[i + j] + a * b
    return out


def _matrix_series_mul(
    left: Sequence[Sequence[Series]],
    right: Sequence[Sequence[Series]],
    nterms: int,
    zero: PadicElem,
) -> list[list[Series]]:
    out = []
    for i in range(2):
        row = []
        for j in range(2):
            first = _series_mul(left[i][0], right[0][j], nterms, zero)
            second = _series_mul(left[i][1], right[1][j], nterms, zero)
            row.append([x + y for x, y in zip(first, second)])
        out.append(row)
    return out


class DeformationService:
    """Service for handling local solutions of the Airy system and Frobenius transport."""

    def __init__(
        self, settings: ApplicationSettings | None = None, fibre: DworkFibreService | None = None
    ) -> None:
        self.settings = settings or get_settings()
        self.fibre = fibre or DworkFibreService(self.settings)
        self.tower = self.fibre.tower

    def _solution_precision(self, p: int, nterms: int, prec: int) -> int:
        # every division by n + 1 costs (p - 1) v_p(n + 1) digits
        return prec + (p - 1) * p_valuation(factorial(nterms), p)

    def _relift_centre(self, z: PadicElem, work: int) -> PadicElem:
        """The Teichmuller point z to work digits; other centres must already carry them."""
        lifted = self.tower.teichmuller(z.ctx, z.residue(), work)
        if lifted.with_precision(z.prec) != z:
            raise PrecisionExhausted(
                f"centre known to {z.prec} digits is not a Teichmuller point; need {work}"
            )
        return lifted

    def solve_deformation(self, z: PadicElem, nterms: int, prec: int) -> LocalSolution:
        """C(z, z + u) through u^(nterms - 1) from (n + 1) C_(n+1) = B_0 C_n + B_1 C_(n-1)."""
        if nterms < 2:
            raise DomainInputError(f"need at least two terms, got {nterms}")
        ctx = z.ctx
        if ctx.s != 1:
            raise DomainInputError("deformation centres live in Z_p[pi]")
        _, b_prime, _ = self.fibre.growth_parameters(ctx.p)
        work = self._solution_precision(ctx.p, nterms, prec)
        if z.prec < work:
            z = self._relift_centre(z, work)
        zero, one = ctx.zero(work), ctx.one(work)
        pi = ctx.pi_power(1, work)
        # B(z + u) = B_0 + B_1 u; only the lower-left entry depends on a
        lower0 = (pi * z * Fraction(-1, 3)).with_precision(work)
        lower1 = pi * Fraction(-1, 3)

        terms = [[[one, zero], [zero, one]]]
        previous: list[list[PadicElem]] | None = None
        for n in range(nterms - 1):
            current = terms[-1]
            following = []
            for i in range(2):
                row = []
                for j in range(2):
                    if i == 0:
                        value = pi * current[1][j]
                    else:
                        value = lower0 * current[0][j]
                        if previous is not None:
                            value = value + lower1 * previous[0][j]
                    row.append(value.div_int(n + 1))
                following.append(row)
            previous = current
            terms.append(following)

        entries = []
        for i in range(2):
            row = []
            for j in range(2):
                coeffs = [terms[n][i][j] for n in range(nterms)]
                if min(c.prec for c in coeffs) < prec:
                    raise PrecisionExhausted(f"solution entry ({i}, {j}) fell below {prec} digits")
                series = PadicSeriesA.from_coefficients(ctx, coeffs, prec, is_polynomial=False)
                row.append(series)
            entries.append(tuple(row))
        logger.debug("local solution at %r: %s terms at %s digits", z, nterms, work)
        return LocalSolution(z, prec, nterms, (entries[0], entries[1]), b_prime / 3)

    def wronskian(self, solution: LocalSolution) -> PadicSeriesA:
        """det C(z, a) as a series in u; constant 1 because trace B = 0."""
        c = solution.entries
        return c[0][0] * c[1][1] - c[0][1] * c[1][0]

    def airy_residual(self, solution: LocalSolution) -> int | None:
        """Least pi-valuation of y'' + (pi^2 a / 3) y for y = C_00; None when it vanishes."""
        ctx = solution.center.ctx
        prec = solution.prec
        y = solution.entry(0, 0).coefficients()
        factor = ctx.pi_power(2, prec) * Fraction(1, 3)
        z = solution.center
        worst: int | None = None
        for n in range(solution.nterms - 2):
            second = y[n + 2].mul_int((n + 2) * (n + 1))
            shifted = y[n] * z + (y[n - 1] if n else ctx.zero(prec))
            v = (second + factor * shifted).with_precision(prec).pi_valuation()
            if v is not None and (worst is None or v < worst):
                worst = v
        return worst

    def check_wronskian(self, solution: LocalSolution) -> None:
        w = self.wronskian(solution)
        ctx = solution.center.ctx
        for n in range(w.length):
            expected = ctx.one(solution.prec) if n == 0 else ctx.zero(solution.prec)
            if w.coefficient(n) != expected:
                raise ConstancyViolation(f"Wronskian has a nonzero u^{n} term", index=n)

    # Frobenius determinant

    def det_frobenius(self, p: int, s: int, zbar: FqElem, prec: int) -> PadicElem:
        fld = build_field(p, s)
        return self.fibre.fibre_L_padic(fld, zbar, 3, prec).coefficient(2)

    def expected_det(self, p: int, s: int, prec: int) -> PadicElem:
        """q when q = 1 mod 3, else -g_2((q^2 - 1)/3) over F_(q^2)."""
        q = p**s
        ctx = self.tower.context(p, s)
        if q % 3 == 1:
            return ctx.from_int(q, prec)
        g = self.tower.gauss_sum(p, 2 * s, (q * q - 1) // 3, prec)
        for sign in (1, -1):
            if g == sign * q:
                logger.info("g_2 = %sq for q = %s", "+" if sign > 0 else "-", q)
                return ctx.from_int(-sign * q, prec)
        raise ConstancyViolation(f"g_2((q^2-1)/3) is not +-q for q = {q}", detail=q)

    def check_det_frobenius(self, p: int, s: int, prec: int, points: int = 3) -> PadicElem:
        """det of the s-fold fibre Frobenius at several Teichmuller points; all must agree."""
        fld = build_field(p, s)
        count = min(points, fld.q - 1)
        values = []
        for index in range(1, count + 1):
            zbar = fld.element_at(index)
            values.append(self.det_frobenius(p, s, zbar, prec))
        first = values[0]
        for index, value in enumerate(values[1:], start=2):
            if value != first:
                raise ConstancyViolation(
                    f"det at point {index} differs from point 1 for q = {fld.q}", index=index
                )
        expected = self.expected_det(p, s, prec)
        if first != expected:
            raise ConstancyViolation(
                f"det = {first!r} but the closed form gives {expected!r}", detail=fld.q
            )
        logger.info("det Frobenius constant at %s points for q = %s", count, fld.q)
        return first

    # transport of the relative Frobenius

    def frobenius_truncation(self, p: int, prec: int) -> int:
        """a-terms of A(a) needed to evaluate it at a unit to prec pi-digits."""
        _, b_prime, _ = self.fibre.growth_parameters(p)
        slope = 2 * b_prime / 3
        needed = Fraction(prec, p - 1) / slope
        return ceil_div(needed.numerator, needed.denominator) + 1

    def _compose_frobenius_centre(
        self, ctx: PadicContext, solution: LocalSolution, z: PadicElem, nterms: int, prec: int
    ) -> list[list[Series]]:
        """C(z^p, (z + u)^p) from the solution at z^p, composed with w = (z + u)^p - z^p."""
        p = ctx.p
        zero = ctx.zero(prec)
        w = [zero] * nterms
        for i in range(1, min(p, nterms - 1) + 1):
            w[i] = (z ** (p - i)).mul_int(comb(p, i)).with_precision(prec)
        powers = [[ctx.one(prec)] + [zero] * (nterms - 1)]
        for _ in range(1, nterms):
            powers.append(_series_mul(powers[-1], w, nterms, zero))
        out = []
        for i in range(2):
            row = []
            for j in range(2):
                coeffs = solution.entry(i, j).coefficients()
                total = [zero] * nterms
                for n in range(nterms):
                    if coeffs[n].is_zero():
                        continue
                    total = [t + coeffs[n] * x for t, x in zip(total, powers[n])]
                row.append(total)
            out.append(row)
        return out

    def check_frob_intertwine(self, p: int, zbar: int, nterms: int, prec: int) -> int | None:
        """Least pi-valuation of A(z+u) C(z^p, (z+u)^p) - C(z, z+u) A(z) through u^(nterms-1).

        Passes when the residual vanishes or sits at or above prec - slack.
        """
        ctx = self.tower.context(p)
        slack = self.settings.precision_slack
        work = prec + slack
        z = self.tower.teichmuller(ctx, ctx.fld.element(zbar), work)
        z_p = (z**p).with_precision(work)
        atrunc = self.frobenius_truncation(p, work)
        logger.info("intertwining at z=%s, p=%s: %s a-terms, %s digits", zbar, p, atrunc, work)
        frob = self.fibre.frob_matrix(p, 3, atrunc, work)
        recentred = [[frob.entry(i, j).recenter(z, nterms) for j in (1, 2)] for i in (1, 2)]
        zero = ctx.zero(work)
        moving = [[entry.coefficients() for entry in row] for row in recentred]
        at_centre = [[[row[j][0]] + [zero] * (nterms - 1) for j in range(2)] for row in moving]

        here = self.solve_deformation(z, nterms, work)
        there = self.solve_deformation(z_p, nterms, work)
        c_here = [[here.entry(i, j).coefficients() for j in range(2)] for i in range(2)]
        c_there = self._compose_frobenius_centre(ctx, there, z, nterms, work)

        left = _matrix_series_mul(moving, c_there, nterms, zero)
        right = _matrix_series_mul(c_here, at_centre, nterms, zero)
        worst: int | None = None
        for i in range(2):
            for j in range(2):
                for n in range(nterms):
                    v = (left[i][j][n] - right[i][j][n]).pi_valuation()
                    if v is not None and (worst is None or v < worst):
                        worst = v
        if worst is not None and worst < prec - slack:
            raise IntertwineViolation(
                f"transport residual has pi-valuation {worst} below {prec - slack}", detail=zbar
            )
        return worst
