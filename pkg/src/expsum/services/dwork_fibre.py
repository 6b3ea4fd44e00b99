import logging
from collections.abc import Callable, Sequence
from fractions import Fraction
from math import factorial
from typing import TypeVar

from expsum.core.config import ApplicationSettings, get_settings
from expsum.core.errors import (
    BadIndex,
    DomainInputError,
    HypothesisFailed,
    IdentityFailure,
    NonConvergent,
    PrecisionExhausted,
    TooLarge,
    TruncationUncertified,
)
from expsum.models.cohomology import FrobMatrixA, LeadingTerm, XSeries
from expsum.models.finite_field import FieldDescriptor, FqElem
from expsum.models.lpoly import (
    LPoly,
    charpoly_berkowitz,
    lpoly_from_power_sums,
    matrix_product,
    poly_mul,
)
from expsum.models.padic import PadicContext, PadicElem, ceil_div
from expsum.models.padic_series import PadicSeriesA, series_matrix_product
from expsum.services.padic_tower import PadicTowerService, SplittingCoeffs

logger = logging.getLogger(__name__)

V = TypeVar("V", PadicElem, PadicSeriesA)


def reduce_top_down(coeffs: Sequence[V], d: int, times_c: Callable[[V], V]) -> list[V]:
    """Coordinates on x^0..x^(d-1) of sum coeffs[n] x^n modulo D_c.

    Uses d pi x^(n+d) = D_c(x^n) - n x^n - pi c x^(n+1), from the top degree down.
    """
    work = list(coeffs)
    for n in range(len(work) - 1, d - 1, -1):
        u = work[n]
        if isinstance(u, PadicElem) and u.is_zero():
            continue
        if n > d:
            work[n - d] = work[n - d] + (u * Fraction(d - n, d)).mul_pi_power(-1)
        work[n - d + 1] = work[n - d + 1] + times_c(u) * Fraction(-1, d)
    return work[:d]


class DworkFibreService:
    """Service for handling Dwork cohomology of the fibres of x^d + a x."""

    def __init__(
        self, settings: ApplicationSettings | None = None, tower: PadicTowerService | None = None
    ) -> None:
        self.settings = settings or get_settings()
        self.tower = tower or PadicTowerService(self.settings)

    def growth_parameters(self, p: int) -> tuple[Fraction, Fraction, Fraction]:
        """(b, b', e) with b = (p-1)/p, b' = b/p and the per-step gain e = b - 1/(p-1)."""
        b = Fraction(p - 1, p)
        b_prime = b / p
        gain = b - Fraction(1, p - 1)
        if gain <= 0 or not b > Fraction(1, p - 1) > b_prime:
            raise NonConvergent(f"reduction does not converge for p = {p}")
        return b, b_prime, gain

    def x_truncation(self, p: int, d: int, prec: int) -> int:
        """Smallest x-degree whose dropped tail reduces to valuation >= prec (pi-digits)."""
        _, b_prime, gain = self.growth_parameters(p)
        needed = (Fraction(d * prec, p - 1) + b_prime * (d - 1)) / gain
        return max(d, ceil_div(needed.numerator, needed.denominator) - 1)

    def tail_floor(self, p: int, d: int, n_max: int) -> Fraction:
        _, b_prime, gain = self.growth_parameters(p)
        return gain * (n_max + 1) / d - b_prime * (d - 1) / d

    def _working_precision(self, prec: int, n_max: int, d: int) -> int:
        # each reduction step divides by pi once
        return prec + ceil_div(n_max, d) + self.settings.precision_slack

    def _h_series(
        self, ctx: PadicContext, theta: SplittingCoeffs, r: int, d: int, prec: int
    ) -> PadicSeriesA:
        if r < 0:
            return PadicSeriesA.zero(ctx, prec)
        terms = {r - d * i: theta[i] * theta[r - d * i] for i in range(r // d + 1)}
        return PadicSeriesA.from_terms(ctx, terms, prec, r + 1)

    def f_series(
        self, p: int, d: int, rmax: int, prec: int, atrunc: int | None = None
    ) -> list[PadicSeriesA]:
        """H_0 .. H_rmax with F(a, x) = theta(x^d) theta(a x) = sum H_r(a) x^r."""
        if d < 2 or d % p == 0:
            raise DomainInputError(f"family degree {d} is not allowed for p = {p}")
        _, b_prime, _ = self.growth_parameters(p)
        ctx = self.tower.context(p)
        theta = self.tower.splitting_coeffs(ctx, rmax, prec)
        slope = b_prime * (1 - Fraction(1, d))
        out = []
        for r in range(rmax + 1):
            series = self._h_series(ctx, theta, r, d, prec).certify(slope, b_prime * r / d)
            if atrunc is not None:
                series = series.truncate(atrunc)
            out.append(series)
        return out

    def apply_da(self, u: XSeries, d: int) -> XSeries:
        """D_a = x d/dx + pi (d x^d + a x) applied to a polynomial in x."""
        if u.tail is not None:
            raise DomainInputError("D_a is applied to polynomials in x only")
        terms = list(u.terms)
        ctx = terms[0].ctx
        prec = min(t.prec for t in terms)
        size = len(terms) + d
        out = [PadicSeriesA.zero(ctx, prec) for _ in range(size)]
        for n, coefficient in enumerate(terms):
            if n:
                out[n] = out[n] + coefficient.mul_int(n)
            out[n + d] = out[n + d] + coefficient.mul_int(d).mul_pi_power(1)
            out[n + 1] = out[n + 1] + coefficient.shift_a(1).mul_pi_power(1)
        return XSeries(tuple(out))

    def reduce_mod_Da(
        self, u: XSeries, d: int, c: PadicSeriesA | None = None
    ) -> list[PadicSeriesA]:
        """Component of u in the span of x^0..x^(d-1) modulo D_c; c defaults to a."""
        p = u.terms[0].p
        self.growth_parameters(p)
        if c is None:
            coords = reduce_top_down(u.terms, d, lambda v: v.shift_a(1))
        else:
            coords = reduce_top_down(u.terms, d, lambda v: v * c)
        while len(coords) < d:
            coords.append(PadicSeriesA.zero(u.terms[0].ctx, u.terms[0].prec))
        if u.tail is not None:
            floor = ceil_div((u.tail * (p - 1)).numerator, (u.tail * (p - 1)).denominator)
            coords = [coord.with_precision(floor) for coord in coords]
        return coords

    def reduce_fibre(self, coeffs: Sequence[PadicElem], d: int, c: PadicElem) -> list[PadicElem]:
        """Reduction modulo D_c at a specialised parameter c."""
        self.growth_parameters(c.p)
        return reduce_top_down(coeffs, d, lambda v: v * c)

    def frob_matrix(self, p: int, d: int, atrunc: int, prec: int) -> FrobMatrixA:
        """Relative Frobenius: row i is psi_x(F(a,x) x^i) reduced modulo D_{a^p}."""
        if d < 2 or d % p == 0:
            raise DomainInputError(f"family degree {d} is not allowed for p = {p}")
        _, b_prime, _ = self.growth_parameters(p)
        ctx = self.tower.context(p)
        n_max = self.x_truncation(p, d, prec)
        work = self._working_precision(prec, n_max, d)
        logger.info("relative Frobenius p=%s d=%s: x-degree %s at %s digits", p, d, n_max, work)
        theta = self.tower.splitting_coeffs(ctx, p * n_max, work)
        slope = b_prime * (1 - Fraction(1, d))

        rows = []
        for i in range(1, d):
            terms = [self._h_series(ctx, theta, p * j - i, d, work) for j in range(n_max + 1)]
            coords = reduce_top_down(terms, d, lambda v: v.shift_a(p))
            row = []
            for j in range(1, d):
                entry = coords[j]
                if entry.prec < prec:
                    raise PrecisionExhausted(
                        f"entry ({i}, {j}) kept {entry.prec} of {prec} digits"
                    )
                entry = entry.with_precision(prec).truncate(atrunc)
                row.append(entry.certify(slope, b_prime * (p * j - i) / d))
            rows.append(tuple(row))
        return FrobMatrixA(p, d, prec, tuple(rows))

    def connection_matrix(
        self, ctx: PadicContext, d: int, prec: int, power: int = 1
    ) -> list[list[PadicSeriesA]]:
        """G(a^power) for the Gauss-Manin operator a d/da + pi a x on x, ..., x^(d-1)."""
        pi = ctx.pi_power(1, prec)
        zero = PadicSeriesA.zero(ctx, prec)
        matrix = [[zero] * (d - 1) for _ in range(d - 1)]
        for i in range(d - 2):
            matrix[i][i + 1] = PadicSeriesA.from_terms(ctx, {power: pi}, prec)
        # pi a x^d reduces to -(pi a^2 / d) x
        matrix[d - 2][0] = PadicSeriesA.from_terms(ctx, {2 * power: pi * Fraction(-1, d)}, prec)
        return matrix

    def frob_ode_residual(self, frob: FrobMatrixA) -> Fraction | None:
        """Smallest valuation in a A' - G(a) A + p A G(a^p); None when it vanishes to precision."""
        ctx = self.tower.context(frob.p)
        rows = [list(row) for row in frob.rows]
        g = self.connection_matrix(ctx, frob.d, frob.prec)
        g_p = self.connection_matrix(ctx, frob.d, frob.prec, power=frob.p)
        left = series_matrix_product(g, rows)
        right = series_matrix_product(rows, g_p)
        worst: Fraction | None = None
        for i, row in enumerate(rows):
            for j, entry in enumerate(row):
                residual = entry.euler() - left[i][j] + right[i][j].mul_int(frob.p)
                for t in range(min(entry.length, residual.length)):
                    v = residual.coefficient(t).valuation()
                    if v is not None and (worst is None or v < worst):
                        worst = v
        return worst

    def fibre_frob_matrix(
        self, fld: FieldDescriptor, zbar: FqElem, d: int, prec: int
    ) -> list[list[PadicElem]]:
        """Matrix of alpha_z : M_z -> M_{z^p} at the Teichmuller lift of zbar."""
        p = fld.p
        if d < 2 or d % p == 0:
            raise DomainInputError(f"family degree {d} is not allowed for p = {p}")
        fld.check(zbar)
        ctx = self.tower.context(p, fld.s)
        n_max = self.x_truncation(p, d, prec)
        work = self._working_precision(prec, n_max, d)
        top = p * n_max
        theta = self.tower.splitting_coeffs(ctx, top, work)
        z = self.tower.teichmuller(ctx, zbar, work)
        scaled = []
        power = ctx.one(work)
        for m in range(top + 1):
            scaled.append(theta[m] * power)
            power = (power * z).with_precision(work)
        c = (z**p).with_precision(work)

        def h_value(r: int) -> PadicElem:
            if r < 0:
                return ctx.zero(work)
            total = ctx.zero(work)
            for i in range(r // d + 1):
                total = total + theta[i] * scaled[r - d * i]
            return total

        matrix = []
        for i in range(1, d):
            coords = self.reduce_fibre([h_value(p * j - i) for j in range(n_max + 1)], d, c)
            row = []
            for j in range(1, d):
                if coords[j].prec < prec:
                    raise PrecisionExhausted(
                        f"fibre entry ({i}, {j}) kept {coords[j].prec} of {prec} digits"
                    )
                row.append(coords[j].with_precision(prec))
            matrix.append(row)
        return matrix

    def fibre_L_padic(self, fld: FieldDescriptor, zbar: FqElem, d: int, prec: int) -> LPoly:
        """det(1 - T A(z) A(z^p) ... A(z^(p^(s-1)))) with s the degree of fld."""
        ctx = self.tower.context(fld.p, fld.s)
        one, zero = ctx.one(prec), ctx.zero(prec)
        product: list[list[PadicElem]] | None = None
        for k in range(fld.s):
            step = self.fibre_frob_matrix(fld, fld.frobenius(zbar, k), d, prec)
            product = step if product is None else matrix_product(product, step, zero)
        assert product is not None
        coeffs = [c.with_precision(prec) for c in charpoly_berkowitz(product, one, zero)]
        meta = {"p": fld.p, "s": fld.s, "d": d, "lambda": list(zbar.coeffs), "prec": prec}
        return LPoly(tuple(coeffs), "padic", meta)

    def frob_leading_term(self, d: int, p: int, i: int, j: int) -> LeadingTerm:
        """Main term pi^(n-(d-1)r) a^(n-dr) / (r! (n-dr)!) of A_ij, n = pj - i, r = n // d."""
        if p < d + 6:
            raise HypothesisFailed(f"the leading-term estimate needs p >= d + 6, got p = {p}")
        if not (1 <= i < d and 1 <= j < d):
            raise BadIndex(f"entry ({i}, {j}) outside 1..{d - 1}")
        n = p * j - i
        r = n // d
        t = n - d * r
        pi_power = n - (d - 1) * r
        return LeadingTerm(
            r=r,
            a_degree=t,
            pi_power=pi_power,
            coefficient=Fraction(1, factorial(r) * factorial(t)),
            valuation=Fraction(pi_power, p - 1),
        )

    def dual_basis(
        self, p: int, d: int, i: int, jmax: int, prec: int, pi_sign: int = 1
    ) -> list[PadicSeriesA]:
        """B_0 .. B_jmax of g_i^* = x^-i + sum_{j >= d} B_j x^-j.

        B_{n+d} = -(n / (d pi)) B_n - (a/d) B_{n+1}; pi_sign = -1 uses -pi throughout.
        """
        if not 0 <= i < d:
            raise BadIndex(f"dual basis index {i} outside 0..{d - 1}")
        self.growth_parameters(p)
        ctx = self.tower.context(p)
        one = PadicSeriesA.constant(ctx.one(prec))
        zero = PadicSeriesA.zero(ctx, prec)
        coeffs = [one if j == i else zero for j in range(d)]
        for n in range(jmax - d + 1):
            step = (coeffs[n] * Fraction(-n, d)).mul_pi_power(-1)
            if pi_sign < 0:
                step = -step
            coeffs.append(step + coeffs[n + 1].shift_a(1) * Fraction(-1, d))
        return coeffs[: jmax + 1]

    def pairing(self, u: XSeries, dual: Sequence[PadicSeriesA]) -> PadicSeriesA:
        """<u, g> = sum_j u_j B_j over the common range."""
        size = min(len(u.terms), len(dual))
        total = u.terms[0] * dual[0]
        for j in range(1, size):
            total = total + u.terms[j] * dual[j]
        return total

    def theta_bar_dual(
        self, p: int, d: int, i: int, jmax: int, prec: int
    ) -> dict[int, PadicSeriesA]:
        """Positive part of (-x d/dx - pi(d x^d + a x)) g_{-pi,i}^*; the rest must vanish."""
        coeffs = self.dual_basis(p, d, i, jmax, prec, pi_sign=-1)
        ctx = self.tower.context(p)
        pi = ctx.pi_power(1, prec)

        def b(j: int) -> PadicSeriesA | None:
            return coeffs[j] if 0 <= j <= jmax else None

        image: dict[int, PadicSeriesA] = {}
        for m in range(d, d - jmax - 1, -1):
            total = PadicSeriesA.zero(ctx, prec)
            if m and (term := b(-m)) is not None:
                total = total + term.mul_int(-m)
            if (term := b(d - m)) is not None:
                total = total - term.mul_int(d) * pi
            if (term := b(1 - m)) is not None:
                total = total - term.shift_a(1) * pi
            if m >= 1:
                if not total.is_zero():
                    image[m] = total
            elif not total.is_zero():
                raise IdentityFailure(f"x^{m} survives in the dual image", index=m)
        return image

    def fredholm_truncated(
        self,
        fld: FieldDescriptor,
        zbar: FqElem,
        d: int,
        tdeg: int,
        prec: int,
        nbasis: int | None = None,
    ) -> list[PadicElem]:
        """det(1 - T alpha_z) mod T^(tdeg+1) on the monomials x^0 .. x^nbasis."""
        p = fld.p
        if fld.frobenius(fld.check(zbar)) != zbar:
            raise DomainInputError("the Fredholm check runs at points of F_p")
        b, b_prime, _ = self.growth_parameters(p)
        needed = Fraction(prec, p - 1) * d / (b - b_prime)
        minimal = ceil_div(needed.numerator, needed.denominator) - 1
        if nbasis is None:
            nbasis = minimal
        if nbasis < minimal:
            raise TruncationUncertified(
                f"{nbasis + 1} monomials cannot certify {prec} digits; need {minimal + 1}"
            )
        if nbasis + 1 > self.settings.fredholm_max_basis:
            raise TooLarge(f"{nbasis + 1} monomials exceed the configured maximum")

        ctx = self.tower.context(p, fld.s)
        top = p * nbasis
        theta = self.tower.splitting_coeffs(ctx, top, prec)
        z = self.tower.teichmuller(ctx, zbar, prec)
        scaled = []
        power = ctx.one(prec)
        for m in range(top + 1):
            scaled.append(theta[m] * power)
            power = power * z
        values: dict[int, PadicElem] = {}

        def h_value(r: int) -> PadicElem:
            if r < 0:
                return ctx.zero(prec)
            if r not in values:
                total = ctx.zero(prec)
                for i in range(r // d + 1):
                    total = total + theta[i] * scaled[r - d * i]
                values[r] = total
            return values[r]

        zero = ctx.zero(prec)
        matrix = [[h_value(p * j - i) for j in range(nbasis + 1)] for i in range(nbasis + 1)]
        traces = []
        power_matrix = matrix
        for m in range(1, tdeg + 1):
            if m > 1:
                power_matrix = matrix_product(power_matrix, matrix, zero)
            trace = zero
            for k in range(nbasis + 1):
                trace = trace + power_matrix[k][k]
            traces.append(-trace)
        return [c.with_precision(prec) for c in lpoly_from_power_sums(traces, ctx.one(prec))]

    def elementary_product(self, poly: LPoly, tdeg: int, prec: int) -> list[PadicElem]:
        """prod_{i >= 0} L^*(p^i T) mod T^(tdeg+1), with L^* = (1 - T) L."""
        first = poly.coeffs[0]
        ctx, p = first.ctx, first.p
        one = ctx.one(prec)
        star = poly_mul(list(poly.coeffs), [one, -one])
        result = [one]
        i = 0
        while i * (p - 1) < prec:
            scaled = [c.mul_int(p ** (i * m)) for m, c in enumerate(star)]
            result = poly_mul(result, scaled, limit=tdeg + 1)
            i += 1
        while len(result) < tdeg + 1:
            result.append(ctx.zero(prec))
        return [c.with_precision(prec) for c in result]
