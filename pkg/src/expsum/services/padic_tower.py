import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial

from expsum.core.config import ApplicationSettings, get_settings
from expsum.core.errors import PrecisionExhausted, TooLarge
from expsum.models.cyclotomic import CycloElem
from expsum.models.finite_field import FqElem, build_field
from expsum.models.lpoly import LPoly
from expsum.models.padic import PadicContext, PadicElem, ceil_div

logger = logging.getLogger(__name__)


@lru_cache(maxsize=None)
def padic_context(p: int, s: int = 1) -> PadicContext:
    """Shared tower W(F_{p^s})[pi] for the prime p."""
    return PadicContext(build_field(p, s))


@lru_cache(maxsize=None)
def splitting_rational(p: int, n: int) -> tuple[int, Fraction]:
    """(r, Q_n) with theta_n = pi^r Q_n exactly, r = n mod (p-1).

    theta(t) = exp(pi t) exp(-pi t^p), and pi^(p-1) = -p folds every power of pi
    beyond r into a rational factor.
    """
    e = p - 1
    r = n % e
    top = (n - r) // e
    total = Fraction(0)
    j = 0
    while p * j <= n:
        term = Fraction((-1) ** j * (-p) ** (top - j), factorial(n - p * j) * factorial(j))
        total += term
        j += 1
    return r, total


@dataclass(frozen=True)
class SplittingCoeffs:
    """theta_0..theta_n of exp(pi(t - t^p)) at a common precision."""

    p: int
    prec: int
    theta: tuple[PadicElem, ...]

    def __getitem__(self, i: int) -> PadicElem:
        return self.theta[i]

    def __len__(self) -> int:
        return len(self.theta)


class PadicTowerService:
    """Service for handling Teichmuller lifts, splitting coefficients and Gauss sums."""

    def __init__(self, settings: ApplicationSettings | None = None) -> None:
        self.settings = settings or get_settings()

    def context(self, p: int, s: int = 1) -> PadicContext:
        return padic_context(p, s)

    def teichmuller(self, ctx: PadicContext, x: FqElem, prec: int) -> PadicElem:
        """Teichmuller representative of x to absolute precision prec."""
        if prec <= 0:
            raise PrecisionExhausted(f"precision must be positive, got {prec}")
        return ctx.teichmuller(x, prec)

    def theta(self, ctx: PadicContext, n: int, prec: int) -> PadicElem:
        r, rational = splitting_rational(ctx.p, n)
        if rational == 0:
            return ctx.zero(prec)
        return ctx.from_fraction(rational, prec - r).mul_pi_power(r)

    def splitting_coeffs(self, ctx: PadicContext, n: int, prec: int) -> SplittingCoeffs:
        """theta_0..theta_n; each is exact up to the requested precision."""
        if prec <= 0:
            raise PrecisionExhausted(f"precision must be positive, got {prec}")
        return SplittingCoeffs(ctx.p, prec, tuple(self.theta(ctx, i, prec) for i in range(n + 1)))

    def splitting_terms(self, p: int, prec: int) -> int:
        """Number of theta terms whose tail lies below pi^prec: ord theta_n >= (p-1)n/p^2."""
        return ceil_div(prec * p * p, (p - 1) * (p - 1)) + 1

    def splitting_value(self, ctx: PadicContext, t: PadicElem, prec: int) -> PadicElem:
        """theta(t) for an integral t."""
        total = ctx.zero(prec)
        power = ctx.one(prec)
        for n in range(self.splitting_terms(ctx.p, prec)):
            theta_n = self.theta(ctx, n, prec)
            if not theta_n.is_zero():
                total = total + theta_n * power
            power = (power * t).with_precision(prec)
        return total.with_precision(prec)

    def zeta(self, ctx: PadicContext, prec: int) -> PadicElem:
        """The primitive p-th root of unity theta(1)."""
        return self.splitting_value(ctx, ctx.one(prec), prec)

    def embed_padic(self, x: CycloElem, ctx: PadicContext, prec: int) -> PadicElem:
        """Image of x under zeta_p -> theta(1)."""
        zeta = self.zeta(ctx, prec)
        powers = [ctx.one(prec)]
        for _ in range(ctx.p - 1):
            powers.append(powers[-1] * zeta)
        if not sum(powers[1:], powers[0]).is_zero():
            raise PrecisionExhausted(f"theta(1) fails the cyclotomic relation at precision {prec}")
        total = ctx.zero(prec)
        for c, power in zip(x.coeffs, powers):
            if c:
                total = total + power * c
        return total.with_precision(prec)

    def embed_lpoly(self, poly: LPoly, p: int, prec: int, s: int = 1) -> LPoly:
        """Image of an exact L-polynomial in the degree-s tower, with zeta_p -> theta(1)."""
        ctx = self.context(p, s)
        coeffs = []
        for c in poly.coeffs:
            if isinstance(c, CycloElem):
                coeffs.append(self.embed_padic(c, ctx, prec))
            else:
                coeffs.append(ctx.from_fraction(Fraction(c), prec))
        return LPoly(tuple(coeffs), "padic", {**poly.meta, "prec": prec})

    def gauss_sum(self, p: int, s: int, j: int, prec: int) -> PadicElem:
        """g_s(j) = -sum over units t of t^(-j) theta(t) theta(t^p) ... theta(t^(p^(s-1)))."""
        ctx = self.context(p, s)
        fld = ctx.fld
        q = fld.q
        if q > self.settings.enum_cap:
            raise TooLarge(f"Gauss sum over F_{p}^{s} exceeds the enumeration cap")
        logger.debug("gauss sum p=%s s=%s j=%s prec=%s", p, s, j, prec)
        theta_at = {}
        units = [fld.element_at(i) for i in range(1, q)]
        for x in units:
            theta_at[x.coeffs] = self.splitting_value(ctx, ctx.teichmuller(x, prec), prec)
        total = ctx.zero(prec)
        for x in units:
            product = ctx.teichmuller(fld.pow(x, (-j) % (q - 1)), prec)
            y = x
            for _ in range(s):
                product = product * theta_at[y.coeffs]
                y = fld.frobenius(y)
            total = total + product
        return (-total).with_precision(prec)

    def padic_exp(self, x: PadicElem) -> PadicElem:
        return x.exp()

    def padic_log(self, x: PadicElem) -> PadicElem:
        return x.log()

    def sqrt(self, ctx: PadicContext, value: int, prec: int) -> PadicElem:
        """Square root of an integer unit, Hensel-lifted from the first residue root."""
        fld = ctx.fld
        target = fld.element(value)
        root = None
        for index in range(1, fld.q):
            candidate = fld.element_at(index)
            if fld.mul(candidate, candidate) == target:
                root = candidate
                break
        if root is None:
            raise PrecisionExhausted(f"{value} has no square root in F_{ctx.p}^{ctx.s}")
        a = ctx.from_int(value, prec)
        y = ctx.lift(root, prec)
        reached = 1
        while reached < prec:
            y = (y - (y * y - a) * (y * 2).inverse()).with_precision(prec)
            reached *= 2
        return y

    def kappa(self, p: int, prec: int) -> PadicElem:
        """kappa = 2i / (3 sqrt 3), in Z_p[pi] when p = 1 mod 12 and over F_{p^2} otherwise."""
        s = 1 if p % 12 == 1 else 2
        ctx = self.context(p, s)
        i = self.sqrt(ctx, -1, prec)
        root3 = self.sqrt(ctx, 3, prec)
        return (i * 2 * (root3 * 3).inverse()).with_precision(prec)

    def fermat_valuations(
        self, p: int, prec: int | None = None
    ) -> tuple[Fraction | None, Fraction | None]:
        """(ord(kappa^p - kappa), ord(kappa^p + kappa)); None means zero to precision."""
        prec = prec or self.settings.default_precision(p)
        kappa = self.kappa(p, prec)
        power = kappa**p
        return (power - kappa).valuation(), (power + kappa).valuation()
