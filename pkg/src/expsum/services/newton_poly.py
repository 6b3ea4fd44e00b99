import logging
from fractions import Fraction

from expsum.core.config import ApplicationSettings, get_settings
from expsum.core.errors import DomainInputError, HypothesisFailed
from expsum.models.cyclotomic import CycloElem
from expsum.models.lpoly import LPoly
from expsum.models.padic import PadicElem, p_valuation
from expsum.models.polygon import BoundRow, NPolygon, newton_polygon
from expsum.services.padic_tower import PadicTowerService

logger = logging.getLogger(__name__)

PolygonRow = tuple[int, int, int]


class NewtonPolyService:
    """Service for handling Newton polygons and their predicted shapes."""

    def __init__(
        self, settings: ApplicationSettings | None = None, tower: PadicTowerService | None = None
    ) -> None:
        self.settings = settings or get_settings()
        self.tower = tower or PadicTowerService(self.settings)

    def predicted_fibre_slopes(self, d: int, p: int, *, strict: bool = False) -> list[Fraction]:
        """ord pi_j = j - ((d-1)/(p-1)) (pj - tau_p(j)) / d with tau_p(j) = pj mod d, sorted.

        ``strict`` enforces p >= d + 6, under which the shape is a theorem.
        """
        if d < 2 or p % d == 0 or p <= d:
            raise HypothesisFailed(f"the slope formula needs p > d and p prime to d, got {p}, {d}")
        if strict and p < d + 6:
            raise HypothesisFailed(f"p = {p} is below d + 6 = {d + 6}")
        slopes = []
        for j in range(1, d):
            tau = p * j % d
            slopes.append(j - Fraction(d - 1, p - 1) * Fraction(p * j - tau, d))
        return sorted(slopes)

    def coefficient_valuations(self, poly: LPoly, p: int) -> list[Fraction | None]:
        """ord_p of every coefficient; None when it is zero (to precision for p-adic ones)."""
        prec = poly.meta.get("prec") or self.settings.default_precision(p)
        ctx = self.tower.context(p)
        out: list[Fraction | None] = []
        for c in poly.coeffs:
            if isinstance(c, PadicElem):
                out.append(c.valuation())
            elif isinstance(c, CycloElem):
                out.append(self.tower.embed_padic(c, ctx, prec).valuation())
            elif c == 0:
                out.append(None)
            else:
                value = Fraction(c)
                out.append(
                    Fraction(p_valuation(value.numerator, p) - p_valuation(value.denominator, p))
                )
        return out

    def polygon_of(self, poly: LPoly, p: int) -> NPolygon:
        valuations = self.coefficient_valuations(poly, p)
        return newton_polygon(list(enumerate(valuations)))

    def polygon_rows(self, polygon: NPolygon) -> list[PolygonRow]:
        """(index, valuation numerator, valuation denominator) per vertex."""
        return [(i, v.numerator, v.denominator) for i, v in polygon.vertices]

    def is_symmetric(self, polygon: NPolygon, weight: int | Fraction) -> bool:
        return polygon.is_symmetric(weight)

    def lower_bound_table(self, poly: LPoly, k: int, p: int) -> list[BoundRow]:
        """Quadratic bounds ((p-1)^2 / 3p^2)(m^2 + m + mk) against every coefficient."""
        if k % 2 == 0 or k >= p:
            raise DomainInputError(f"the lower bound is stated for odd k < p, got k = {k}")
        scale = Fraction((p - 1) ** 2, 3 * p * p)
        valuations = self.coefficient_valuations(poly, p)
        rows = []
        for m, valuation in enumerate(valuations):
            exact = valuation is not None
            if valuation is None:
                c = poly.coeffs[m]
                prec = c.prec if isinstance(c, PadicElem) else poly.meta.get("prec", 0)
                valuation = Fraction(prec, p - 1)
            quadratic = m * m + m + m * k
            rows.append(
                BoundRow(
                    m,
                    valuation,
                    exact,
                    scale * quadratic,
                    scale * (m * m + (k + 1) * m),
                    Fraction(quadratic, 3),
                )
            )
        return rows

    def check_lower_bound(self, poly: LPoly, k: int, p: int) -> tuple[bool, list[BoundRow]]:
        rows = self.lower_bound_table(poly, k, p)
        passed = all(row.passed for row in rows)
        if not passed:
            failing = [row.m for row in rows if not row.passed]
            logger.warning("M_%s for p=%s breaks the lower bound at %s", k, p, failing)
        return passed, rows
