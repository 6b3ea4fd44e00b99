"""Exact combinatorial identities behind the even-k decomposition and the trivial factors."""

import logging
from fractions import Fraction
from itertools import permutations
from math import comb, factorial, prod

import sympy

from expsum.core.config import ApplicationSettings, get_settings
from expsum.core.errors import IdentityFailure
from expsum.schemas.reports import CheckResultSchema
from expsum.services.padic_tower import PadicTowerService
from expsum.services.sympow_cohom import (
    det_nk,
    det_nk_closed_form,
    h_coefficient,
    h_coefficient_cramer,
    kernel_dimension,
    kernel_dimension_count,
)

logger = logging.getLogger(__name__)


def combo_sides(n: int) -> tuple[Fraction, Fraction]:
    """sum_j C(n,j)^2 / C(2n,2j) and (2^n n!)^2 / (2n)!."""
    left = sum((Fraction(comb(n, j) ** 2, comb(2 * n, 2 * j)) for j in range(n + 1)), Fraction(0))
    right = Fraction((2**n * factorial(n)) ** 2, factorial(2 * n))
    return left, right


def binsum_sides(tau: tuple[int, ...], m: int) -> tuple[int, Fraction]:
    """(det[C(tau(i), j)], printed right side) for i, j = 1..m.

    The signed sum over sigma <= tau is this determinant, since the omitted
    terms carry a vanishing binomial.
    """
    top = [tau[i] for i in range(m)]
    matrix = sympy.Matrix(m, m, lambda i, j: comb(top[i], j + 1))
    left = int(matrix.det())
    vandermonde = prod(top[s] - top[r] for r in range(m) for s in range(r + 1, m))
    right = -Fraction(prod(top) * vandermonde, prod(factorial(i) for i in range(1, m + 1)))
    return left, right


class IdentityService:
    """Service for handling the exact identity checks."""

    def __init__(
        self, settings: ApplicationSettings | None = None, tower: PadicTowerService | None = None
    ) -> None:
        self.settings = settings or get_settings()
        self.tower = tower or PadicTowerService(self.settings)

    def check_combo(self, nmax: int) -> CheckResultSchema:
        for n in range(nmax + 1):
            left, right = combo_sides(n)
            if left != right:
                raise IdentityFailure(f"binomial sum fails at n = {n}: {left} != {right}", index=n)
        return CheckResultSchema(name="combo", passed=True, detail={"nmax": nmax})

    def check_binsum(self, dmax: int) -> CheckResultSchema:
        """Signed binomial sums against the printed product, up to one global sign."""
        signs: set[int] = set()
        cases = 0
        for d in range(1, dmax + 1):
            for tau in permutations(range(1, d + 1)):
                for m in range(1, d + 1):
                    left, right = binsum_sides(tau, m)
                    if abs(left) != abs(right):
                        raise IdentityFailure(
                            f"|binomial determinant| differs for tau={tau}, m={m}",
                            index=m,
                            detail=list(tau),
                        )
                    if left:
                        signs.add(1 if left == right else -1)
                    cases += 1
        if len(signs) > 1:
            raise IdentityFailure("binomial determinant matches with both signs", detail=dmax)
        observed = signs.pop() if signs else 1
        if observed < 0:
            logger.info("binomial determinant equals minus the printed right side")
        detail = {"dmax": dmax, "cases": cases, "sign": observed}
        return CheckResultSchema(name="binsum", passed=True, detail=detail)

    def check_det_nk(self, ks: list[int]) -> CheckResultSchema:
        printed = {}
        for k in ks:
            value = det_nk(k)
            if value != det_nk_closed_form(k):
                raise IdentityFailure(f"det N_{k} = {value} breaks the closed form", index=k)
            half = k // 2
            printed[str(k)] = value == Fraction(2**k * factorial(half), 3**half)
        detail = {"k": ks, "matches_2_to_the_k": printed}
        return CheckResultSchema(name="det_nk", passed=True, detail=detail)

    def check_h(self, ks: list[int]) -> CheckResultSchema:
        for k in ks:
            for j in range(k // 2 + 1):
                if h_coefficient(k, j) != h_coefficient_cramer(k, j):
                    raise IdentityFailure(f"h for k={k}, j={j} disagrees with Cramer", index=j)
        return CheckResultSchema(name="h_cramer", passed=True, detail={"k": ks})

    def check_kernel_dimension(self, kmax: int, primes: list[int]) -> CheckResultSchema:
        for p in primes:
            for k in range(1, kmax + 1):
                if kernel_dimension(k, p) != kernel_dimension_count(k, p):
                    raise IdentityFailure(f"kernel dimension for k={k}, p={p}", index=k, detail=p)
        detail = {"kmax": kmax, "primes": primes}
        return CheckResultSchema(name="kernel_dimension", passed=True, detail=detail)

    def check_fermat(self, primes: list[int]) -> CheckResultSchema:
        """ord(kappa^p - kappa) > 0 exactly when p = 1, 7 mod 12; kappa^p + kappa otherwise."""
        seen = {}
        for p in primes:
            minus, plus = self.tower.fermat_valuations(p)
            vanishing, unit = (minus, plus) if p % 12 in (1, 7) else (plus, minus)
            if unit != 0 or (vanishing is not None and vanishing <= 0):
                raise IdentityFailure(f"kappa valuations ({minus}, {plus}) for p = {p}", detail=p)
            seen[str(p)] = p % 12
        return CheckResultSchema(name="fermat", passed=True, detail={"classes": seen})

    def identity_suite(
        self,
        nmax: int = 20,
        dmax: int = 6,
        kmax: int = 40,
        primes: tuple[int, ...] = (5, 7),
        fermat_primes: tuple[int, ...] = (13, 17, 5, 7, 11, 23),
    ) -> list[CheckResultSchema]:
        """Every identity check in order; the first failure raises IdentityFailure."""
        logger.info("identity suite: nmax=%s dmax=%s kmax=%s", nmax, dmax, kmax)
        return [
            self.check_combo(nmax),
            self.check_binsum(dmax),
            self.check_det_nk([2, 4, 6]),
            self.check_h([2, 4, 6]),
            self.check_kernel_dimension(kmax, list(primes)),
            self.check_fermat(list(fermat_primes)),
        ]
