"""L-polynomials with a tagged coefficient domain, and the generic polynomial
algebra behind them (Newton identities, Berkowitz characteristic polynomials).

Everything here works over any ring whose elements support ``+ - *``;
division by integers is dispatched per coefficient type.
"""

from collections.abc import Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Literal

from expsum.core.errors import FEViolation, IdentityFailure
from expsum.models.cyclotomic import CycloElem
from expsum.models.padic import PadicElem

DomainTag = Literal["cyclotomic", "padic", "integer", "rational"]


@dataclass(frozen=True)
class LPoly:
    """1 + c_1 T + ... + c_n T^n with coefficients in one tagged domain."""

    coeffs: tuple[Any, ...]
    domain: DomainTag
    meta: dict[str, Any] = field(default_factory=dict, compare=False)

    @property
    def degree(self) -> int:
        for m in range(len(self.coeffs) - 1, 0, -1):
            if not _is_zero(self.coeffs[m]):
                return m
        return 0

    def coefficient(self, m: int) -> Any:
        if 0 <= m < len(self.coeffs):
            return self.coeffs[m]
        return _zero_like(self.coeffs[0])

    def trimmed(self) -> "LPoly":
        return LPoly(self.coeffs[: self.degree + 1], self.domain, dict(self.meta))


def _is_zero(x: Any) -> bool:
    if isinstance(x, (CycloElem, PadicElem)):
        return x.is_zero()
    return x == 0


def _zero_like(x: Any) -> Any:
    if isinstance(x, CycloElem):
        return CycloElem.from_int(x.p, 0)
    if isinstance(x, PadicElem):
        return x.ctx.zero(x.prec)
    return 0


def divide_exact(x: Any, m: int) -> Any:
    """x / m where the quotient is known to lie in the same ring."""
    if isinstance(x, CycloElem):
        return x.exact_div(m)
    if isinstance(x, PadicElem):
        return x.div_int(m)
    if isinstance(x, Fraction):
        return x / m
    quotient, remainder = divmod(x, m)
    if remainder:
        raise IdentityFailure(f"{x} is not divisible by {m}", detail=m)
    return quotient


def lpoly_from_power_sums(sums: Sequence[Any], one: Any) -> list[Any]:
    """Coefficients of exp(sum_i P_i T^i / i) through T^len(sums).

    m c_m = sum_{i=1}^{m} P_i c_{m-i}; the division by m is checked exact.
    """
    coeffs = [one]
    for m in range(1, len(sums) + 1):
        total = sums[0] * coeffs[m - 1]
        for i in range(2, m + 1):
            total = total + sums[i - 1] * coeffs[m - i]
        coeffs.append(divide_exact(total, m))
    return coeffs


def power_sums_from_poly(coeffs: Sequence[Any], count: int) -> list[Any]:
    """P_1..P_count with sum P_i T^i / i = log(sum c_m T^m), c_0 = 1."""
    zero = _zero_like(coeffs[0])

    def c(m: int) -> Any:
        return coeffs[m] if m < len(coeffs) else zero

    sums: list[Any] = []
    for m in range(1, count + 1):
        total = c(m) * m
        for i in range(1, m):
            total = total - sums[i - 1] * c(m - i)
        sums.append(total)
    return sums


def poly_mul(left: Sequence[Any], right: Sequence[Any], limit: int | None = None) -> list[Any]:
    size = len(left) + len(right) - 1
    if limit is not None:
        size = min(size, limit)
    out: list[Any] = [None] * size
    for i, a in enumerate(left):
        if i >= size:
            break
        for j, b in enumerate(right):
            if i + j >= size:
                break
            term = a * b
            out[i + j] = term if out[i + j] is None else out[i + j] + term
    zero = _zero_like(left[0])
    return [zero if x is None else x for x in out]


def poly_divide_exact(numerator: Sequence[Any], denominator: Sequence[Any]) -> list[Any]:
    """Quotient of power series with denominator[0] = 1, through len(numerator)."""
    quotient: list[Any] = []
    for m in range(len(numerator)):
        total = numerator[m]
        for i in range(1, min(m, len(denominator) - 1) + 1):
            total = total - denominator[i] * quotient[m - i]
        quotient.append(total)
    return quotient


def charpoly_berkowitz(
    matrix: Sequence[Sequence[Any]], one: Any, zero: Any
) -> list[Any]:
    """[1, c_1, ..., c_n] with det(xI - M) = x^n + c_1 x^(n-1) + ... + c_n.

    Division free, so it runs over any commutative ring; the same list gives
    det(1 - T M) = 1 + c_1 T + ... + c_n T^n.
    """
    n = len(matrix)
    if n == 0:
        return [one]
    vect = [one, -matrix[0][0]]
    for r in range(1, n):
        leading = [row[:r] for row in matrix[:r]]
        row_part = matrix[r][:r]
        column = [matrix[i][r] for i in range(r)]
        toeplitz = [one, -matrix[r][r]]
        current = column
        for _ in range(r):
            toeplitz.append(-_dot(row_part, current, zero))
            current = [_dot(leading[i], current, zero) for i in range(r)]
        updated = []
        for i in range(r + 2):
            total = zero
            for j in range(min(i, r) + 1):
                total = total + toeplitz[i - j] * vect[j]
            updated.append(total)
        vect = updated
    return vect


def _dot(left: Sequence[Any], right: Sequence[Any], zero: Any) -> Any:
    total = zero
    for a, b in zip(left, right):
        total = total + a * b
    return total


def matrix_product(
    left: Sequence[Sequence[Any]], right: Sequence[Sequence[Any]], zero: Any
) -> list[list[Any]]:
    return [
        [_dot(row, [right[k][j] for k in range(len(right))], zero) for j in range(len(right[0]))]
        for row in left
    ]


def functional_equation_constant(coeffs: Sequence[Any], weight: int) -> Any:
    """c with P(T) = c T^n P(weight^-1 T^-1), n = len(coeffs) - 1; c is the top coefficient.

    Coefficient-wise: c_m weight^(n-m) = c_n c_(n-m).
    """
    n = len(coeffs) - 1
    top = coeffs[n]
    for m in range(n + 1):
        if coeffs[m] * weight ** (n - m) != top * coeffs[n - m]:
            raise FEViolation(f"functional equation fails at T^{m}", index=m)
    return top
