"""Truncated power series in the deformation variable a over Z_p[pi].

Coefficient t is pi^val0 * sum_{j < p-1} D[t][j] pi^j with integer digits D
kept modulo p^K, K = ceil((prec - val0) / (p - 1)); every coefficient shares the
absolute precision ``prec``.  A series either is an exact polynomial or is
known for t < length, and ``growth = (slope, rho)`` certifies
ord(B_t) >= slope * t + rho (p-units) for every t, retained or not.
"""

from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from fractions import Fraction

from expsum.core.errors import GrowthViolation, PrecisionExhausted
from expsum.models.padic import PadicContext, PadicElem, ceil_div

Growth = tuple[Fraction, Fraction]


def _rotate(row: Sequence[int], shift: int, p: int, e: int) -> tuple[int, ...]:
    """Digits of pi^shift * sum row[j] pi^j, against the same base exponent."""
    wraps, rotate = divmod(shift, e)
    factor = (-p) ** wraps
    out = [0] * e
    for j, c in enumerate(row):
        if c:
            target = j + rotate
            if target >= e:
                out[target - e] += -p * factor * c
            else:
                out[target] += factor * c
    return tuple(out)


def _mul_rows(left: Sequence[int], right: Sequence[int], p: int, e: int) -> list[int]:
    raw = [0] * (2 * e - 1)
    for i, a in enumerate(left):
        if a:
            for j, b in enumerate(right):
                if b:
                    raw[i + j] += a * b
    for t in range(2 * e - 2, e - 1, -1):
        raw[t - e] -= p * raw[t]
    return raw[:e]


@dataclass(frozen=True, eq=False)
class PadicSeriesA:
    ctx: PadicContext
    val0: int
    prec: int
    digits: tuple[tuple[int, ...], ...]
    is_polynomial: bool = True
    growth: Growth | None = None

    def __post_init__(self) -> None:
        if self.ctx.s != 1:
            raise ValueError("series in a live over Z_p[pi]")

    @property
    def length(self) -> int:
        return len(self.digits)

    @property
    def p(self) -> int:
        return self.ctx.p

    # construction

    @classmethod
    def zero(cls, ctx: PadicContext, prec: int, length: int = 0) -> "PadicSeriesA":
        return cls(ctx, prec, prec, ((0,) * ctx.e,) * length, is_polynomial=length == 0)

    @classmethod
    def from_coefficients(
        cls,
        ctx: PadicContext,
        coeffs: Sequence[PadicElem],
        prec: int | None = None,
        *,
        is_polynomial: bool = True,
        growth: Growth | None = None,
    ) -> "PadicSeriesA":
        known = min((c.prec for c in coeffs), default=prec if prec is not None else 0)
        prec = known if prec is None else min(prec, known)
        normalized = [c.with_precision(prec).normalized() for c in coeffs]
        live = [c.val for c in normalized if c.val < c.prec]
        val0 = min(live, default=prec)
        e = ctx.e
        rows = []
        for c in normalized:
            if c.val >= c.prec:
                rows.append((0,) * e)
            else:
                rows.append(tuple(c.coeffs_against(val0)))
        return cls(ctx, val0, prec, tuple(rows), is_polynomial, growth)._normalized()

    @classmethod
    def from_terms(
        cls, ctx: PadicContext, terms: dict[int, PadicElem], prec: int, length: int | None = None
    ) -> "PadicSeriesA":
        """Polynomial sum B_t a^t from a sparse mapping t -> B_t."""
        top = max(terms, default=-1) + 1
        size = max(top, length or 0)
        coeffs = [terms.get(t, ctx.zero(prec)) for t in range(size)]
        return cls.from_coefficients(ctx, coeffs, prec)

    @classmethod
    def constant(cls, value: PadicElem) -> "PadicSeriesA":
        return cls.from_coefficients(value.ctx, [value], value.prec)

    # normalization and access

    def _modulus(self, val0: int | None = None, prec: int | None = None) -> int:
        val0 = self.val0 if val0 is None else val0
        prec = self.prec if prec is None else prec
        return self.p ** max(0, ceil_div(prec - val0, self.ctx.e))

    def _normalized(self) -> "PadicSeriesA":
        p = self.p
        rows = [list(r) for r in self.digits]
        val0 = self.val0
        while val0 < self.prec and rows and all(r[0] % p == 0 for r in rows):
            rows = [r[1:] + [-(r[0] // p)] for r in rows]
            val0 += 1
        if val0 >= self.prec or not rows:
            val0 = self.prec
            rows = [[0] * self.ctx.e for _ in rows]
        modulus = self._modulus(val0)
        reduced = tuple(tuple(c % modulus for c in r) for r in rows)
        return PadicSeriesA(self.ctx, val0, self.prec, reduced, self.is_polynomial, self.growth)

    def coefficient(self, t: int) -> PadicElem:
        """B_t; beyond the retained range a polynomial gives 0, a series raises."""
        if t < 0:
            return self.ctx.zero(self.prec)
        if t >= self.length:
            if self.is_polynomial:
                return self.ctx.zero(self.prec)
            raise PrecisionExhausted(f"coefficient a^{t} lies beyond the retained {self.length}")
        row = self.digits[t]
        if self.val0 >= self.prec:
            return self.ctx.zero(self.prec)
        return PadicElem(self.ctx, self.val0, self.prec, row).normalized()

    def coefficients(self) -> list[PadicElem]:
        return [self.coefficient(t) for t in range(self.length)]

    def valuations(self) -> list[Fraction | None]:
        return [c.valuation() for c in self.coefficients()]

    def degree(self) -> int:
        """Index of the last retained coefficient that is nonzero to precision, or -1."""
        for t in range(self.length - 1, -1, -1):
            if not self.coefficient(t).is_zero():
                return t
        return -1

    def is_zero(self) -> bool:
        return self.degree() < 0

    def with_precision(self, prec: int) -> "PadicSeriesA":
        if prec >= self.prec:
            return self
        if self.val0 >= prec:
            return PadicSeriesA(
                self.ctx, prec, prec, ((0,) * self.ctx.e,) * self.length,
                self.is_polynomial, self.growth,
            )
        return PadicSeriesA(
            self.ctx, self.val0, prec, self.digits, self.is_polynomial, self.growth
        )._normalized()

    def truncate(self, length: int, growth: Growth | None = None) -> "PadicSeriesA":
        """Forget coefficients from a^length on; the tail is then covered by growth."""
        if length >= self.length:
            return self
        kept = growth or self.growth
        if kept is None and self.is_polynomial:
            kept = self.fitted_growth(Fraction(0))
        return PadicSeriesA(
            self.ctx, self.val0, self.prec, self.digits[:length], False, kept
        )._normalized()

    def fitted_growth(self, slope: Fraction) -> Growth:
        """Best rho with ord(B_t) >= slope*t + rho over the retained coefficients."""
        rho: Fraction | None = None
        for t, c in enumerate(self.coefficients()):
            v = c.valuation()
            if v is None:
                continue
            candidate = v - slope * t
            rho = candidate if rho is None or candidate < rho else rho
        if rho is None:
            rho = Fraction(self.prec, self.ctx.e)
        return slope, rho

    def tail_floor(self) -> Fraction | None:
        """Lower bound (p-units) on every dropped coefficient; None for a polynomial."""
        if self.is_polynomial:
            return None
        if self.growth is None:
            raise PrecisionExhausted("truncated series carries no growth certificate")
        slope, rho = self.growth
        return slope * self.length + rho

    def certify(self, slope: Fraction, rho: Fraction) -> "PadicSeriesA":
        """Check ord(B_t) >= slope*t + rho on every retained coefficient and attach it."""
        for t, c in enumerate(self.coefficients()):
            v = c.valuation()
            if v is not None and v < slope * t + rho:
                raise GrowthViolation(
                    f"coefficient a^{t} has ord {v} below the floor {slope * t + rho}"
                )
        return PadicSeriesA(
            self.ctx, self.val0, self.prec, self.digits, self.is_polynomial, (slope, rho)
        )

    # arithmetic

    def _rows_against(self, val0: int) -> list[tuple[int, ...]]:
        shift = self.val0 - val0
        if shift == 0:
            return list(self.digits)
        return [_rotate(r, shift, self.p, self.ctx.e) for r in self.digits]

    def _combined_growth(self, other: "PadicSeriesA", product: bool) -> Growth | None:
        if self.is_polynomial and other.is_polynomial:
            return None
        mine, theirs = self.growth, other.growth
        if mine is None and self.is_polynomial and theirs is not None:
            mine = self.fitted_growth(theirs[0])
        if theirs is None and other.is_polynomial and mine is not None:
            theirs = other.fitted_growth(mine[0])
        if mine is None or theirs is None:
            return None
        slope = min(mine[0], theirs[0])
        if product:
            return slope, mine[1] + theirs[1]
        return slope, min(mine[1], theirs[1])

    def _result_length(self, other: "PadicSeriesA", product: bool) -> tuple[int, bool]:
        if self.is_polynomial and other.is_polynomial:
            if product:
                return max(0, self.length + other.length - 1), True
            return max(self.length, other.length), True
        if self.is_polynomial:
            return other.length, False
        if other.is_polynomial:
            return self.length, False
        return min(self.length, other.length), False

    def __add__(self, other: "PadicSeriesA | PadicElem") -> "PadicSeriesA":
        if isinstance(other, PadicElem):
            other = PadicSeriesA.constant(other)
        length, poly = self._result_length(other, product=False)
        growth = self._combined_growth(other, product=False)
        val0 = min(self.val0, other.val0)
        prec = min(self.prec, other.prec)
        e = self.ctx.e
        zero = (0,) * e
        left = self._rows_against(val0)
        right = other._rows_against(val0)
        rows = []
        for t in range(length):
            a = left[t] if t < len(left) else zero
            b = right[t] if t < len(right) else zero
            rows.append(tuple(x + y for x, y in zip(a, b)))
        if val0 >= prec:
            val0 = prec
        return PadicSeriesA(self.ctx, val0, prec, tuple(rows), poly, growth)._normalized()

    __radd__ = __add__

    def __neg__(self) -> "PadicSeriesA":
        rows = tuple(tuple(-c for c in r) for r in self.digits)
        return PadicSeriesA(
            self.ctx, self.val0, self.prec, rows, self.is_polynomial, self.growth
        )._normalized()

    def __sub__(self, other: "PadicSeriesA | PadicElem") -> "PadicSeriesA":
        return self + (-other)

    def __mul__(self, other: "PadicSeriesA | PadicElem | int | Fraction") -> "PadicSeriesA":
        if isinstance(other, PadicSeriesA):
            return self._mul_series(other)
        if isinstance(other, PadicElem):
            return self.scale(other)
        return self.scale_rational(Fraction(other))

    __rmul__ = __mul__

    def scale(self, c: PadicElem) -> "PadicSeriesA":
        """Multiply every coefficient by the constant c."""
        c = c.normalized()
        ctx = self.ctx
        prec = min(self.val0 + c.prec, c.val + self.prec)
        growth = None
        if self.growth is not None:
            cv = c.valuation()
            shift = cv if cv is not None else Fraction(c.prec, ctx.e)
            growth = (self.growth[0], self.growth[1] + shift)
        if c.val >= c.prec:
            return PadicSeriesA(
                ctx, prec, prec, ((0,) * ctx.e,) * self.length, self.is_polynomial, growth
            )
        val0 = self.val0 + c.val
        rows = tuple(tuple(_mul_rows(r, c.coeffs, self.p, ctx.e)) for r in self.digits)
        if val0 >= prec:
            val0 = prec
        return PadicSeriesA(ctx, val0, prec, rows, self.is_polynomial, growth)._normalized()

    def scale_rational(self, value: Fraction | int) -> "PadicSeriesA":
        """Exact multiplication by a rational number."""
        value = Fraction(value)
        e = self.ctx.e
        if value == 0:
            rows = ((0,) * e,) * self.length
            return PadicSeriesA(self.ctx, self.prec, self.prec, rows, self.is_polynomial, None)
        a = _rational_valuation(value, self.p)
        # enough digits that the product keeps prec + a*e
        c = self.ctx.from_fraction(value, a * e + self.prec - self.val0 + 1)
        return self.scale(c)

    def mul_int(self, n: int) -> "PadicSeriesA":
        return self.scale_rational(n)

    def mul_pi_power(self, m: int) -> "PadicSeriesA":
        growth = None
        if self.growth is not None:
            growth = (self.growth[0], self.growth[1] + Fraction(m, self.ctx.e))
        return PadicSeriesA(
            self.ctx, self.val0 + m, self.prec + m, self.digits, self.is_polynomial, growth
        )

    def _mul_series(self, other: "PadicSeriesA") -> "PadicSeriesA":
        ctx = self.ctx
        p, e = ctx.p, ctx.e
        length, poly = self._result_length(other, product=True)
        growth = self._combined_growth(other, product=True)
        prec = min(self.val0 + other.prec, other.val0 + self.prec)
        val0 = self.val0 + other.val0
        if length == 0 or val0 >= prec:
            return PadicSeriesA(ctx, prec, prec, ((0,) * e,) * length, poly, growth)
        left = self.digits[:length]
        right = other.digits[:length]
        stride = 2 * e - 1
        bits = (
            self._modulus().bit_length()
            + other._modulus().bit_length()
            + (min(len(left), len(right)) * e).bit_length()
        )
        width = (bits + 7) // 8
        packed = _pack(left, stride, width) * _pack(right, stride, width)
        slots = (len(left) + len(right) - 1) * stride
        raw = packed.to_bytes(slots * width, "little")
        modulus = p ** max(0, ceil_div(prec - val0, e))
        rows = []
        for t in range(min(length, len(left) + len(right) - 1)):
            base = t * stride
            row = [
                int.from_bytes(raw[(base + j) * width : (base + j + 1) * width], "little")
                for j in range(stride)
            ]
            for j in range(stride - 1, e - 1, -1):
                row[j - e] -= p * row[j]
            rows.append(tuple(c % modulus for c in row[:e]))
        while len(rows) < length:
            rows.append((0,) * e)
        return PadicSeriesA(ctx, val0, prec, tuple(rows), poly, growth)._normalized()

    def __pow__(self, n: int) -> "PadicSeriesA":
        if n < 0:
            raise ValueError("negative powers of a series are not supported")
        result = PadicSeriesA.constant(self.ctx.one(self.prec))
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # operators in a

    def shift_a(self, m: int) -> "PadicSeriesA":
        """Multiply by a^m (m >= 0) or drop the first -m coefficients and divide."""
        e = self.ctx.e
        growth = None
        if self.growth is not None:
            slope, rho = self.growth
            growth = (slope, rho - slope * m)
        if m >= 0:
            rows = ((0,) * e,) * m + self.digits
        else:
            rows = self.digits[-m:]
        return PadicSeriesA(self.ctx, self.val0, self.prec, rows, self.is_polynomial, growth)

    def psi(self) -> "PadicSeriesA":
        """sum B_t a^t -> sum B_{pt} a^t."""
        p = self.p
        rows = self.digits[::p]
        growth = None
        if self.growth is not None:
            growth = (self.growth[0] * p, self.growth[1])
        return PadicSeriesA(
            self.ctx, self.val0, self.prec, rows, self.is_polynomial, growth
        )._normalized()

    def frobenius_substitute(self) -> "PadicSeriesA":
        """a -> a^p on the coefficients."""
        p, e = self.p, self.ctx.e
        if self.length == 0:
            return self
        size = (self.length - 1) * p + 1 if self.is_polynomial else self.length * p
        rows = [(0,) * e] * size
        for t, r in enumerate(self.digits):
            rows[t * p] = r
        growth = None
        if self.growth is not None:
            growth = (self.growth[0] / p, self.growth[1])
        return PadicSeriesA(self.ctx, self.val0, self.prec, tuple(rows), self.is_polynomial, growth)

    def euler(self) -> "PadicSeriesA":
        """a d/da."""
        rows = tuple(tuple(t * c for c in r) for t, r in enumerate(self.digits))
        return PadicSeriesA(
            self.ctx, self.val0, self.prec, rows, self.is_polynomial, self.growth
        )._normalized()

    def derivative(self) -> "PadicSeriesA":
        """d/da."""
        rows = tuple(tuple(t * c for c in r) for t, r in enumerate(self.digits))[1:]
        growth = None
        if self.growth is not None:
            growth = (self.growth[0], self.growth[1] + self.growth[0])
        return PadicSeriesA(
            self.ctx, self.val0, self.prec, rows, self.is_polynomial, growth
        )._normalized()

    def evaluate(self, z: PadicElem) -> PadicElem:
        """Value at an integral point; the dropped tail lowers the precision."""
        total = self.ctx.zero(self.prec)
        for c in reversed(self.coefficients()):
            total = total * z + c
        floor = self.tail_floor()
        if floor is not None:
            total = total.with_precision(min(total.prec, _pi_floor(floor, self.ctx.e)))
        return total

    def recenter(self, z: PadicElem, nterms: int) -> "PadicSeriesA":
        """Coefficients in u of the series at a = z + u, through u^(nterms-1)."""
        ctx = self.ctx
        coeffs = self.coefficients()
        powers = [ctx.one(self.prec)]
        for _ in range(len(coeffs)):
            powers.append(powers[-1] * z)
        out = []
        for m in range(nterms):
            total = ctx.zero(self.prec)
            binom = 1
            for t in range(m, len(coeffs)):
                if t > m:
                    binom = binom * t // (t - m)
                total = total + coeffs[t] * powers[t - m] * binom
            out.append(total)
        floor = self.tail_floor()
        prec = min((c.prec for c in out), default=self.prec)
        if floor is not None:
            prec = min(prec, _pi_floor(floor, ctx.e))
        return PadicSeriesA.from_coefficients(ctx, out, prec, is_polynomial=False)

    def __repr__(self) -> str:
        kind = "poly" if self.is_polynomial else "series"
        return f"PadicSeriesA(p={self.p}, {kind}, length={self.length}, prec={self.prec})"


def _rational_valuation(value: Fraction, p: int) -> int:
    a = 0
    num, den = value.numerator, value.denominator
    while num % p == 0:
        num //= p
        a += 1
    while den % p == 0:
        den //= p
        a -= 1
    return a


def _pi_floor(floor: Fraction, e: int) -> int:
    """Largest pi-precision implied by a p-unit lower bound."""
    return ceil_div((floor * e).numerator, (floor * e).denominator)


def _pack(rows: Iterable[Sequence[int]], stride: int, width: int) -> int:
    rows = list(rows)
    buf = bytearray(len(rows) * stride * width)
    for t, row in enumerate(rows):
        base = t * stride
        for j, c in enumerate(row):
            if c:
                offset = (base + j) * width
                buf[offset : offset + width] = c.to_bytes(width, "little")
    return int.from_bytes(buf, "little")


def series_matrix_product(
    left: Sequence[Sequence[PadicSeriesA]], right: Sequence[Sequence[PadicSeriesA]]
) -> list[list[PadicSeriesA]]:
    rows, inner, cols = len(left), len(right), len(right[0])
    out = []
    for i in range(rows):
        out_row = []
        for j in range(cols):
            total = left[i][0] * right[0][j]
            for m in range(1, inner):
                total = total + left[i][m] * right[m][j]
            out_row.append(total)
        out.append(out_row)
    return out
