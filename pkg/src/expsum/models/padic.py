"""Truncated arithmetic in W(F_{p^s})[pi] with pi^(p-1) = -p.

An element is pi^val * sum_{j < p-1} c_j pi^j where every c_j is a vector over Z
in the basis 1, Y, ..., Y^(s-1) of the unramified ring W.  ``prec`` is the
absolute precision: the element is known modulo pi^prec.  Block c_j is kept
modulo p^K_j with K_j = ceil((prec - val - j) / (p - 1)), which makes the
normalized representation canonical.
"""

from collections.abc import Sequence
from dataclasses import dataclass, field
from fractions import Fraction

from expsum.core.errors import FieldMismatch, NonConvergent, NotAUnit
from expsum.models.finite_field import FieldDescriptor, FqElem


def p_valuation(n: int, p: int) -> int:
    """Exponent of p in a nonzero integer."""
    if n == 0:
        raise ValueError("valuation of zero")
    count = 0
    while n % p == 0:
        n //= p
        count += 1
    return count


def ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


def _split_int(n: int, p: int) -> tuple[int, int]:
    a = p_valuation(n, p)
    return a, n // p**a


@dataclass(frozen=True)
class PadicContext:
    """The ring W(F_{p^s})[pi] attached to a finite field."""

    fld: FieldDescriptor
    _teich: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    @property
    def p(self) -> int:
        return self.fld.p

    @property
    def s(self) -> int:
        return self.fld.s

    @property
    def e(self) -> int:
        """Ramification index: one p-adic digit is p - 1 pi-digits."""
        return self.fld.p - 1

    def width(self) -> int:
        return self.e * self.s

    def zero(self, prec: int) -> "PadicElem":
        return PadicElem(self, prec, prec, (0,) * self.width())

    def one(self, prec: int) -> "PadicElem":
        return self.from_int(1, prec)

    def _unit_times_pi(self, sign_unit: int, val: int, prec: int) -> "PadicElem":
        if val >= prec:
            return self.zero(prec)
        coeffs = [0] * self.width()
        coeffs[0] = sign_unit
        return PadicElem(self, val, prec, tuple(coeffs)).normalized()

    def from_int(self, n: int, prec: int) -> "PadicElem":
        if n == 0:
            return self.zero(prec)
        a, unit = _split_int(n, self.p)
        # p^a = (-1)^a pi^(a e)
        return self._unit_times_pi(-unit if a % 2 else unit, a * self.e, prec)

    def from_fraction(self, value: Fraction | int, prec: int) -> "PadicElem":
        value = Fraction(value)
        if value.denominator == 1:
            return self.from_int(value.numerator, prec)
        a_num, u_num = _split_int(value.numerator, self.p)
        a_den, u_den = _split_int(value.denominator, self.p)
        a = a_num - a_den
        val = a * self.e
        if val >= prec:
            return self.zero(prec)
        modulus = self.p ** ceil_div(prec - val, self.e)
        unit = u_num * pow(u_den, -1, modulus) % modulus
        return self._unit_times_pi(-unit if a % 2 else unit, val, prec)

    def pi_power(self, m: int, prec: int) -> "PadicElem":
        """pi^m known to absolute precision prec."""
        return self._unit_times_pi(1, m, prec)

    def from_w(self, vector: Sequence[int], prec: int, val: int = 0) -> "PadicElem":
        """pi^val times the element of W with the given coordinates."""
        if val >= prec:
            return self.zero(prec)
        coeffs = [0] * self.width()
        for l, c in enumerate(vector):
            coeffs[l] = int(c)
        return PadicElem(self, val, prec, tuple(coeffs)).normalized()

    def lift(self, x: FqElem, prec: int) -> "PadicElem":
        """Coordinate-wise lift of a residue; not multiplicative."""
        self.fld.check(x)
        return self.from_w(x.coeffs, prec)

    def teichmuller(self, x: FqElem, prec: int) -> "PadicElem":
        """The root of unity (or zero) congruent to x, to absolute precision prec."""
        self.fld.check(x)
        if x.is_zero():
            return self.zero(prec)
        key = (x.coeffs, prec)
        if key not in self._teich:
            y = self.lift(x, prec)
            q = self.fld.q
            # each q-th power gains one p-adic digit
            for _ in range(ceil_div(prec, self.e) + 1):
                y = (y**q).with_precision(prec)
            self._teich[key] = y
        return self._teich[key]


@dataclass(frozen=True, eq=False)
class PadicElem:
    ctx: PadicContext
    val: int
    prec: int
    coeffs: tuple[int, ...]

    @property
    def p(self) -> int:
        return self.ctx.p

    def normalized(self) -> "PadicElem":
        """Move factors of pi out of the leading block; zero has val == prec."""
        ctx = self.ctx
        p, s, e = ctx.p, ctx.s, ctx.e
        val = self.val
        coeffs = list(self.coeffs)
        while val < self.prec and not any(c % p for c in coeffs[:s]):
            # c_0 = p c' = -pi^e c'
            head = coeffs[:s]
            coeffs = coeffs[s:] + [-(c // p) for c in head]
            val += 1
        if val >= self.prec:
            return self.ctx.zero(self.prec)
        reduced = []
        for j in range(e):
            modulus = p ** max(0, ceil_div(self.prec - val - j, e))
            reduced.extend(c % modulus for c in coeffs[j * s : (j + 1) * s])
        return PadicElem(ctx, val, self.prec, tuple(reduced))

    def is_zero(self) -> bool:
        return self.normalized().val >= self.prec

    def valuation(self) -> Fraction | None:
        """Exact valuation in p-units, or None when zero to precision."""
        x = self.normalized()
        if x.val >= x.prec:
            return None
        return Fraction(x.val, self.ctx.e)

    def pi_valuation(self) -> int | None:
        x = self.normalized()
        return None if x.val >= x.prec else x.val

    def floor(self) -> Fraction:
        """Certified absolute precision in p-units."""
        return Fraction(self.prec, self.ctx.e)

    def with_precision(self, prec: int) -> "PadicElem":
        if prec >= self.prec:
            return self
        if self.val >= prec:
            return self.ctx.zero(prec)
        return PadicElem(self.ctx, self.val, prec, self.coeffs).normalized()

    def coeffs_against(self, target_val: int) -> list[int]:
        """Blocks of the same value written against pi^target_val <= val."""
        ctx = self.ctx
        s, e, p = ctx.s, ctx.e, ctx.p
        wraps, rotate = divmod(self.val - target_val, e)
        factor = (-p) ** wraps
        out = [0] * ctx.width()
        for j in range(e):
            target, scale = j + rotate, factor
            if target >= e:
                target, scale = target - e, -p * factor
            for l in range(s):
                out[target * s + l] = self.coeffs[j * s + l] * scale
        return out

    def _coerce(self, other: "PadicElem | int | Fraction") -> "PadicElem":
        if isinstance(other, PadicElem):
            if other.ctx.fld != self.ctx.fld:
                raise FieldMismatch("p-adic elements from different towers")
            return other
        return self.ctx.from_fraction(Fraction(other), max(self.prec, 1))

    def __add__(self, other: "PadicElem | int | Fraction") -> "PadicElem":
        other = self._coerce(other)
        val = min(self.val, other.val)
        prec = min(self.prec, other.prec)
        if val >= prec:
            return self.ctx.zero(prec)
        total = [a + b for a, b in zip(self.coeffs_against(val), other.coeffs_against(val))]
        return PadicElem(self.ctx, val, prec, tuple(total)).normalized()

    __radd__ = __add__

    def __neg__(self) -> "PadicElem":
        return PadicElem(self.ctx, self.val, self.prec, tuple(-c for c in self.coeffs))

    def __sub__(self, other: "PadicElem | int | Fraction") -> "PadicElem":
        return self + (-self._coerce(other))

    def __rsub__(self, other: int | Fraction) -> "PadicElem":
        return self._coerce(other) - self

    def __mul__(self, other: "PadicElem | int | Fraction") -> "PadicElem":
        if isinstance(other, int):
            return self.mul_int(other)
        if isinstance(other, Fraction):
            return self.mul_fraction(other)
        other = self._coerce(other)
        ctx = self.ctx
        prec = min(self.val + other.prec, other.val + self.prec)
        val = self.val + other.val
        if val >= prec:
            return ctx.zero(prec)
        return PadicElem(ctx, val, prec, _mul_blocks(ctx, self.coeffs, other.coeffs)).normalized()

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "PadicElem":
        if n < 0:
            return self.inverse() ** (-n)
        if n == 0:
            return self.ctx.one(self.prec)
        result: PadicElem | None = None
        base = self
        while n:
            if n & 1:
                result = base if result is None else result * base
            n >>= 1
            if n:
                base = base * base
        assert result is not None
        return result

    def __truediv__(self, other: "PadicElem | int | Fraction") -> "PadicElem":
        if isinstance(other, int):
            return self.div_int(other)
        if isinstance(other, Fraction):
            return self.mul_fraction(1 / other)
        return self * other.inverse()

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (PadicElem, int, Fraction)):
            return (self - self._coerce(other)).is_zero()
        return NotImplemented

    __hash__ = None  # type: ignore[assignment]

    def mul_pi_power(self, m: int) -> "PadicElem":
        """Exact multiplication by pi^m; m may be negative."""
        return PadicElem(self.ctx, self.val + m, self.prec + m, self.coeffs)

    def mul_int(self, n: int) -> "PadicElem":
        """Exact multiplication by an integer; precision grows with v_p(n)."""
        if n == 0:
            return self.ctx.zero(self.prec)
        a, unit = _split_int(n, self.p)
        if a % 2:
            unit = -unit
        shift = a * self.ctx.e
        scaled = tuple(c * unit for c in self.coeffs)
        return PadicElem(self.ctx, self.val + shift, self.prec + shift, scaled).normalized()

    def div_int(self, n: int) -> "PadicElem":
        """Exact division by a nonzero integer; precision drops with v_p(n)."""
        if n == 0:
            raise ZeroDivisionError("division by zero")
        ctx = self.ctx
        a, unit = _split_int(n, self.p)
        shift = a * ctx.e
        val, prec = self.val - shift, self.prec - shift
        if val >= prec:
            return ctx.zero(prec)
        modulus = self.p ** ceil_div(prec - val, ctx.e)
        inverse = pow(unit, -1, modulus) * (-1 if a % 2 else 1)
        return PadicElem(ctx, val, prec, tuple(c * inverse for c in self.coeffs)).normalized()

    def mul_fraction(self, value: Fraction | int) -> "PadicElem":
        value = Fraction(value)
        if value == 0:
            return self.ctx.zero(self.prec)
        return self.mul_int(value.numerator).div_int(value.denominator)

    def inverse(self) -> "PadicElem":
        """Multiplicative inverse; relative precision is preserved."""
        x = self.normalized()
        ctx = x.ctx
        if x.val >= x.prec:
            raise ZeroDivisionError("inverse of an element that is zero to precision")
        relative = x.prec - x.val
        unit = PadicElem(ctx, 0, relative, x.coeffs)
        head = ctx.fld.inv(ctx.fld.element(x.coeffs[: ctx.s]))
        z = ctx.from_w(head.coeffs, relative)
        reached = 1
        while reached < relative:
            z = z * (2 - unit * z)
            reached *= 2
        z = z.with_precision(relative)
        return PadicElem(ctx, z.val - x.val, relative - x.val, z.coeffs).normalized()

    def residue(self) -> FqElem:
        """Reduction modulo pi of an integral element."""
        x = self.normalized()
        fld = self.ctx.fld
        if x.val >= x.prec or x.val > 0:
            return fld.zero()
        if x.val < 0:
            raise NotAUnit("element is not integral")
        return fld.element(x.coeffs[: self.ctx.s])

    def to_int(self) -> int:
        """Symmetric integer representative of an element of Z_p."""
        x = self.normalized()
        if x.val >= x.prec:
            return 0
        e, p = self.ctx.e, self.p
        if x.val < 0 or x.val % e or any(x.coeffs[1:]):
            raise ValueError("element does not lie in Z_p to the known precision")
        a = x.val // e
        modulus = p ** ceil_div(x.prec, e)
        value = (-1 if a % 2 else 1) * x.coeffs[0] * p**a % modulus
        return value - modulus if 2 * value > modulus else value

    def exp(self) -> "PadicElem":
        """Exponential series; converges for ord > 1/(p-1)."""
        if self.is_zero():
            return self.ctx.one(self.prec)
        x = self.normalized()
        if x.val < 2:
            raise NonConvergent(f"exp needs ord > 1/(p-1), got {x.valuation()}")
        total = self.ctx.one(x.prec)
        term = self.ctx.one(x.prec)
        n = 1
        # ord(x^n / n!) > n (val - 1) / e
        while n * (x.val - 1) < x.prec:
            term = (term * x).div_int(n)
            total = total + term
            n += 1
        return total.with_precision(x.prec)

    def log(self) -> "PadicElem":
        """Logarithm of a principal unit 1 + y with ord y > 0."""
        y = (self - 1).normalized()
        if y.val >= y.prec:
            return self.ctx.zero(y.prec)
        if y.val < 1:
            raise NonConvergent("log needs an argument congruent to 1")
        e, p = self.ctx.e, self.p
        total = self.ctx.zero(y.prec)
        power = y
        n = 1
        while n * y.val - e * len(_base_p(n, p)) < y.prec:
            term = power.div_int(n)
            total = total + term if n % 2 else total - term
            power = power * y
            n += 1
        return total.with_precision(y.prec)

    def pi_digits(self) -> tuple[int, list[tuple[int, ...]]]:
        """Canonical base-pi expansion: (start, digits) with digit vectors in [0, p)^s."""
        ctx = self.ctx
        p, s = ctx.p, ctx.s
        x = self.normalized()
        digits: list[tuple[int, ...]] = []
        current = x
        for position in range(x.val, x.prec):
            current = current.normalized()
            if current.val != position:
                digits.append((0,) * s)
                continue
            digit = tuple(c % p for c in current.coeffs[:s])
            digits.append(digit)
            current = current - ctx.from_w(digit, x.prec, val=position)
        return x.val, digits

    @classmethod
    def from_pi_digits(
        cls, ctx: PadicContext, start: int, digits: Sequence[Sequence[int]], prec: int
    ) -> "PadicElem":
        total = ctx.zero(prec)
        for offset, digit in enumerate(digits):
            if any(digit):
                total = total + ctx.from_w(digit, prec, val=start + offset)
        return total

    def __repr__(self) -> str:
        return f"PadicElem(p={self.p}, s={self.ctx.s}, ord={self.valuation()}, prec={self.prec})"


def _base_p(n: int, p: int) -> list[int]:
    digits = []
    while n:
        n, digit = divmod(n, p)
        digits.append(digit)
    return digits


def _mul_blocks(ctx: PadicContext, left: Sequence[int], right: Sequence[int]) -> tuple[int, ...]:
    """Product of two block vectors in W[pi]/(pi^e + p), before reduction modulo p^K."""
    p, s, e = ctx.p, ctx.s, ctx.e
    if s == 1:
        raw = [0] * (2 * e - 1)
        for i, a in enumerate(left):
            if a:
                for j, b in enumerate(right):
                    if b:
                        raw[i + j] += a * b
        for t in range(2 * e - 2, e - 1, -1):
            raw[t - e] -= p * raw[t]
        return tuple(raw[:e])

    modulus = ctx.fld.modulus
    grid = [[0] * (2 * s - 1) for _ in range(2 * e - 1)]
    for i in range(e):
        block_a = left[i * s : (i + 1) * s]
        if not any(block_a):
            continue
        for j in range(e):
            block_b = right[j * s : (j + 1) * s]
            if not any(block_b):
                continue
            row = grid[i + j]
            for la, a in enumerate(block_a):
                if a:
                    for lb, b in enumerate(block_b):
                        row[la + lb] += a * b
    for row in grid:
        for top in range(2 * s - 2, s - 1, -1):
            lead = row[top]
            if lead:
                for l in range(s):
                    row[top - s + l] -= lead * modulus[l]
                row[top] = 0
    for t in range(2 * e - 2, e - 1, -1):
        for l in range(s):
            grid[t - e][l] -= p * grid[t][l]
    out: list[int] = []
    for t in range(e):
        out.extend(grid[t][:s])
    return tuple(out)
