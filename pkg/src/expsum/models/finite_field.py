"""Finite fields F_{p^s} in the dense power basis {1, Y, ..., Y^{s-1}}."""

import itertools
from collections.abc import Iterator, Sequence
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
import sympy

from expsum.core.errors import CompositeP, DegreeZero, FieldMismatch, TooLarge


@dataclass(frozen=True, slots=True)
class FqElem:
    """Element of F_{p^s} as its coefficient vector over F_p."""

    coeffs: tuple[int, ...]

    def is_zero(self) -> bool:
        return not any(self.coeffs)


@dataclass(frozen=True)
class FieldDescriptor:
    """Immutable description of F_{p^s}.

    ``modulus`` is the monic irreducible polynomial, low degree first,
    including its leading 1.
    """

    p: int
    s: int
    modulus: tuple[int, ...]
    _cache: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    @property
    def q(self) -> int:
        return self.p**self.s

    @property
    def order(self) -> int:
        return self.q

    def check(self, x: FqElem) -> FqElem:
        """Validate membership of x."""
        if len(x.coeffs) != self.s or any(not 0 <= c < self.p for c in x.coeffs):
            raise FieldMismatch(f"{x} is not an element of F_{self.p}^{self.s}")
        return x

    def element(self, value: int | Sequence[int]) -> FqElem:
        """Build an element from an integer (prime-field embedding) or a vector."""
        if isinstance(value, int):
            return FqElem((value % self.p,) + (0,) * (self.s - 1))
        coeffs = [int(c) % self.p for c in value]
        if len(coeffs) > self.s:
            raise FieldMismatch(f"vector of length {len(coeffs)} does not fit F_p^{self.s}")
        return FqElem(tuple(coeffs + [0] * (self.s - len(coeffs))))

    def zero(self) -> FqElem:
        return FqElem((0,) * self.s)

    def one(self) -> FqElem:
        return self.element(1)

    def element_at(self, index: int) -> FqElem:
        """Element whose coefficient vector is the base-p digit vector of index."""
        if not 0 <= index < self.q:
            raise FieldMismatch(f"index {index} outside [0, {self.q})")
        digits = []
        for _ in range(self.s):
            index, digit = divmod(index, self.p)
            digits.append(digit)
        return FqElem(tuple(digits))

    def index_of(self, x: FqElem) -> int:
        self.check(x)
        return sum(c * self.p**i for i, c in enumerate(x.coeffs))

    def add(self, x: FqElem, y: FqElem) -> FqElem:
        return FqElem(tuple((a + b) % self.p for a, b in zip(x.coeffs, y.coeffs)))

    def scale(self, c: int, x: FqElem) -> FqElem:
        return FqElem(tuple(c * a % self.p for a in x.coeffs))

    def mul(self, x: FqElem, y: FqElem) -> FqElem:
        p, s = self.p, self.s
        if s == 1:
            return FqElem((x.coeffs[0] * y.coeffs[0] % p,))
        product = [0] * (2 * s - 1)
        for i, a in enumerate(x.coeffs):
            if a:
                for j, b in enumerate(y.coeffs):
                    product[i + j] += a * b
        return FqElem(tuple(self._reduce(product)))

    def _reduce(self, poly: list[int]) -> list[int]:
        p, s, modulus = self.p, self.s, self.modulus
        poly = [c % p for c in poly]
        for top in range(len(poly) - 1, s - 1, -1):
            lead = poly[top]
            if lead:
                for i in range(s):
                    poly[top - s + i] = (poly[top - s + i] - lead * modulus[i]) % p
                poly[top] = 0
        return (poly + [0] * s)[:s]

    def pow(self, x: FqElem, n: int) -> FqElem:
        if n < 0:
            return self.pow(self.inv(x), -n)
        result = self.one()
        base = x
        while n:
            if n & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            n >>= 1
        return result

    def inv(self, x: FqElem) -> FqElem:
        if x.is_zero():
            raise ZeroDivisionError("inverse of zero in a finite field")
        return self.pow(x, self.q - 2)

    def frobenius(self, x: FqElem, times: int = 1) -> FqElem:
        return self.pow(x, self.p ** (times % self.s))

    def degree(self, x: FqElem) -> int:
        """Degree of F_p(x) over F_p."""
        self.check(x)
        for e in sympy.divisors(self.s):
            if self.frobenius(x, e) == x:
                return e
        return self.s

    def multiplicative_order(self, x: FqElem) -> int:
        if x.is_zero():
            raise ZeroDivisionError("zero has no multiplicative order")
        order = self.q - 1
        for prime in sympy.primefactors(order):
            while order % prime == 0 and self.pow(x, order // prime) == self.one():
                order //= prime
        return order

    def primitive_element(self) -> FqElem:
        """First element in enumeration order that generates the unit group."""
        if "primitive" not in self._cache:
            for index in range(1, self.q):
                candidate = self.element_at(index)
                if self.multiplicative_order(candidate) == self.q - 1:
                    self._cache["primitive"] = candidate
                    break
        return self._cache["primitive"]

    @cached_property
    def trace_basis(self) -> tuple[int, ...]:
        """Tr(Y^i) for i < s."""
        traces = []
        for i in range(self.s):
            monomial = self.element([0] * i + [1])
            total = self.zero()
            for l in range(self.s):
                total = self.add(total, self.frobenius(monomial, l))
            traces.append(total.coeffs[0])
        return tuple(traces)

    @cached_property
    def trace_form(self) -> np.ndarray:
        """Symmetric matrix T with Tr(xy) = x^T T y mod p."""
        form = np.zeros((self.s, self.s), dtype=np.int64)
        basis = self.trace_basis
        for i in range(self.s):
            for j in range(self.s):
                monomial = self.mul(self.element([0] * i + [1]), self.element([0] * j + [1]))
                form[i, j] = sum(c * t for c, t in zip(monomial.coeffs, basis)) % self.p
        return form


def build_field(p: int, s: int) -> FieldDescriptor:
    """Construct F_{p^s} with the lexicographically smallest monic irreducible modulus.

    Candidates X^s + a_{s-1}X^{s-1} + ... + a_0 are ordered by (a_{s-1}, ..., a_0).
    """
    if not sympy.isprime(p):
        raise CompositeP(f"p = {p} is not prime")
    if s < 1:
        raise DegreeZero(f"extension degree must be at least 1, got {s}")
    if s == 1:
        return FieldDescriptor(p=p, s=1, modulus=(0, 1))

    X = sympy.Symbol("X")
    for high_first in itertools.product(range(p), repeat=s):
        low_first = tuple(reversed(high_first)) + (1,)
        candidate = sympy.Poly(list(reversed(low_first)), X, modulus=p)
        if candidate.is_irreducible:
            return FieldDescriptor(p=p, s=s, modulus=low_first)
    raise CompositeP(f"no irreducible polynomial of degree {s} over F_{p}")


def trace_to_prime(x: FqElem, fld: FieldDescriptor) -> int:
    """Absolute trace Tr_{F_q/F_p}(x) as a residue in [0, p)."""
    fld.check(x)
    return sum(c * t for c, t in zip(x.coeffs, fld.trace_basis)) % fld.p


def enumerate_field(fld: FieldDescriptor, cap: int | None = None) -> list[FqElem]:
    """All elements in index order (base-p digits), starting with 0."""
    if cap is None:
        from expsum.core.config import get_settings

        cap = get_settings().enum_cap
    if fld.q > cap:
        raise TooLarge(f"F_{fld.p}^{fld.s} has {fld.q} elements, above the cap {cap}")
    return [FqElem(tuple(int(c) for c in row)) for row in field_digits(fld, 0, fld.q)]


def field_digits(fld: FieldDescriptor, start: int, stop: int) -> np.ndarray:
    """Coefficient vectors of elements with indices in [start, stop), shape (n, s)."""
    indices = np.arange(start, stop, dtype=np.int64)
    digits = np.zeros((indices.size, fld.s), dtype=np.int64)
    for i in range(fld.s):
        indices, digits[:, i] = np.divmod(indices, fld.p)
    return digits


def iter_field_chunks(fld: FieldDescriptor, chunk_size: int = 1 << 16) -> Iterator[np.ndarray]:
    """Stream the enumeration order in chunks; no cap applies."""
    for start in range(0, fld.q, chunk_size):
        yield field_digits(fld, start, min(fld.q, start + chunk_size))


def power_table(fld: FieldDescriptor, digits: np.ndarray, exponent: int) -> np.ndarray:
    """Vectorised x^exponent for rows of coefficient vectors."""
    result = np.zeros_like(digits)
    result[:, 0] = 1
    base = digits.copy()
    while exponent:
        if exponent & 1:
            result = mul_rows(fld, result, base)
        base = mul_rows(fld, base, base)
        exponent >>= 1
    return result


def mul_rows(fld: FieldDescriptor, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    p, s = fld.p, fld.s
    if s == 1:
        return (x * y) % p
    product = np.zeros((x.shape[0], 2 * s - 1), dtype=np.int64)
    for i in range(s):
        for j in range(s):
            product[:, i + j] += x[:, i] * y[:, j]
    product %= p
    modulus = np.array(fld.modulus[:s], dtype=np.int64)
    for top in range(2 * s - 2, s - 1, -1):
        lead = product[:, top].copy()
        product[:, top - s : top] -= lead[:, None] * modulus[None, :]
        product[:, top - s : top] %= p
        product[:, top] = 0
    return product[:, :s]


def subfield_generator(small: FieldDescriptor, big: FieldDescriptor) -> FqElem:
    """A root in ``big`` of the modulus of ``small``, fixing an embedding small -> big.

    Any root works for Frobenius-invariant quantities; the one found first from the
    powers of a unit-group generator of the subfield is cached.
    """
    if small.p != big.p or big.s % small.s:
        raise FieldMismatch(f"F_{small.p}^{small.s} does not embed in F_{big.p}^{big.s}")
    key = ("subfield", small.modulus)
    if key not in big._cache:
        generator = big.pow(big.primitive_element(), (big.q - 1) // (small.q - 1))
        candidate = big.one()
        for _ in range(small.q - 1):
            if _evaluate(big, small.modulus, candidate).is_zero():
                big._cache[key] = candidate
                break
            candidate = big.mul(candidate, generator)
        else:
            raise FieldMismatch(f"modulus {small.modulus} has no root in F_{big.p}^{big.s}")
    return big._cache[key]


def embed(small: FieldDescriptor, big: FieldDescriptor, x: FqElem) -> FqElem:
    small.check(x)
    if small.s == 1:
        return big.element(x.coeffs[0])
    root = subfield_generator(small, big)
    total = big.zero()
    power = big.one()
    for c in x.coeffs:
        total = big.add(total, big.scale(c, power))
        power = big.mul(power, root)
    return total


def _evaluate(fld: FieldDescriptor, poly: Sequence[int], x: FqElem) -> FqElem:
    total = fld.zero()
    for c in reversed(poly):
        total = fld.add(fld.mul(total, x), fld.element(c))
    return total
