"""Exact arithmetic in Z[zeta_p] in the power basis 1, zeta, ..., zeta^(p-2)."""

from collections.abc import Iterable
from dataclasses import dataclass

import numpy as np
import sympy

from expsum.core.errors import BadIndex, IdentityFailure, NotAUnit


@dataclass(frozen=True, slots=True)
class CycloElem:
    """Canonical element sum c_i zeta^i, 0 <= i <= p-2."""

    p: int
    coeffs: tuple[int, ...]

    @classmethod
    def from_int(cls, p: int, n: int) -> "CycloElem":
        return cls(p, (int(n),) + (0,) * (p - 2))

    @classmethod
    def zeta(cls, p: int, power: int = 1) -> "CycloElem":
        full = [0] * p
        full[power % p] = 1
        return cls.from_full(p, full)

    @classmethod
    def from_full(cls, p: int, full: Iterable[int]) -> "CycloElem":
        """Canonicalize a vector over the redundant basis zeta^0..zeta^(p-1)."""
        values = [int(v) for v in full]
        top = values[p - 1]
        return cls(p, tuple(v - top for v in values[: p - 1]))

    def full(self) -> list[int]:
        return list(self.coeffs) + [0]

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def to_int(self) -> int:
        if not self.is_rational():
            raise ValueError("element is not a rational integer")
        return self.coeffs[0]

    def _coerce(self, other: "CycloElem | int") -> "CycloElem":
        if isinstance(other, int):
            return CycloElem.from_int(self.p, other)
        if other.p != self.p:
            raise ValueError(f"cannot combine Z[zeta_{self.p}] with Z[zeta_{other.p}]")
        return other

    def __add__(self, other: "CycloElem | int") -> "CycloElem":
        other = self._coerce(other)
        return CycloElem(self.p, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self) -> "CycloElem":
        return CycloElem(self.p, tuple(-a for a in self.coeffs))

    def __sub__(self, other: "CycloElem | int") -> "CycloElem":
        return self + (-self._coerce(other))

    def __rsub__(self, other: int) -> "CycloElem":
        return self._coerce(other) - self

    def __mul__(self, other: "CycloElem | int") -> "CycloElem":
        if isinstance(other, int):
            return CycloElem(self.p, tuple(a * other for a in self.coeffs))
        other = self._coerce(other)
        p = self.p
        product = [0] * p
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        product[(i + j) % p] += a * b
        return CycloElem.from_full(p, product)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "CycloElem":
        if n < 0:
            raise ValueError("negative powers of a cyclotomic integer are not supported")
        result = CycloElem.from_int(self.p, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def exact_div(self, m: int) -> "CycloElem":
        """Divide by a rational integer, failing unless every coordinate divides."""
        if m == 0:
            raise ZeroDivisionError("division by zero")
        quotients = []
        for c in self.coeffs:
            quotient, remainder = divmod(c, m)
            if remainder:
                raise IdentityFailure(f"{self} is not divisible by {m}", detail=m)
            quotients.append(quotient)
        return CycloElem(self.p, tuple(quotients))

    def conjugate(self) -> "CycloElem":
        return galois_apply(-1, self)

    def __str__(self) -> str:
        terms = [f"{c}*z^{i}" if i else str(c) for i, c in enumerate(self.coeffs) if c]
        return " + ".join(terms) or "0"


def zeta_accumulate(exponents: Iterable[int] | np.ndarray, p: int) -> CycloElem:
    """Sum of zeta^e over a multiset of exponents mod p."""
    values = np.asarray(list(exponents) if not isinstance(exponents, np.ndarray) else exponents)
    counts = np.bincount(np.mod(values.astype(np.int64), p), minlength=p)
    return CycloElem.from_full(p, counts.tolist())


def galois_apply(lam: int, x: CycloElem) -> CycloElem:
    """sigma_lambda: zeta -> zeta^lambda."""
    p = x.p
    if lam % p == 0:
        raise NotAUnit(f"{lam} is not a unit modulo {p}")
    image = [0] * p
    for i, c in enumerate(x.full()):
        image[i * lam % p] += c
    return CycloElem.from_full(p, image)


def in_index_r_subfield(x: CycloElem, r: int) -> bool:
    """True iff x is fixed by sigma_g^r, g a generator of (Z/p)^*."""
    p = x.p
    if r <= 0 or (p - 1) % r:
        raise BadIndex(f"{r} does not divide p - 1 = {p - 1}")
    generator = int(sympy.primitive_root(p))
    return galois_apply(pow(generator, r, p), x) == x


def complex_values(x: CycloElem) -> np.ndarray:
    """Images under the p-1 embeddings zeta -> exp(2 pi i k / p), k = 1..p-1."""
    p = x.p
    k = np.arange(1, p)[:, None]
    i = np.arange(p - 1)[None, :]
    roots = np.exp(2j * np.pi * (k * i % p) / p)
    return roots @ np.array([float(c) for c in x.coeffs], dtype=np.complex128)


def complex_abs_all(x: CycloElem) -> list[float]:
    return [float(v) for v in np.abs(complex_values(x))]
