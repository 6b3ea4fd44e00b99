"""Containers for relative cohomology data: series in x over L(b'), Frobenius matrices."""

from dataclasses import dataclass
from fractions import Fraction

from expsum.core.errors import BadIndex
from expsum.models.padic import PadicElem
from expsum.models.padic_series import PadicSeriesA


@dataclass(frozen=True)
class XSeries:
    """sum_j B_j(a) x^j for j < len(terms); the x-tail beyond is certified by ``tail``.

    ``tail`` is a p-unit lower bound on the reduction of every dropped term, or
    None when the series is a polynomial in x.
    """

    terms: tuple[PadicSeriesA, ...]
    tail: Fraction | None = None

    def coefficient(self, j: int) -> PadicSeriesA:
        return self.terms[j]


@dataclass(frozen=True)
class FrobMatrixA:
    """(d-1) x (d-1) matrix of the relative Frobenius on the basis x, ..., x^(d-1).

    Row i holds the coordinates of alpha(a)(x^i) in M_{a^p}; indices are 1-based
    in ``entry`` to match the basis exponents.
    """

    p: int
    d: int
    prec: int
    rows: tuple[tuple[PadicSeriesA, ...], ...]

    def entry(self, i: int, j: int) -> PadicSeriesA:
        if not (1 <= i < self.d and 1 <= j < self.d):
            raise BadIndex(f"entry ({i}, {j}) outside 1..{self.d - 1}")
        return self.rows[i - 1][j - 1]

    def evaluate(self, z: PadicElem) -> list[list[PadicElem]]:
        return [[series.evaluate(z) for series in row] for row in self.rows]


@dataclass(frozen=True)
class LeadingTerm:
    """Main term pi^pi_power / (r! t!) a^t of a Frobenius matrix entry."""

    r: int
    a_degree: int
    pi_power: int
    coefficient: Fraction
    valuation: Fraction


@dataclass(frozen=True)
class SymVector:
    """Row vector over the basis v^k, v^(k-1) w, ..., w^k with v = x, w = x^2."""

    k: int
    entries: tuple[PadicSeriesA, ...]

    def __post_init__(self) -> None:
        if len(self.entries) != self.k + 1:
            raise BadIndex(f"Sym^{self.k} needs {self.k + 1} entries, got {len(self.entries)}")

    @property
    def prec(self) -> int:
        return min(entry.prec for entry in self.entries)

    def slot(self, m: int) -> PadicSeriesA:
        if not 0 <= m <= self.k:
            raise BadIndex(f"slot {m} outside 0..{self.k}")
        return self.entries[m]

    def __add__(self, other: "SymVector") -> "SymVector":
        return SymVector(self.k, tuple(x + y for x, y in zip(self.entries, other.entries)))

    def __sub__(self, other: "SymVector") -> "SymVector":
        return SymVector(self.k, tuple(x - y for x, y in zip(self.entries, other.entries)))

    def is_zero(self) -> bool:
        return all(entry.is_zero() for entry in self.entries)


@dataclass(frozen=True)
class VkCoords:
    """Coordinates of a class in V_k: constants on every slot, then a v^(k-2j) w^(2j).

    ``kernel`` is h with kernel part h * k_vec (even k only); ``prec`` is the
    certified absolute precision of every coordinate.
    """

    k: int
    constants: tuple[PadicElem, ...]
    primitive: tuple[PadicElem, ...]
    prec: int
    kernel: PadicSeriesA | None = None

    def row(self) -> list[PadicElem]:
        """Constants followed by primitive coordinates."""
        return list(self.constants) + list(self.primitive)

    def is_zero(self) -> bool:
        if self.kernel is not None and not self.kernel.is_zero():
            return False
        return all(c.is_zero() for c in self.row())

    def with_precision(self, prec: int) -> "VkCoords":
        kernel = None if self.kernel is None else self.kernel.with_precision(prec)
        return VkCoords(
            self.k,
            tuple(c.with_precision(prec) for c in self.constants),
            tuple(c.with_precision(prec) for c in self.primitive),
            min(prec, self.prec),
            kernel,
        )


@dataclass(frozen=True)
class SympowFrobenius:
    """Matrix of beta_k on V_k for odd k, rows are images of basis vectors.

    The basis is the k + 1 constants followed by the primitive vectors; the
    primitive block is the lower right corner.
    """

    p: int
    k: int
    prec: int
    full: tuple[tuple[PadicElem, ...], ...]

    @property
    def constants_size(self) -> int:
        return self.k + 1

    def primitive_block(self) -> list[list[PadicElem]]:
        n = self.constants_size
        return [list(row[n:]) for row in self.full[n:]]

    def constant_block(self) -> list[list[PadicElem]]:
        n = self.constants_size
        return [list(row[:n]) for row in self.full[:n]]


@dataclass(frozen=True)
class LocalSolution:
    """C(z, a) as series in u = a - z, with dC/da = B(a) C and C(z, z) = I.

    ``radius`` is r with convergence certified on ord(a - z) > r.
    """

    center: PadicElem
    prec: int
    nterms: int
    entries: tuple[tuple[PadicSeriesA, PadicSeriesA], tuple[PadicSeriesA, PadicSeriesA]]
    radius: Fraction

    def entry(self, i: int, j: int) -> PadicSeriesA:
        return self.entries[i][j]
