"""Cohomology of the k-th symmetric power of the cubic family x^3 + a x.

Row vectors over v^k, v^(k-1) w, ..., w^k (v = x, w = x^2) carry the twisted
derivative d_a = a d/da + G_k.  A monomial B a^t in slot m has weight 2t + m;
G_k raises the weight by exactly 3, so the decomposition of a vector into
V_k + G_k-image (+ kernel part for even k) splits into one small rational
system per weight.  Reduction modulo d_a walks the weights from the top down.
"""

import logging
import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial, prod

import sympy

from expsum.core.config import ApplicationSettings, get_settings
from expsum.core.errors import (
    DomainInputError,
    GrowthViolation,
    IdentityFailure,
    KTooLarge,
    NonConvergent,
    OddK,
    PrecisionExhausted,
)
from expsum.models.cohomology import FrobMatrixA, SymVector, SympowFrobenius, VkCoords
from expsum.models.lpoly import LPoly, charpoly_berkowitz, functional_equation_constant
from expsum.models.padic import PadicContext, PadicElem, ceil_div
from expsum.models.padic_series import PadicSeriesA
from expsum.services.dwork_fibre import DworkFibreService
from expsum.services.oracle_sums import (
    trivial_eigenvalues,
    trivial_factor_coeffs,
    trivial_multiplicities,
)

logger = logging.getLogger(__name__)

Monomial = tuple[int, int]
Unknown = tuple[str, int] | tuple[str, int, int]


def kernel_coefficients(k: int) -> list[Fraction]:
    """c_j with k_vec = sum_j c_j a^(k/2 - j) in slot 2j; G_k kills k_vec."""
    if k % 2:
        raise OddK(f"G_{k} has no kernel for odd k")
    half = k // 2
    return [
        Fraction(prod(half - i for i in range(j)), factorial(j) * 3 ** (half - j))
        for j in range(half + 1)
    ]


def _monomials_at(k: int, weight: int) -> list[Monomial]:
    return [(m, (weight - m) // 2) for m in range(k + 1) if weight >= m and (weight - m) % 2 == 0]


@dataclass(frozen=True)
class WeightSystem:
    """u = x A on one weight; ``inverse`` maps the u-coordinates to the unknowns x."""

    unknowns: tuple[Unknown, ...]
    equations: tuple[Monomial, ...]
    inverse: tuple[tuple[Fraction, ...], ...]


@lru_cache(maxsize=None)
def weight_system(k: int, weight: int) -> WeightSystem:
    """Unknowns of one weight: V_k constants and primitives, xi = pi^-1 xi', kernel multiples.

    xi' in slot m, degree t feeds (k - m) to slot m + 1 and -m/3 to slot m - 1; for
    even k the last slot of xi is pinned to zero.
    """
    equations = _monomials_at(k, weight)
    index = {monomial: i for i, monomial in enumerate(equations)}
    unknowns: list[Unknown] = []
    rows: list[list[Fraction]] = []

    def add(label: Unknown, contributions: dict[Monomial, Fraction]) -> None:
        row = [Fraction(0)] * len(equations)
        for monomial, c in contributions.items():
            row[index[monomial]] += c
        unknowns.append(label)
        rows.append(row)

    if weight <= k:
        add(("const", weight), {(weight, 0): Fraction(1)})
    slot = weight - 2
    if 0 <= slot < k and slot % 2 == 0:
        add(("prim", slot // 2), {(slot, 1): Fraction(1)})
    for m, t in _monomials_at(k, weight - 3):
        if k % 2 == 0 and m == k:
            continue
        contributions = {}
        if m < k:
            contributions[(m + 1, t + 1)] = Fraction(k - m)
        if m > 0:
            contributions[(m - 1, t + 2)] = Fraction(-m, 3)
        add(("xi", m, t), contributions)
    if k % 2 == 0 and weight >= k + 2 and (weight - k) % 2 == 0:
        t = (weight - k) // 2
        coefficients = kernel_coefficients(k)
        add(("ker", t), {(2 * j, t + k // 2 - j): c for j, c in enumerate(coefficients)})

    if len(rows) != len(equations):
        raise IdentityFailure(
            f"weight {weight} of Sym^{k}: {len(rows)} unknowns for {len(equations)} equations",
            index=weight,
        )
    matrix = sympy.Matrix([[sympy.Rational(c.numerator, c.denominator) for c in r] for r in rows])
    if matrix.det() == 0:
        raise IdentityFailure(f"weight {weight} of Sym^{k} is not a direct sum", index=weight)
    inverse = matrix.inv()
    return WeightSystem(
        tuple(unknowns),
        tuple(equations),
        tuple(
            tuple(Fraction(int(inverse[e, x].p), int(inverse[e, x].q)) for x in range(len(rows)))
            for e in range(len(equations))
        ),
    )


@lru_cache(maxsize=None)
def _units_only(k: int, weight: int, p: int) -> bool:
    system = weight_system(k, weight)
    return all(c.denominator % p for row in system.inverse for c in row)


def n_matrix(k: int) -> sympy.Matrix:
    """N_k: the kernel vector on the odd slots stacked over G_k restricted to them."""
    if k % 2:
        raise OddK(f"N_k is defined for even k, got {k}")
    pi, a = sympy.symbols("pi a")
    half = k // 2
    first = [
        sympy.Rational(c.numerator, c.denominator) * a ** (half - j)
        for j, c in enumerate(kernel_coefficients(k))
    ]
    rows = [first]
    for l in range(1, half + 1):
        m = 2 * l - 1
        row = [sympy.Integer(0)] * (half + 1)
        row[l - 1] = -sympy.Rational(m, 3) * pi * a**2
        row[l] = (k - m) * pi * a
        rows.append(row)
    return sympy.Matrix(rows)


def det_nk(k: int) -> Fraction:
    """Rational c with det N_k = c pi^(k/2) a^k, read off the determinant."""
    pi, a = sympy.symbols("pi a")
    ratio = sympy.simplify(n_matrix(k).det() / (pi ** (k // 2) * a**k))
    if not ratio.is_Rational:
        raise IdentityFailure(f"det N_{k} is not a monomial in pi and a", detail=str(ratio))
    return Fraction(int(ratio.p), int(ratio.q))


def det_nk_closed_form(k: int) -> Fraction:
    half = k // 2
    return Fraction(2**half * factorial(half), 3**half)


def h_coefficient(k: int, j: int) -> Fraction:
    """Rational c with h = c B_n a^(n - k/2 + j) for B_n a^n on odd slot 2j."""
    half = k // 2
    numerator = 3 ** (half - j) * prod(2 * i - 1 for i in range(1, j + 1))
    numerator *= prod(k - (2 * i + 1) for i in range(j, half))
    return Fraction(numerator, 2**half * factorial(half))


def h_coefficient_cramer(k: int, j: int) -> Fraction:
    """The same constant from solving (h, C_2, ..., C_k) N_k = a^n e_j."""
    a = sympy.symbols("a")
    half = k // 2
    n = half - j + 1
    rhs = sympy.zeros(1, half + 1)
    rhs[0, j] = a**n
    solution = rhs * n_matrix(k).inv()
    ratio = sympy.simplify(solution[0, 0] / a ** (n - half + j))
    if not ratio.is_Rational:
        raise IdentityFailure(f"h for k={k}, j={j} is not constant", detail=str(ratio))
    return Fraction(int(ratio.p), int(ratio.q))


def kernel_dimension(k: int, p: int) -> int:
    """dim of the solutions of the k-th symmetric power of the Airy operator on the annulus."""
    if k % 2:
        return 0
    if k % 4 == 0:
        return 1 + k // (2 * p)
    return k // (2 * p)


def kernel_dimension_count(k: int, p: int) -> int:
    """#{j : p | k - 2j} over 0 <= j <= k/2 when 4 | k, over j < k/2 when k = 2 mod 4."""
    if k % 2:
        return 0
    top = k // 2 if k % 4 == 0 else k // 2 - 1
    return sum(1 for j in range(top + 1) if (k - 2 * j) % p == 0)


class SympowCohomService:
    """Service for handling symmetric-power cohomology and the Frobenius matrix of beta_k."""

    def __init__(
        self, settings: ApplicationSettings | None = None, fibre: DworkFibreService | None = None
    ) -> None:
        self.settings = settings or get_settings()
        self.fibre = fibre or DworkFibreService(self.settings)
        self.tower = self.fibre.tower
        self._frob: dict[tuple[int, int, int], FrobMatrixA] = {}

    def _check_k(self, p: int, k: int) -> None:
        if k < 1:
            raise DomainInputError(f"k must be positive, got {k}")
        if k >= p:
            raise KTooLarge(f"k = {k} must be smaller than p = {p}")
        self.fibre.growth_parameters(p)

    # the operator d_a

    def gk_matrix(self, p: int, k: int, prec: int) -> list[list[PadicSeriesA]]:
        """G_k with (m, m+1) = (k - m) pi a and (m, m-1) = -m pi a^2 / 3."""
        ctx = self.tower.context(p)
        pi = ctx.pi_power(1, prec)
        zero = PadicSeriesA.zero(ctx, prec)
        matrix = [[zero] * (k + 1) for _ in range(k + 1)]
        for m in range(k + 1):
            if m < k:
                matrix[m][m + 1] = PadicSeriesA.from_terms(ctx, {1: pi * (k - m)}, prec)
            if m > 0:
                matrix[m][m - 1] = PadicSeriesA.from_terms(ctx, {2: pi * Fraction(-m, 3)}, prec)
        return matrix

    def kernel_vector(self, p: int, k: int, prec: int) -> SymVector:
        ctx = self.tower.context(p)
        entries = [PadicSeriesA.zero(ctx, prec) for _ in range(k + 1)]
        for j, c in enumerate(kernel_coefficients(k)):
            entries[2 * j] = PadicSeriesA.from_terms(
                ctx, {k // 2 - j: ctx.from_fraction(c, prec)}, prec
            )
        return SymVector(k, tuple(entries))

    def sym_vector(
        self, p: int, k: int, slots: Sequence[Sequence[Fraction | int]], prec: int
    ) -> SymVector:
        """Polynomial vector from rational a-coefficients per slot."""
        ctx = self.tower.context(p)
        entries = []
        for coefficients in slots:
            values = [ctx.from_fraction(Fraction(c), prec) for c in coefficients]
            entries.append(PadicSeriesA.from_coefficients(ctx, values, prec))
        return SymVector(k, tuple(entries))

    def apply_g(self, u: SymVector) -> SymVector:
        """u G_k."""
        k = u.k
        ctx = u.entries[0].ctx
        out = [PadicSeriesA.zero(ctx, u.prec) for _ in range(k + 1)]
        for m, entry in enumerate(u.entries):
            if m < k:
                out[m + 1] = out[m + 1] + entry.shift_a(1).mul_int(k - m).mul_pi_power(1)
            if m > 0:
                step = entry.shift_a(2).scale_rational(Fraction(-m, 3)).mul_pi_power(1)
                out[m - 1] = out[m - 1] + step
        return SymVector(k, tuple(out))

    def apply_partial(self, u: SymVector) -> SymVector:
        """d_a u = a du/da + u G_k."""
        euler = SymVector(u.k, tuple(entry.euler() for entry in u.entries))
        return euler + self.apply_g(u)

    # decomposition

    def _cut_weight(self, u: SymVector) -> int | None:
        cuts = [2 * e.length + m for m, e in enumerate(u.entries) if not e.is_polynomial]
        return min(cuts) if cuts else None

    def _top_weight(self, u: SymVector) -> int:
        return max((2 * (e.length - 1) + m for m, e in enumerate(u.entries)), default=0)

    def tail_floor(self, u: SymVector, cut: int) -> int:
        """pi-digits certified for everything of weight >= cut after reduction.

        A monomial of weight W passes through at most ceil(W/3) divisions by pi.
        """
        p = u.entries[0].p
        e = p - 1
        floor: int | None = None
        for m, entry in enumerate(u.entries):
            first = max(0, ceil_div(cut - m, 2))
            if entry.is_polynomial:
                for t in range(first, entry.length):
                    v = entry.coefficient(t).pi_valuation()
                    if v is not None:
                        bound = v - ceil_div(2 * t + m, 3)
                        floor = bound if floor is None else min(floor, bound)
                continue
            if entry.growth is None:
                raise PrecisionExhausted(f"slot {m} is truncated without a growth certificate")
            slope, rho = entry.growth
            if slope * e < 1:
                raise NonConvergent(f"slot {m} grows with slope {slope}, too slow to reduce")
            bound = math.ceil((slope * first + rho) * e) - ceil_div(2 * first + m, 3)
            floor = bound if floor is None else min(floor, bound)
        return u.prec if floor is None else floor

    def _solve(
        self, u: SymVector, *, feedback: bool
    ) -> tuple[VkCoords, dict[Monomial, PadicElem], dict[int, PadicElem], int | None]:
        k = u.k
        ctx = u.entries[0].ctx
        p = ctx.p
        prec = u.prec
        cut = self._cut_weight(u)
        top = self._top_weight(u) if cut is None else cut - 1
        zero = ctx.zero(prec)

        work: dict[Monomial, PadicElem] = {}
        for m, entry in enumerate(u.entries):
            for t in range(entry.length):
                if 2 * t + m <= top:
                    c = entry.coefficient(t)
                    if not c.is_zero():
                        work[(m, t)] = c

        constants = [zero] * (k + 1)
        primitive = [zero] * ((k + 1) // 2)
        xi: dict[Monomial, PadicElem] = {}
        kernel: dict[int, PadicElem] = {}
        for weight in range(top, -1, -1):
            system = weight_system(k, weight)
            rhs = [work.pop(monomial, None) for monomial in system.equations]
            if all(value is None for value in rhs):
                continue
            if not _units_only(k, weight, p):
                raise KTooLarge(f"weight {weight} of Sym^{k} divides by p = {p}")
            for x, label in enumerate(system.unknowns):
                total = zero
                for e_index, value in enumerate(rhs):
                    c = system.inverse[e_index][x]
                    if value is not None and c:
                        total = total + value * c
                if total.is_zero():
                    continue
                kind = label[0]
                if kind == "const":
                    constants[label[1]] = total
                elif kind == "prim":
                    primitive[label[1]] = total
                elif kind == "ker":
                    kernel[label[1]] = total
                else:
                    m, t = label[1], label[2]  # type: ignore[misc]
                    value = total.mul_pi_power(-1)
                    xi[(m, t)] = value
                    if feedback and t:
                        previous = work.get((m, t), zero)
                        work[(m, t)] = previous - value * t
        floor = None if cut is None else self.tail_floor(u, cut)
        certified = min([prec] + [c.prec for c in constants + primitive + list(kernel.values())])
        if floor is not None:
            certified = min(certified, floor)
        kernel_series = None
        if k % 2 == 0:
            size = max(kernel, default=0) + 1
            coefficients = [kernel.get(t, zero) for t in range(size)]
            kernel_series = PadicSeriesA.from_coefficients(ctx, coefficients, certified)
        coords = VkCoords(k, tuple(constants), tuple(primitive), certified, kernel_series)
        return coords.with_precision(certified), xi, kernel, cut

    def _xi_vector(self, k: int, ctx: PadicContext, xi: dict[Monomial, PadicElem], prec: int):
        entries = []
        for m in range(k + 1):
            terms = {t: value for (slot, t), value in xi.items() if slot == m}
            entries.append(PadicSeriesA.from_terms(ctx, terms, prec))
        return SymVector(k, tuple(entries))

    def decompose_step(self, u: SymVector) -> tuple[VkCoords, SymVector]:
        """u = eta + xi G_k + h k_vec on the complete weights of u.

        Returns eta (with h in ``kernel`` for even k) and xi.
        """
        self._check_k(u.entries[0].p, u.k)
        coords, xi, _, _ = self._solve(u, feedback=False)
        return coords, self._xi_vector(u.k, u.entries[0].ctx, xi, coords.prec)

    def reduce_with_witness(self, u: SymVector) -> tuple[VkCoords, SymVector]:
        """(eta, zeta) with u = eta + d_a zeta (+ h k_vec for even k) on the complete weights."""
        self._check_k(u.entries[0].p, u.k)
        coords, zeta, _, _ = self._solve(u, feedback=True)
        return coords, self._xi_vector(u.k, u.entries[0].ctx, zeta, coords.prec)

    def reduce(self, u: SymVector) -> VkCoords:
        self._check_k(u.entries[0].p, u.k)
        return self._solve(u, feedback=True)[0]

    def reduce_odd(self, u: SymVector, prec: int) -> VkCoords:
        """V_k-coordinates of u modulo d_a, certified to prec pi-digits."""
        if u.k % 2 == 0:
            raise DomainInputError(f"k = {u.k} is even; use reduce_even")
        return self._certified(self.reduce(u), prec)

    def reduce_even(self, u: SymVector, prec: int) -> VkCoords:
        """Coordinates in V_k plus the kernel coefficient, modulo d_a of the last-slot-free part."""
        if u.k % 2:
            raise OddK(f"k = {u.k} is odd; use reduce_odd")
        return self._certified(self.reduce(u), prec)

    def _certified(self, coords: VkCoords, prec: int) -> VkCoords:
        if coords.prec < prec:
            raise PrecisionExhausted(f"reduction certified {coords.prec} of {prec} digits")
        return coords.with_precision(prec)

    # Frobenius on V_k

    def beta_plan(self, p: int, k: int, prec: int) -> tuple[int, int]:
        """(T, working precision): a-terms kept after psi_a and the digits carried."""
        b, b_prime, _ = self.fibre.growth_parameters(p)
        e = p - 1
        slope = 2 * b / 3
        rho = -2 * b_prime / 3
        if slope * e < 1:
            raise NonConvergent(f"beta_{k} cannot be reduced for p = {p}")

        def floor(length: int) -> int:
            cut = 2 * length
            worst = None
            for m in range(k + 1):
                t = max(0, ceil_div(cut - m, 2))
                bound = math.ceil((slope * t + rho) * e) - ceil_div(2 * t + m, 3)
                worst = bound if worst is None else min(worst, bound)
            assert worst is not None
            return worst

        length = 1
        while floor(length) < prec:
            length += 1
        work = prec + ceil_div(2 * length + 2, 3) + self.settings.precision_slack
        return length, work

    def relative_frobenius(self, p: int, atrunc: int, prec: int) -> FrobMatrixA:
        key = (p, atrunc, prec)
        if key not in self._frob:
            self._frob[key] = self.fibre.frob_matrix(p, 3, atrunc, prec)
        return self._frob[key]

    def sym_power_rows(
        self, frob: FrobMatrixA, k: int, rows: Iterable[int]
    ) -> dict[int, list[PadicSeriesA]]:
        """Rows of Sym^k of the relative Frobenius: alpha(v)^(k-m) alpha(w)^m by slot."""
        a11, a12 = frob.entry(1, 1), frob.entry(1, 2)
        a21, a22 = frob.entry(2, 1), frob.entry(2, 2)
        ctx = a11.ctx
        one = PadicSeriesA.constant(ctx.one(frob.prec))

        def powers(x: PadicSeriesA) -> list[PadicSeriesA]:
            out = [one]
            for _ in range(k):
                out.append(out[-1] * x)
            return out

        p11, p12, p21, p22 = powers(a11), powers(a12), powers(a21), powers(a22)
        result = {}
        for m in rows:
            first = [p11[k - m - r] * p12[r] * comb(k - m, r) for r in range(k - m + 1)]
            second = [p21[m - s] * p22[s] * comb(m, s) for s in range(m + 1)]
            row = []
            for n in range(k + 1):
                total = None
                for r in range(max(0, n - m), min(n, k - m) + 1):
                    term = first[r] * second[n - r]
                    total = term if total is None else total + term
                assert total is not None
                row.append(total)
            result[m] = row
        return result

    def beta_images(self, p: int, k: int, prec: int) -> list[SymVector]:
        """beta_k = psi_a o Sym^k alpha(a) on the constants e_0..e_k, then on a e_0, a e_2, ..."""
        self._check_k(p, k)
        length, work = self.beta_plan(p, k, prec)
        logger.info("beta_%s p=%s: %s a-terms after psi at %s digits", k, p, length, work)
        frob = self.relative_frobenius(p, p * length, work)
        rows = self.sym_power_rows(frob, k, range(k + 1))
        images = [SymVector(k, tuple(entry.psi() for entry in rows[m])) for m in range(k + 1)]
        for j in range((k + 1) // 2):
            shifted = tuple(entry.shift_a(1).psi() for entry in rows[2 * j])
            images.append(SymVector(k, shifted))
        return images

    def beta_matrix(self, p: int, k: int, prec: int) -> SympowFrobenius:
        """Matrix of beta_k on V_k for odd k, certified to prec pi-digits."""
        from expsum.workers.jobs import reduce_sym_vector
        from expsum.workers.pool import parallel_map

        if k % 2 == 0:
            raise DomainInputError(f"k = {k} is even; the primitive block is built for odd k")
        images = self.beta_images(p, k, prec)
        reduced = parallel_map(reduce_sym_vector, [(u,) for u in images])
        rows = tuple(tuple(self._certified(c, prec).row()) for c in reduced)
        return SympowFrobenius(p, k, prec, rows)

    def beta_matrix_primitive(
        self, p: int, k: int, prec: int
    ) -> tuple[list[list[PadicElem]], list[list[PadicElem]]]:
        """(A_ij on the primitive basis a v^(k-2i) w^(2i), constant block)."""
        frob = self.beta_matrix(p, k, prec)
        return frob.primitive_block(), frob.constant_block()

    def primitive_floor(self, p: int, k: int, i: int, j: int) -> Fraction:
        """Lower bound for ord A_ij: (2b'/3)(pj - i) + (b'/3)(p-1)k + (2/3)(b - b')."""
        b, b_prime, _ = self.fibre.growth_parameters(p)
        return 2 * b_prime / 3 * (p * j - i) + b_prime / 3 * (p - 1) * k + Fraction(2, 3) * (
            b - b_prime
        )

    def check_primitive_floor(self, frob: SympowFrobenius) -> None:
        for i, row in enumerate(frob.primitive_block()):
            for j, entry in enumerate(row):
                v = entry.valuation()
                floor = self.primitive_floor(frob.p, frob.k, i, j)
                if v is not None and v < floor:
                    raise GrowthViolation(f"A_{i}{j} has ord {v} below {floor}")

    def filtration_form(self, frob: SympowFrobenius) -> list[list[Fraction | None]]:
        """ord B_ij after pulling out p^((b'/3)(p-1)k + (2/3)(b-b')) and xi~^j by column."""
        p, k = frob.p, frob.k
        b, b_prime, _ = self.fibre.growth_parameters(p)
        scale = b_prime / 3 * (p - 1) * k + Fraction(2, 3) * (b - b_prime)
        step = 2 * b_prime / 3
        out = []
        for i, row in enumerate(frob.primitive_block()):
            out_row: list[Fraction | None] = []
            for j, entry in enumerate(row):
                v = entry.valuation()
                if v is None:
                    out_row.append(None)
                else:
                    out_row.append(v + step * (i - j) - step * (p - 1) * j - scale)
            out.append(out_row)
        return out

    def _charpoly(self, matrix: list[list[PadicElem]], p: int, prec: int) -> list[PadicElem]:
        ctx = self.tower.context(p)
        coeffs = charpoly_berkowitz(matrix, ctx.one(prec), ctx.zero(prec))
        return [c.with_precision(prec) for c in coeffs]

    def mk_padic(self, p: int, k: int, prec: int, frob: SympowFrobenius | None = None) -> LPoly:
        """M_k(T) = det(1 - beta_k T) on the primitive part, odd k."""
        frob = frob or self.beta_matrix(p, k, prec)
        coeffs = self._charpoly(frob.primitive_block(), p, prec)
        meta = {"p": p, "k": k, "d": 3, "prec": prec, "method": "cohomology"}
        return LPoly(tuple(coeffs), "padic", meta)

    def full_vk_charpoly(
        self, p: int, k: int, prec: int, frob: SympowFrobenius | None = None
    ) -> LPoly:
        """det(1 - beta_k T) on all of V_k; equals M_k(T) P_k(T)."""
        frob = frob or self.beta_matrix(p, k, prec)
        coeffs = self._charpoly([list(row) for row in frob.full], p, prec)
        return LPoly(tuple(coeffs), "padic", {"p": p, "k": k, "prec": prec, "block": "full"})

    def constant_block_charpoly(
        self, p: int, k: int, prec: int, frob: SympowFrobenius | None = None
    ) -> LPoly:
        frob = frob or self.beta_matrix(p, k, prec)
        coeffs = self._charpoly(frob.constant_block(), p, prec)
        return LPoly(tuple(coeffs), "padic", {"p": p, "k": k, "prec": prec, "block": "constants"})

    # trivial factors and the functional equation

    def gauss_sign(self, p: int, prec: int | None = None) -> int:
        """Sign e with g_2((p^2-1)/3) = e p, for p = 2 mod 3."""
        prec = prec or self.settings.default_precision(p)
        g = self.tower.gauss_sum(p, 2, (p * p - 1) // 3, prec)
        if g == p:
            return 1
        if g == -p:
            return -1
        raise IdentityFailure(f"g_2((p^2-1)/3) is not +-{p}", detail=p)

    def _g_bar(self, p: int, k: int, prec: int | None) -> int | None:
        if p % 3 == 2 and trivial_multiplicities(p, k)[0]:
            return self.gauss_sign(p, prec) * p
        return None

    def trivial_eigenvalues(
        self, p: int, k: int, prec: int | None = None
    ) -> list[tuple[int, int]]:
        if k % 2:
            return []
        return trivial_eigenvalues(p, k, self._g_bar(p, k, prec))

    def trivial_factor(self, p: int, k: int, prec: int | None = None) -> LPoly:
        """N_k(T) with (m_k, n_k) in meta; 1 for odd k."""
        if k % 2:
            return LPoly((1,), "integer", {"p": p, "k": k, "m_k": 0, "n_k": 0})
        m_k, n_k = trivial_multiplicities(p, k)
        g_bar = self._g_bar(p, k, prec)
        eigenvalues = trivial_eigenvalues(p, k, g_bar)
        coeffs = trivial_factor_coeffs(p, k, g_bar)
        meta = {"p": p, "k": k, "m_k": m_k, "n_k": n_k, "eigenvalues": eigenvalues}
        return LPoly(tuple(coeffs), "integer", meta)

    def check_fe(self, poly: LPoly, k: int, p: int) -> object:
        """Constant c of M(T) = c T^delta M(p^-(k+1) T^-1), delta = (k+1)/2 for odd k."""
        delta = (k + 1) // 2 if k % 2 else poly.degree
        coeffs = [poly.coefficient(m) for m in range(delta + 1)]
        return functional_equation_constant(coeffs, p ** (k + 1))
