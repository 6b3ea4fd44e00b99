import logging
from typing import Literal

import numpy as np

from expsum.core.config import ApplicationSettings, get_settings
from expsum.core.errors import (
    DegreeMismatch,
    DomainInputError,
    FEViolation,
    KTooLarge,
    TooLarge,
)
from expsum.models.cyclotomic import CycloElem, complex_values
from expsum.models.finite_field import (
    FieldDescriptor,
    FqElem,
    build_field,
    embed,
    field_digits,
    iter_field_chunks,
    mul_rows,
    power_table,
)
from expsum.models.lpoly import (
    LPoly,
    functional_equation_constant,
    lpoly_from_power_sums,
    poly_divide_exact,
    poly_mul,
)

logger = logging.getLogger(__name__)

MkMethod = Literal["auto", "full", "fe"]


def trivial_multiplicities(p: int, k: int) -> tuple[int, int]:
    """(m_k, n_k) for even k."""
    if k % 4 == 0:
        return 1 + k // (2 * p), 1 + k // (4 * p)
    return k // (2 * p), k // (4 * p)


def trivial_eigenvalues(p: int, k: int, g_bar: int | None = None) -> list[tuple[int, int]]:
    """(reciprocal root, multiplicity) pairs of N_k(T) for even k.

    ``g_bar`` is the conjugate of g_2((p^2-1)/3); it only enters for p = 2 mod 3
    and defaults to its value -p there.
    """
    if k % 2:
        raise DomainInputError(f"the trivial factor exists for even k only, got k = {k}")
    m_k, n_k = trivial_multiplicities(p, k)
    half = k // 2
    if g_bar is None:
        g_bar = -p
    residue = p % 12
    if residue == 1:
        factors = [(p**half, m_k)]
    elif residue == 5:
        factors = [((-g_bar) ** half, m_k)]
    elif residue in (7, 11):
        root = p**half if residue == 7 else g_bar**half
        if k % 4 == 0:
            factors = [(root, n_k), (-root, m_k - n_k)]
        else:
            factors = [(root, m_k - n_k), (-root, n_k)]
    else:
        raise DomainInputError(f"p = {p} must be a prime at least 5")
    return [(root, multiplicity) for root, multiplicity in factors if multiplicity]


def trivial_factor_coeffs(p: int, k: int, g_bar: int | None = None) -> list[int]:
    """Integer coefficients of N_k(T) for even k."""
    coeffs = [1]
    for root, multiplicity in trivial_eigenvalues(p, k, g_bar):
        for _ in range(multiplicity):
            coeffs = poly_mul(coeffs, [1, -root])
    return coeffs


class OracleService:
    """Service for handling exact character sums and the L-functions built from them."""

    def __init__(self, settings: ApplicationSettings | None = None) -> None:
        self.settings = settings or get_settings()

    def _check_family(self, fld: FieldDescriptor, d: int) -> None:
        if d < 2:
            raise DomainInputError(f"family degree must be at least 2, got {d}")
        if d % fld.p == 0:
            raise DomainInputError(f"p = {fld.p} divides the family degree {d}")

    def char_sum(self, fld: FieldDescriptor, lam: FqElem, m: int = 1, d: int = 3) -> CycloElem:
        """Exact S_m(lambda) = sum over x in F_{q^m} of zeta^Tr(x^d + lambda x)."""
        fld.check(lam)
        self._check_family(fld, d)
        if m < 1:
            raise DomainInputError(f"level must be positive, got {m}")
        if fld.q**m > self.settings.enum_cap:
            raise TooLarge(f"F_{fld.p}^{fld.s * m} exceeds the enumeration cap")

        big = fld if m == 1 else build_field(fld.p, fld.s * m)
        image = embed(fld, big, lam)
        p = big.p
        basis = np.array(big.trace_basis, dtype=np.int64)
        counts = np.zeros(p, dtype=np.int64)
        for chunk in iter_field_chunks(big):
            lam_rows = np.broadcast_to(np.array(image.coeffs, dtype=np.int64), chunk.shape)
            values = (power_table(big, chunk, d) + mul_rows(big, chunk, lam_rows)) % p
            counts += np.bincount((values @ basis) % p, minlength=p)
        return CycloElem.from_full(p, counts.tolist())

    def first_sums_all(self, fld: FieldDescriptor, d: int = 3) -> np.ndarray:
        """S_1(lambda) for every lambda in enumeration order, as canonical rows (q, p-1).

        The sum is the additive Fourier transform of x -> zeta^Tr(x^d), carried out
        in the group ring Z[C_p] one coordinate at a time.
        """
        self._check_family(fld, d)
        if fld.q > self.settings.enum_cap:
            raise TooLarge(f"F_{fld.p}^{fld.s} exceeds the enumeration cap")
        p, s, q = fld.p, fld.s, fld.q

        digits = field_digits(fld, 0, q)
        traces = (power_table(fld, digits, d) @ np.array(fld.trace_basis, dtype=np.int64)) % p
        ring = np.zeros((q, p), dtype=np.int64)
        ring[np.arange(q), traces] = 1
        # axis j of the reshaped array is digit s-1-j
        ring = ring.reshape((p,) * s + (p,))

        for axis in range(s):
            slabs = [np.take(ring, y, axis=axis) for y in range(p)]
            transformed = []
            for u in range(p):
                total = np.zeros_like(slabs[0])
                for y, slab in enumerate(slabs):
                    total += np.roll(slab, u * y % p, axis=-1)
                transformed.append(total)
            ring = np.stack(transformed, axis=axis)

        frequencies = (digits @ fld.trace_form) % p
        full = ring[tuple(frequencies[:, ::-1].T)]
        return full[:, : p - 1] - full[:, p - 1 :]

    def fibre_determinant(
        self, fld: FieldDescriptor, lam: FqElem | None = None, d: int = 3
    ) -> CycloElem:
        """Top coefficient e_{d-1} of the fibre L-polynomial."""
        self._check_family(fld, d)
        lam = fld.one() if lam is None else fld.check(lam)
        if fld.q**2 <= self.settings.det_enum_cap or d != 3:
            sums = [self.char_sum(fld, lam, m, d) for m in range(1, d)]
            coeffs = lpoly_from_power_sums(sums, CycloElem.from_int(fld.p, 1))
            return coeffs[d - 1]
        return CycloElem.from_int(fld.p, fld.q)

    def fibre_L_exact(self, fld: FieldDescriptor, lam: FqElem, d: int = 3) -> LPoly:
        """L(f_lambda, T) of degree d - 1 from S_1 .. S_{d-1} by Newton's identities."""
        fld.check(lam)
        self._check_family(fld, d)
        one = CycloElem.from_int(fld.p, 1)
        meta = {"p": fld.p, "s": fld.s, "d": d, "lambda": list(lam.coeffs)}

        if fld.q ** (d - 1) <= self.settings.enum_cap:
            sums = [self.char_sum(fld, lam, m, d) for m in range(1, d)]
            coeffs = lpoly_from_power_sums(sums, one)
            meta["method"] = "enumeration"
        elif d == 3:
            first = self.char_sum(fld, lam, 1, d)
            coeffs = [one, first, CycloElem.from_int(fld.p, fld.q)]
            meta["method"] = "determinant"
        else:
            raise TooLarge(f"level {d - 1} over F_{fld.p}^{fld.s} exceeds the enumeration cap")
        return LPoly(tuple(coeffs), "cyclotomic", meta)

    def check_fibre_fe(self, poly: LPoly, q: int) -> CycloElem:
        """Verify c T^n conj(L)(q^-1 T^-1) = L with c = c_n; returns c."""
        n = poly.degree
        top = poly.coefficient(n)
        for m in range(n + 1):
            left = poly.coefficient(m) * q ** (n - m)
            right = top * poly.coefficient(n - m).conjugate()
            if left != right:
                raise FEViolation(f"fibre functional equation fails at T^{m}", index=m)
        return top

    def weil_deviation(self, poly: LPoly, q: int) -> float:
        """Largest | |reciprocal root| - sqrt(q) | over all complex embeddings."""
        values = np.array([complex_values(c) for c in poly.trimmed().coeffs])
        target = np.sqrt(q)
        worst = 0.0
        for column in values.T:
            roots = np.roots(column)
            if roots.size:
                worst = max(worst, float(np.max(np.abs(np.abs(roots) - target))))
        return worst

    def power_sum_level(self, p: int, k: int, s: int) -> CycloElem:
        """N_s = sum over a in F_{p^s} of h_k(pi_1(a), pi_2(a)) for the cubic family."""
        fld = build_field(p, s)
        rows, counts = np.unique(self.first_sums_all(fld, 3), axis=0, return_counts=True)
        logger.debug("level s=%s: %d distinct first sums over %d fibres", s, len(rows), fld.q)
        total = CycloElem.from_int(p, 0)
        for row, count in zip(rows, counts):
            e1 = -CycloElem(p, tuple(int(c) for c in row))
            total = total + _complete_homogeneous(e1, fld.q, k) * int(count)
        return total

    def mk_power_sums(self, p: int, k: int, smax: int, d: int = 3) -> list[CycloElem]:
        """Exact N_1 .. N_smax of M_k."""
        from expsum.workers.jobs import mk_power_sum_level
        from expsum.workers.pool import parallel_map

        if d != 3:
            raise DomainInputError("symmetric powers are defined for the cubic family only")
        if k < 0:
            raise DomainInputError(f"k must be non-negative, got {k}")
        self._check_family(build_field(p, 1), d)
        if p**smax > self.settings.enum_cap:
            raise TooLarge(f"level {smax} over F_{p} exceeds the enumeration cap")
        return parallel_map(mk_power_sum_level, [(p, k, s) for s in range(1, smax + 1)])

    def _mk_series(self, p: int, k: int, levels: int) -> list[CycloElem]:
        sums = self.mk_power_sums(p, k, levels)
        return lpoly_from_power_sums(sums, CycloElem.from_int(p, 1))

    def mk_exact_poly(self, p: int, k: int, d: int = 3, method: MkMethod = "auto") -> LPoly:
        """M_k(T) for odd k < p, of degree (k+1)/2."""
        if k % 2 == 0:
            raise DomainInputError(f"k = {k} is even; use mk_even_poly")
        if k >= p:
            raise KTooLarge(f"k = {k} must be smaller than p = {p}")
        delta = (k + 1) // 2
        levels = delta // 2 + 1
        cap = self.settings.oracle_full_cap
        if method == "auto":
            if p**delta <= cap:
                method = "full"
            elif p**levels <= cap:
                method = "fe"
            else:
                raise TooLarge(f"M_{k} for p = {p} needs F_{p}^{levels}, above the oracle cap")
        if method == "full" or levels >= delta:
            coeffs = self._mk_series(p, k, delta)
            sign = _fe_sign(coeffs, p, delta, delta)
            _check_fe_pairs(coeffs, p, delta, sign, delta)
            method = "full"
        else:
            coeffs = self._mk_series(p, k, levels)
            sign = _fe_sign(coeffs, p, delta, levels)
            _check_fe_pairs(coeffs, p, delta, sign, levels)
            for m in range(delta - levels - 1, -1, -1):
                coeffs.append(coeffs[m] * (sign * p ** (delta * delta - 2 * delta * m)))
        logger.info("M_%s for p=%s by %s method", k, p, method)
        return LPoly(
            tuple(coeffs), "cyclotomic", {"p": p, "k": k, "d": d, "method": method, "sign": sign}
        )

    def mk_even_poly(self, p: int, k: int, d: int = 3) -> LPoly:
        """M_k(T) for even k < 2p, with the quotient by N_k(T) in meta["reduced"]."""
        if k % 2 or k < 2:
            raise DomainInputError(f"k = {k} must be even and positive")
        if k >= 2 * p:
            raise KTooLarge(f"k = {k} must be smaller than 2p = {2 * p}")
        m_k, _ = trivial_multiplicities(p, k)
        degree = k + m_k
        if p**degree > self.settings.oracle_full_cap:
            raise TooLarge(f"M_{k} for p = {p} needs F_{p}^{degree}, above the oracle cap")

        coeffs = self._mk_series(p, k, degree)
        trivial = [CycloElem.from_int(p, c) for c in trivial_factor_coeffs(p, k)]
        reduced = poly_divide_exact(coeffs, trivial)
        if any(not c.is_zero() for c in reduced[k + 1 :]):
            raise DegreeMismatch(f"M_{k} / N_{k} does not truncate at degree {k}", detail=p)
        reduced = LPoly(tuple(reduced[: k + 1]), "cyclotomic", {"p": p, "k": k}).trimmed()

        meta = {"p": p, "k": k, "d": d, "method": "full", "trivial_degree": m_k}
        meta["reduced"] = reduced
        try:
            meta["reduced_fe"] = _mk_fe_check(reduced, p, k)
        except FEViolation as exc:
            logger.warning("reduced M_%s for p=%s: %s", k, p, exc)
            meta["reduced_fe"] = None
        return LPoly(tuple(coeffs), "cyclotomic", meta).trimmed()

    def zero_fibre_factor(self, p: int, k: int) -> LPoly:
        """P_k(T) = prod_j (1 - pi_1(0)^(k-j) pi_2(0)^j T) from the lambda = 0 fibre."""
        fld = build_field(p, 1)
        e1 = -self.char_sum(fld, fld.zero(), 1, 3)
        one = CycloElem.from_int(p, 1)
        fibre_sums = [CycloElem.from_int(p, 2), e1]
        for n in range(2, k + 2):
            fibre_sums.append(e1 * fibre_sums[n - 1] - fibre_sums[n - 2] * p)
        sums = [-_complete_homogeneous(fibre_sums[n], p**n, k) for n in range(1, k + 2)]
        coeffs = lpoly_from_power_sums(sums, one)
        return LPoly(tuple(coeffs), "cyclotomic", {"p": p, "k": k, "fibre": 0})

    def mk_star_poly(self, p: int, k: int) -> LPoly:
        """M_k^*(T) = M_k(T) P_k(T), the product over nonzero closed points."""
        base = self.mk_exact_poly(p, k) if k % 2 else self.mk_even_poly(p, k)
        factor = self.zero_fibre_factor(p, k)
        coeffs = poly_mul(list(base.coeffs), list(factor.coeffs))
        return LPoly(tuple(coeffs), "cyclotomic", {**base.meta, "star": True}).trimmed()


def _complete_homogeneous(e1: CycloElem, e2: int, k: int) -> CycloElem:
    """h_k(x, y) for x + y = e1 and xy = e2."""
    previous, current = CycloElem.from_int(e1.p, 0), CycloElem.from_int(e1.p, 1)
    for _ in range(k):
        previous, current = current, e1 * current - previous * e2
    return current


def _fe_sign(coeffs: list[CycloElem], p: int, delta: int, known: int) -> int:
    """Sign e with c_(delta-m) = e c_m p^(delta^2 - 2 delta m), from the known range."""
    for m in range(max(0, delta - known), (delta + 1) // 2):
        if coeffs[m].is_zero():
            continue
        scaled = coeffs[m] * p ** (delta * delta - 2 * delta * m)
        if coeffs[delta - m] == scaled:
            return 1
        if coeffs[delta - m] == -scaled:
            return -1
        raise DegreeMismatch(f"c_{delta - m} is not +-p^k c_{m}", index=delta - m)
    if delta % 2 == 0 and not coeffs[delta // 2].is_zero():
        return 1
    raise DegreeMismatch("functional-equation sign is undetermined by the known levels")


def _check_fe_pairs(coeffs: list[CycloElem], p: int, delta: int, sign: int, known: int) -> None:
    for m in range(0, delta // 2 + 1):
        if delta - m > known:
            continue
        exponent = delta * delta - 2 * delta * m
        left = coeffs[delta - m] * p ** max(0, -exponent)
        right = coeffs[m] * (sign * p ** max(0, exponent))
        if left != right:
            raise DegreeMismatch(
                f"coefficient T^{delta - m} breaks the functional equation", index=delta - m
            )


def _mk_fe_check(poly: LPoly, p: int, k: int) -> CycloElem:
    """Constant c of the functional equation of a polynomial of weight k + 1."""
    return functional_equation_constant(poly.coeffs[: poly.degree + 1], p ** (k + 1))
