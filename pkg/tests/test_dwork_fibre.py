from fractions import Fraction

import pytest

from expsum.core.errors import BadIndex, DomainInputError, HypothesisFailed, NonConvergent
from expsum.models.cohomology import XSeries
from expsum.models.finite_field import FieldDescriptor, build_field
from expsum.models.padic import PadicContext
from expsum.models.padic_series import PadicSeriesA
from expsum.services.dwork_fibre import DworkFibreService
from expsum.services.newton_poly import NewtonPolyService
from expsum.services.oracle_sums import OracleService
from expsum.services.verification import VerificationService, padic_agree


def test_growth_parameters() -> None:
    service = DworkFibreService()
    b, b_prime, gain = service.growth_parameters(7)
    assert (b, b_prime, gain) == (Fraction(6, 7), Fraction(6, 49), Fraction(6, 7) - Fraction(1, 6))
    with pytest.raises(NonConvergent):
        service.growth_parameters(2)


def test_x_truncation_grows_with_precision() -> None:
    service = DworkFibreService()
    low = service.x_truncation(7, 3, 10)
    high = service.x_truncation(7, 3, 40)
    assert 3 <= low < high
    assert service.tail_floor(7, 3, high) >= Fraction(40, 6) - 1


def test_leading_term_of_the_frobenius_entries() -> None:
    service = DworkFibreService()
    term = service.frob_leading_term(3, 11, 1, 1)
    assert (term.r, term.a_degree, term.pi_power) == (3, 1, 4)
    assert term.coefficient == Fraction(1, 6)
    assert term.valuation == Fraction(2, 5)
    with pytest.raises(HypothesisFailed):
        service.frob_leading_term(3, 7, 1, 1)
    with pytest.raises(BadIndex):
        service.frob_leading_term(3, 11, 0, 1)


def test_reduction_kills_the_image_of_the_twisted_differential(ctx7: PadicContext) -> None:
    service = DworkFibreService()
    prec = 20
    c = ctx7.from_int(2, prec)
    pi = ctx7.pi_power(1, prec)
    zero = ctx7.zero(prec)
    # D_c(x^2) = 2 x^2 + pi c x^3 + 3 pi x^5
    image = [zero, zero, ctx7.from_int(2, prec), pi * c, zero, pi.mul_int(3)]
    assert all(coord.is_zero() for coord in service.reduce_fibre(image, 3, c))


def test_fibre_family_degree_must_be_prime_to_p(f7: FieldDescriptor) -> None:
    service = DworkFibreService()
    with pytest.raises(DomainInputError):
        service.fibre_frob_matrix(f7, f7.one(), 7, 10)


def test_padic_fibre_polynomial_matches_the_character_sums(f7: FieldDescriptor) -> None:
    service = DworkFibreService()
    prec = 30
    zbar = f7.one()
    padic = service.fibre_L_padic(f7, zbar, 3, prec)
    exact = OracleService().fibre_L_exact(f7, zbar, 3)
    embedded = service.tower.embed_lpoly(exact, 7, prec)
    assert padic_agree(padic.coeffs, embedded.coeffs, prec)
    assert padic.coefficient(2) == 7
    slopes = NewtonPolyService().polygon_of(padic, 7).slope_list()
    assert slopes == [Fraction(1, 3), Fraction(2, 3)]


def test_padic_fibre_over_a_quadratic_extension_matches_the_character_sums() -> None:
    fld = build_field(5, 2)
    index = next(i for i in range(1, fld.q) if fld.degree(fld.element_at(i)) == 2)
    pair = VerificationService().fibre_pair(5, 2, index, 3, 20)
    assert pair["match"]
    assert pair["padic"].coefficient(2) == 25


def test_quintic_fibre_has_the_predicted_slopes() -> None:
    pair = VerificationService().fibre_pair(11, 1, 1, 5, 30)
    assert pair["match"]
    assert pair["slopes"] == NewtonPolyService().predicted_fibre_slopes(5, 11)
    assert pair["slopes"] == [Fraction(j, 5) for j in range(1, 5)]


@pytest.mark.slow
@pytest.mark.parametrize("p", [11, 13])
def test_quintic_fibres_over_the_prime_field(p: int) -> None:
    verification = VerificationService()
    predicted = NewtonPolyService().predicted_fibre_slopes(5, p, strict=True)
    for index in range(1, p):
        pair = verification.fibre_pair(p, 1, index, 5, 4 * (p - 1))
        assert pair["match"], index
        assert pair["slopes"] == predicted, index


def test_dual_basis_starts_with_the_unit_vector() -> None:
    service = DworkFibreService()
    coeffs = service.dual_basis(7, 3, 1, 6, 20)
    assert len(coeffs) == 7
    assert coeffs[1].coefficient(0) == 1
    assert coeffs[0].is_zero() and coeffs[2].is_zero()
    with pytest.raises(BadIndex):
        service.dual_basis(7, 3, 3, 6, 20)


def _monomial(ctx: PadicContext, n: int, prec: int) -> XSeries:
    zero = PadicSeriesA.zero(ctx, prec)
    return XSeries(tuple([zero] * n + [PadicSeriesA.constant(ctx.one(prec))]))


def test_f_series_starts_with_the_splitting_coefficients(ctx7: PadicContext) -> None:
    service = DworkFibreService()
    prec = 20
    pi = ctx7.pi_power(1, prec)
    h = service.f_series(7, 3, 4, prec)
    assert len(h) == 5
    assert h[0].coefficient(0) == 1
    assert h[1].coefficient(0) == 0
    assert h[1].coefficient(1) == pi
    # theta_1 theta_0 from x^3, theta_0 theta_3 a^3 from a x
    assert h[3].coefficient(0) == pi
    assert h[3].coefficient(3) == (pi**3) * Fraction(1, 6)
    with pytest.raises(DomainInputError):
        service.f_series(7, 7, 4, prec)


def test_reduction_kills_the_image_of_d_a(ctx7: PadicContext) -> None:
    service = DworkFibreService()
    prec = 20
    for n in range(3):
        image = service.apply_da(_monomial(ctx7, n, prec), 3)
        assert all(coord.is_zero() for coord in service.reduce_mod_Da(image, 3))
    with pytest.raises(DomainInputError):
        service.apply_da(XSeries(_monomial(ctx7, 1, prec).terms, Fraction(1)), 3)


def test_reduction_of_x_to_the_fourth(ctx7: PadicContext) -> None:
    service = DworkFibreService()
    coords = service.reduce_mod_Da(_monomial(ctx7, 4, 20), 3)
    assert coords[0].is_zero()
    # x^4 = -(1/(3 pi)) x - (a/3) x^2 modulo D_a
    assert coords[1].mul_pi_power(1).coefficient(0) == Fraction(-1, 3)
    assert coords[2].coefficient(1) == Fraction(-1, 3)
    assert coords[2].coefficient(0) == 0


def test_pairing_with_the_dual_basis(ctx7: PadicContext) -> None:
    service = DworkFibreService()
    prec = 20
    dual = service.dual_basis(7, 3, 1, 6, prec)
    for j in range(3):
        value = service.pairing(_monomial(ctx7, j, prec), dual)
        assert value.coefficient(0) == (1 if j == 1 else 0)
    paired = service.pairing(_monomial(ctx7, 4, prec), dual)
    reduced = service.reduce_mod_Da(_monomial(ctx7, 4, prec), 3)
    assert paired.mul_pi_power(1).coefficient(0) == reduced[1].mul_pi_power(1).coefficient(0)


def test_twisted_dual_image(ctx7: PadicContext) -> None:
    service = DworkFibreService()
    prec = 20
    image = service.theta_bar_dual(7, 3, 1, 6, prec)
    assert list(image) == [2]
    assert image[2].coefficient(0) == ctx7.pi_power(1, prec).mul_int(-3)


@pytest.mark.slow
def test_fredholm_determinant_factors_through_the_fibre(f7: FieldDescriptor) -> None:
    service = DworkFibreService()
    prec = 30
    zbar = f7.one()
    series = service.fredholm_truncated(f7, zbar, 3, 3, prec)
    poly = service.fibre_L_padic(f7, zbar, 3, prec)
    assert padic_agree(series, service.elementary_product(poly, 3, prec), prec)


@pytest.mark.slow
def test_relative_frobenius_solves_the_connection() -> None:
    service = DworkFibreService()
    prec = 12
    frob = service.frob_matrix(7, 3, 12, prec)
    residual = service.frob_ode_residual(frob)
    assert residual is None or residual >= Fraction(prec, 6) - 1
