from fractions import Fraction

import pytest

from expsum.core.errors import DomainInputError, KTooLarge, OddK
from expsum.models.cohomology import SymVector, VkCoords
from expsum.models.lpoly import LPoly
from expsum.models.padic import PadicContext
from expsum.models.padic_series import PadicSeriesA
from expsum.services.sympow_cohom import (
    SympowCohomService,
    det_nk,
    det_nk_closed_form,
    h_coefficient,
    h_coefficient_cramer,
    kernel_coefficients,
    kernel_dimension,
    kernel_dimension_count,
)
from expsum.services.verification import VerificationService

PREC = 20


def _eta(coords: VkCoords, ctx: PadicContext, prec: int) -> SymVector:
    """Constants in slot m at a^0, primitive j in slot 2j at a^1."""
    entries = []
    for m in range(coords.k + 1):
        terms = {0: coords.constants[m]}
        if m % 2 == 0 and m // 2 < len(coords.primitive):
            terms[1] = coords.primitive[m // 2]
        entries.append(PadicSeriesA.from_terms(ctx, terms, prec))
    return SymVector(coords.k, tuple(entries))


def _sample(service: SympowCohomService) -> SymVector:
    return service.sym_vector(7, 3, [[1, 2, 0, 1], [0, 1], [3, 0, 2], [0, 0, 1]], PREC)


def test_kernel_coefficients() -> None:
    assert kernel_coefficients(2) == [Fraction(1, 3), 1]
    assert kernel_coefficients(4) == [Fraction(1, 9), Fraction(2, 3), 1]
    with pytest.raises(OddK):
        kernel_coefficients(3)


def test_det_nk_and_its_closed_form() -> None:
    assert det_nk(2) == Fraction(2, 3)
    assert det_nk(4) == Fraction(8, 9)
    for k in (2, 4, 6):
        assert det_nk(k) == det_nk_closed_form(k)


def test_h_coefficients_agree_with_cramer() -> None:
    assert (h_coefficient(2, 0), h_coefficient(2, 1)) == (Fraction(3, 2), Fraction(1, 2))
    for k in (2, 4, 6):
        for j in range(k // 2 + 1):
            assert h_coefficient(k, j) == h_coefficient_cramer(k, j)


def test_kernel_dimension() -> None:
    assert kernel_dimension(4, 7) == 1
    assert kernel_dimension(3, 7) == 0
    for p in (5, 7):
        for k in range(1, 30):
            assert kernel_dimension(k, p) == kernel_dimension_count(k, p)


def test_kernel_vector_is_killed_by_g() -> None:
    service = SympowCohomService()
    for k in (2, 4):
        assert service.apply_g(service.kernel_vector(7, k, PREC)).is_zero()


def test_gk_matrix_entries(ctx7: PadicContext) -> None:
    service = SympowCohomService()
    g = service.gk_matrix(7, 3, PREC)
    pi = ctx7.pi_power(1, PREC)
    assert g[0][1].coefficient(1) == pi * 3
    assert g[2][1].coefficient(2) == pi * Fraction(-2, 3)
    assert g[0][2].is_zero()


def test_decompose_step_recomposes(ctx7: PadicContext) -> None:
    service = SympowCohomService()
    u = _sample(service)
    coords, xi = service.decompose_step(u)
    residual = u - _eta(coords, ctx7, PREC) - service.apply_g(xi)
    assert residual.is_zero()


def test_reduce_with_witness_recomposes(ctx7: PadicContext) -> None:
    service = SympowCohomService()
    u = _sample(service)
    coords, zeta = service.reduce_with_witness(u)
    residual = u - _eta(coords, ctx7, PREC) - service.apply_partial(zeta)
    assert residual.is_zero()
    assert service.reduce_odd(u, PREC - 4).k == 3


def test_image_of_the_derivative_reduces_to_zero() -> None:
    service = SympowCohomService()
    zeta = service.sym_vector(7, 3, [[0, 1], [2], [0, 0, 1], [1]], PREC)
    assert service.reduce(service.apply_partial(zeta)).is_zero()


def test_reduce_checks_parity_and_k() -> None:
    service = SympowCohomService()
    with pytest.raises(DomainInputError):
        service.reduce_odd(service.kernel_vector(7, 2, PREC), PREC)
    with pytest.raises(OddK):
        service.reduce_even(_sample(service), PREC)
    large = service.sym_vector(7, 7, [[1]] * 8, PREC)
    with pytest.raises(KTooLarge):
        service.decompose_step(large)


def test_functional_equation_constant_of_m1() -> None:
    service = SympowCohomService()
    assert service.check_fe(LPoly((1, -7), "integer"), 1, 7) == -7


def test_trivial_factors() -> None:
    service = SympowCohomService()
    factor = service.trivial_factor(7, 4)
    assert factor.coeffs == (1, -49)
    assert (factor.meta["m_k"], factor.meta["n_k"]) == (1, 1)
    assert service.trivial_factor(7, 3).coeffs == (1,)
    assert service.trivial_eigenvalues(7, 3) == []


def test_primitive_floor_is_increasing_in_j() -> None:
    service = SympowCohomService()
    assert service.primitive_floor(7, 3, 0, 1) > service.primitive_floor(7, 3, 0, 0)


@pytest.mark.slow
@pytest.mark.parametrize("k", [1, 3])
def test_cohomology_matches_the_character_sums(k: int) -> None:
    verification = VerificationService()
    pair = verification.mk_pair(7, k, 12)
    assert pair["match"]
    verification.sympow.check_primitive_floor(pair["frob"])


@pytest.mark.slow
@pytest.mark.parametrize("k", [1, 3, 5, 7, 9])
def test_cohomology_matches_the_character_sums_at_p11(k: int) -> None:
    pair = VerificationService().mk_pair(11, k, 20)
    assert pair["match"]


@pytest.mark.slow
def test_primitive_block_of_the_first_power() -> None:
    service = SympowCohomService()
    primitive, constant = service.beta_matrix_primitive(7, 1, 12)
    assert len(primitive) == 1 and len(constant) == 2
    # M_1(T) = 1 - 7T
    assert primitive[0][0] == 7
    frob = service.beta_matrix(7, 1, 12)
    form = service.filtration_form(frob)
    assert len(form) == 1 and form[0][0] is not None
