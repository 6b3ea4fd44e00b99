import pytest

from expsum.core.errors import DomainInputError, KTooLarge, TooLarge
from expsum.models.cyclotomic import CycloElem
from expsum.models.finite_field import FieldDescriptor, build_field
from expsum.services.oracle_sums import (
    OracleService,
    trivial_eigenvalues,
    trivial_factor_coeffs,
    trivial_multiplicities,
)


def test_first_sum_of_the_pure_cube(f7: FieldDescriptor) -> None:
    oracle = OracleService()
    expected = CycloElem.from_int(7, 1) + CycloElem.zeta(7) * 3 + CycloElem.zeta(7, 6) * 3
    assert oracle.char_sum(f7, f7.zero(), 1) == expected


def test_first_sums_all_agrees_with_direct_sums(f49: FieldDescriptor) -> None:
    oracle = OracleService()
    rows = oracle.first_sums_all(f49)
    for index in (0, 1, 9, 30):
        direct = oracle.char_sum(f49, f49.element_at(index), 1)
        assert CycloElem(7, tuple(int(c) for c in rows[index])) == direct


def test_fibre_polynomial_for_p7(f7: FieldDescriptor) -> None:
    oracle = OracleService()
    for value in range(1, 7):
        lam = f7.element(value)
        poly = oracle.fibre_L_exact(f7, lam)
        assert poly.degree == 2
        assert poly.coefficient(1) == oracle.char_sum(f7, lam, 1)
        # x^3 + lambda x is odd, so S_1 is real and the determinant is q
        assert poly.coefficient(2) == CycloElem.from_int(7, 7)
        assert oracle.check_fibre_fe(poly, 7) == CycloElem.from_int(7, 7)
        assert oracle.weil_deviation(poly, 7) < 1e-9


def test_fibre_over_quadratic_extension_satisfies_weil(f49: FieldDescriptor) -> None:
    oracle = OracleService()
    poly = oracle.fibre_L_exact(f49, f49.element([1, 1]))
    assert poly.degree == 2
    assert oracle.weil_deviation(poly, 49) < 1e-6


def test_family_degree_must_be_prime_to_p() -> None:
    oracle = OracleService()
    fld = build_field(3, 1)
    with pytest.raises(DomainInputError):
        oracle.fibre_L_exact(fld, fld.one(), 3)


def test_enumeration_cap_is_enforced(settings_factory, f49: FieldDescriptor) -> None:
    oracle = OracleService(settings_factory(enum_cap=100))
    with pytest.raises(TooLarge):
        oracle.char_sum(f49, f49.one(), 2)


def test_first_symmetric_power_is_linear() -> None:
    poly = OracleService().mk_exact_poly(7, 1)
    assert poly.degree == 1
    assert poly.coefficient(1) == CycloElem.from_int(7, -7)


def test_symmetric_power_domain_checks() -> None:
    oracle = OracleService()
    with pytest.raises(DomainInputError):
        oracle.mk_exact_poly(7, 2)
    with pytest.raises(KTooLarge):
        oracle.mk_exact_poly(7, 7)
    with pytest.raises(DomainInputError):
        oracle.mk_even_poly(7, 3)


def test_trivial_factor_for_k4() -> None:
    assert trivial_multiplicities(7, 4) == (1, 1)
    assert trivial_eigenvalues(7, 4) == [(49, 1)]
    assert trivial_factor_coeffs(7, 4) == [1, -49]
    assert trivial_multiplicities(7, 2) == (0, 0)
    assert trivial_factor_coeffs(13, 4) == [1, -169]


def test_even_symmetric_power_contains_the_trivial_factor() -> None:
    poly = OracleService().mk_even_poly(7, 4)
    reduced = poly.meta["reduced"]
    assert poly.meta["trivial_degree"] == 1
    assert reduced.degree <= 4
    assert poly.degree == reduced.degree + 1


def test_fibre_determinant_is_q(f7: FieldDescriptor, f49: FieldDescriptor) -> None:
    oracle = OracleService()
    assert oracle.fibre_determinant(f7) == CycloElem.from_int(7, 7)
    assert oracle.fibre_determinant(f7, f7.element(3)) == CycloElem.from_int(7, 7)
    assert oracle.fibre_determinant(f49) == CycloElem.from_int(7, 49)
