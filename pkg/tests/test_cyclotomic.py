import pytest

from expsum.core.errors import BadIndex, IdentityFailure, NotAUnit
from expsum.models.cyclotomic import (
    CycloElem,
    complex_abs_all,
    galois_apply,
    in_index_r_subfield,
    zeta_accumulate,
)


def test_zeta_has_order_p() -> None:
    assert CycloElem.zeta(7) ** 7 == CycloElem.from_int(7, 1)
    total = CycloElem.from_int(7, 0)
    for i in range(7):
        total = total + CycloElem.zeta(7, i)
    assert total.is_zero()


def test_conjugate_inverts_zeta() -> None:
    assert CycloElem.zeta(7).conjugate() == CycloElem.zeta(7, 6)
    assert CycloElem.zeta(7) * CycloElem.zeta(7).conjugate() == CycloElem.from_int(7, 1)


def test_galois_action_needs_a_unit() -> None:
    with pytest.raises(NotAUnit):
        galois_apply(7, CycloElem.zeta(7))
    assert galois_apply(3, CycloElem.zeta(7)) == CycloElem.zeta(7, 3)


def test_accumulate_counts_exponents() -> None:
    # the cubes of F_7 are 0, 1 (three times) and 6 (three times)
    cubes = [x**3 % 7 for x in range(7)]
    expected = CycloElem.from_int(7, 1) + CycloElem.zeta(7) * 3 + CycloElem.zeta(7, 6) * 3
    assert zeta_accumulate(cubes, 7) == expected


def test_exact_division() -> None:
    x = CycloElem(5, (6, 3, 0, -9))
    assert x.exact_div(3) == CycloElem(5, (2, 1, 0, -3))
    with pytest.raises(IdentityFailure):
        x.exact_div(2)


def test_powers_need_a_nonnegative_exponent() -> None:
    zeta = CycloElem.zeta(5)
    assert zeta**5 == CycloElem.from_int(5, 1)
    assert zeta**0 == CycloElem.from_int(5, 1)
    with pytest.raises(ValueError):
        _ = zeta**-1


def test_gauss_sum_of_quadratic_character_has_absolute_value_sqrt_p() -> None:
    p = 7
    squares = {x * x % p for x in range(1, p)}
    total = CycloElem.from_int(p, 0)
    for x in range(1, p):
        sign = 1 if x in squares else -1
        total = total + CycloElem.zeta(p, x) * sign
    assert all(abs(value - p**0.5) < 1e-9 for value in complex_abs_all(total))
    assert total * total == CycloElem.from_int(p, -p)


def test_index_r_subfields() -> None:
    assert in_index_r_subfield(CycloElem.from_int(7, 5), 1)
    assert not in_index_r_subfield(CycloElem.zeta(7), 3)
    # -1 is a cube mod 7, so zeta + zeta^-1 lies in the cubic subfield
    assert in_index_r_subfield(CycloElem.zeta(7) + CycloElem.zeta(7, 6), 3)
    assert not in_index_r_subfield(CycloElem.zeta(7) + CycloElem.zeta(7, 6), 1)
    with pytest.raises(BadIndex):
        in_index_r_subfield(CycloElem.zeta(7), 4)
