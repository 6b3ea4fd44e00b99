import random

import pytest

from expsum.core.errors import CompositeP, DegreeZero, FieldMismatch, TooLarge
from expsum.models.finite_field import (
    FieldDescriptor,
    build_field,
    embed,
    enumerate_field,
    field_digits,
    power_table,
    trace_to_prime,
)


def test_build_field_picks_smallest_irreducible_modulus(f49: FieldDescriptor) -> None:
    # X^2 + 1 is irreducible because -1 is not a square modulo 7
    assert f49.modulus == (1, 0, 1)
    y = f49.element([0, 1])
    assert f49.mul(y, y) == f49.element(6)


def test_build_field_rejects_bad_input() -> None:
    with pytest.raises(CompositeP):
        build_field(9, 1)
    with pytest.raises(DegreeZero):
        build_field(7, 0)


def test_inverse_and_frobenius_on_random_elements(
    f49: FieldDescriptor, rng: random.Random
) -> None:
    for _ in range(20):
        x = f49.element_at(rng.randrange(1, f49.q))
        assert f49.mul(x, f49.inv(x)) == f49.one()
        assert f49.frobenius(f49.frobenius(x)) == x
        assert f49.pow(x, f49.q - 1) == f49.one()


def test_degree_of_prime_field_elements(f49: FieldDescriptor) -> None:
    assert f49.degree(f49.element(3)) == 1
    assert f49.degree(f49.element([0, 1])) == 2


def test_element_at_follows_base_p_digits(f49: FieldDescriptor) -> None:
    x = f49.element_at(7 * 2 + 5)
    assert x.coeffs == (5, 2)
    assert f49.index_of(x) == 19
    with pytest.raises(FieldMismatch):
        f49.element_at(49)


def test_primitive_element_generates_units(f49: FieldDescriptor) -> None:
    g = f49.primitive_element()
    assert f49.multiplicative_order(g) == 48


def test_enumeration_cap() -> None:
    fld = build_field(5, 2)
    assert len(enumerate_field(fld, cap=25)) == 25
    with pytest.raises(TooLarge):
        enumerate_field(fld, cap=24)


def test_power_table_matches_scalar_pow(f49: FieldDescriptor) -> None:
    digits = field_digits(f49, 0, f49.q)
    cubes = power_table(f49, digits, 3)
    for index in (0, 1, 8, 30, 48):
        expected = f49.pow(f49.element_at(index), 3)
        assert tuple(int(c) for c in cubes[index]) == expected.coeffs


def test_embedding_of_prime_field(f7: FieldDescriptor, f49: FieldDescriptor) -> None:
    assert embed(f7, f49, f7.element(4)) == f49.element(4)


def test_absolute_trace(f49: FieldDescriptor) -> None:
    assert trace_to_prime(f49.one(), f49) == 2
    elements = enumerate_field(f49)
    assert sum(1 for x in elements if trace_to_prime(x, f49) == 0) == 7
    assert all(trace_to_prime(f49.frobenius(x), f49) == trace_to_prime(x, f49) for x in elements)
