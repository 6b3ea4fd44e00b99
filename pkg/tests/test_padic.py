import random
from fractions import Fraction

import pytest

from expsum.core.errors import FieldMismatch, NotAUnit
from expsum.models.finite_field import FieldDescriptor
from expsum.models.padic import PadicContext, PadicElem, ceil_div, p_valuation


def test_integer_helpers() -> None:
    assert p_valuation(50, 5) == 2
    assert p_valuation(-7, 7) == 1
    assert ceil_div(7, 2) == 4
    assert ceil_div(-7, 2) == -3


def test_pi_power_relation(ctx7: PadicContext) -> None:
    assert ctx7.pi_power(6, 30) == ctx7.from_int(-7, 30)
    seven = ctx7.from_int(7, 30)
    assert seven.valuation() == 1
    assert seven.pi_valuation() == 6


def test_fractions_and_inverses(ctx7: PadicContext, rng: random.Random) -> None:
    third = ctx7.from_fraction(Fraction(1, 3), 24)
    assert third * 3 == 1
    for _ in range(10):
        value = rng.randrange(1, 10_000)
        if value % 7 == 0:
            continue
        x = ctx7.from_int(value, 24)
        assert x * x.inverse() == 1


def test_inverse_of_zero_and_of_p(ctx7: PadicContext) -> None:
    with pytest.raises(ZeroDivisionError):
        ctx7.from_int(0, 12).inverse()
    assert ctx7.from_int(7, 24).inverse().valuation() == -1
    with pytest.raises(NotAUnit):
        ctx7.from_int(7, 24).inverse().residue()


def test_precision_is_tracked(ctx7: PadicContext) -> None:
    x = ctx7.from_int(5, 20)
    y = ctx7.from_int(5, 12)
    assert (x + y).prec == 12
    assert (x - ctx7.from_int(5 + 7**4, 20)).is_zero()
    assert (x - ctx7.from_int(5 + 7**2, 20)).pi_valuation() == 12


def test_teichmuller_lift_is_a_root_of_unity(ctx7: PadicContext, f7: FieldDescriptor) -> None:
    for value in range(1, 7):
        t = ctx7.teichmuller(f7.element(value), 30)
        assert t**6 == 1
        assert t.residue() == f7.element(value)


def test_teichmuller_over_quadratic_extension(ctx49: PadicContext) -> None:
    fld = ctx49.fld
    x = fld.element([2, 3])
    t = ctx49.teichmuller(x, 18)
    assert t ** (fld.q - 1) == 1


def test_elements_of_different_towers_do_not_mix(
    ctx7: PadicContext, ctx49: PadicContext
) -> None:
    with pytest.raises(FieldMismatch):
        _ = ctx7.one(10) - ctx49.one(10)
    with pytest.raises(FieldMismatch):
        _ = ctx7.one(10) == ctx49.one(10)


def test_pi_digits_rebuild_the_element(ctx7: PadicContext) -> None:
    x = ctx7.from_fraction(Fraction(5, 3), 24) * ctx7.pi_power(2, 24)
    start, digits = x.pi_digits()
    assert start == 2
    assert all(0 <= d[0] < 7 for d in digits)
    assert PadicElem.from_pi_digits(ctx7, start, digits, x.prec) == x
