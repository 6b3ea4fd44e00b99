from fractions import Fraction

import pytest

from expsum.core.errors import GrowthViolation, PrecisionExhausted
from expsum.models.padic import PadicContext
from expsum.models.padic_series import PadicSeriesA


def series(ctx: PadicContext, values: list[int], prec: int = 24) -> PadicSeriesA:
    return PadicSeriesA.from_coefficients(ctx, [ctx.from_int(v, prec) for v in values], prec)


def test_product_of_polynomials(ctx7: PadicContext) -> None:
    product = series(ctx7, [1, 1]) * series(ctx7, [1, -1])
    assert product.coefficient(0) == 1
    assert product.coefficient(1) == 0
    assert product.coefficient(2) == -1
    assert product.coefficient(5) == 0


def test_shift_psi_and_euler(ctx7: PadicContext) -> None:
    f = series(ctx7, [3, 0, 0, 0, 0, 0, 0, 5, 0, 0, 0, 0, 0, 0, 2])
    assert f.psi().coefficient(0) == 3
    assert f.psi().coefficient(1) == 5
    assert f.psi().coefficient(2) == 2
    shifted = f.shift_a(1)
    assert shifted.coefficient(0) == 0
    assert shifted.coefficient(8) == 5
    assert f.euler().coefficient(7) == 35


def test_evaluate_and_recenter(ctx7: PadicContext) -> None:
    f = series(ctx7, [1, 2, 3])
    assert f.evaluate(ctx7.from_int(2, 24)) == 17
    square = series(ctx7, [0, 0, 1]).recenter(ctx7.from_int(1, 24), 3)
    assert square.coefficient(0) == 1
    assert square.coefficient(1) == 2
    assert square.coefficient(2) == 1


def test_truncated_series_needs_growth(ctx7: PadicContext) -> None:
    f = series(ctx7, [1, 7, 49, 343])
    tail = f.truncate(2, growth=(Fraction(1), Fraction(0)))
    assert not tail.is_polynomial
    with pytest.raises(PrecisionExhausted):
        tail.coefficient(3)
    assert tail.tail_floor() == 2


def test_certify_rejects_slow_growth(ctx7: PadicContext) -> None:
    f = series(ctx7, [1, 1, 49])
    with pytest.raises(GrowthViolation):
        f.certify(Fraction(1), Fraction(0))
    assert series(ctx7, [1, 7, 49]).certify(Fraction(1), Fraction(0)).growth == (1, 0)


def test_scaling_by_pi_powers(ctx7: PadicContext) -> None:
    f = series(ctx7, [1, 2])
    scaled = f.mul_pi_power(3)
    assert scaled.coefficient(1).pi_valuation() == 3
    assert scaled.scale_rational(Fraction(1, 7)).coefficient(0).valuation() == Fraction(-1, 2)


def test_frobenius_substitution_is_undone_by_psi(ctx7: PadicContext) -> None:
    f = series(ctx7, [4, 2, 1])
    g = f.frobenius_substitute()
    assert g.coefficient(7) == 2
    assert g.coefficient(14) == 1
    assert g.coefficient(1) == 0
    assert g.psi().coefficients() == f.coefficients()
