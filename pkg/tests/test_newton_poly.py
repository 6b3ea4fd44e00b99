from fractions import Fraction

import pytest

from expsum.core.errors import DomainInputError, HypothesisFailed
from expsum.models.lpoly import LPoly
from expsum.services.newton_poly import NewtonPolyService
from expsum.services.oracle_sums import OracleService


@pytest.mark.parametrize(
    ("d", "p", "expected"),
    [
        (3, 11, [Fraction(2, 5), Fraction(3, 5)]),
        (3, 7, [Fraction(1, 3), Fraction(2, 3)]),
        (3, 5, [Fraction(1, 2), Fraction(1, 2)]),
        (5, 11, [Fraction(j, 5) for j in range(1, 5)]),
    ],
)
def test_predicted_fibre_slopes(d: int, p: int, expected: list[Fraction]) -> None:
    assert NewtonPolyService().predicted_fibre_slopes(d, p) == expected


def test_predicted_slopes_refuse_bad_primes() -> None:
    service = NewtonPolyService()
    with pytest.raises(HypothesisFailed):
        service.predicted_fibre_slopes(3, 7, strict=True)
    with pytest.raises(HypothesisFailed):
        service.predicted_fibre_slopes(3, 3)
    assert service.predicted_fibre_slopes(3, 11, strict=True) == [Fraction(2, 5), Fraction(3, 5)]


def test_integer_coefficient_valuations() -> None:
    service = NewtonPolyService()
    poly = LPoly((1, 14, 0, Fraction(7, 49)), "rational")
    assert service.coefficient_valuations(poly, 7) == [0, 1, None, -1]


def test_cyclotomic_valuations_of_m3() -> None:
    service = NewtonPolyService()
    exact = OracleService().mk_exact_poly(7, 3)
    valuations = service.coefficient_valuations(exact, 7)
    assert valuations[0] == 0
    assert valuations[1] == Fraction(5, 3)
    assert service.polygon_of(exact, 7).is_symmetric(4)


def test_polygon_rows() -> None:
    service = NewtonPolyService()
    polygon = service.polygon_of(LPoly((1, -7), "integer"), 7)
    assert service.polygon_rows(polygon) == [(0, 0, 1), (1, 1, 1)]
    assert service.is_symmetric(polygon, 2)


def test_lower_bound_table() -> None:
    service = NewtonPolyService()
    passed, rows = service.check_lower_bound(LPoly((1, 49, 7**4), "integer"), 3, 7)
    assert passed
    assert rows[1].bound == Fraction(180, 147)
    assert rows[1].conjectural == Fraction(5, 3)
    assert rows[1].margin == 2 - Fraction(180, 147)

    passed, rows = service.check_lower_bound(LPoly((1, 7, 7**4), "integer"), 3, 7)
    assert not passed
    assert not rows[1].passed
    assert rows[2].passed


def test_lower_bound_needs_odd_k_below_p() -> None:
    service = NewtonPolyService()
    with pytest.raises(DomainInputError):
        service.lower_bound_table(LPoly((1, 7), "integer"), 2, 7)
    with pytest.raises(DomainInputError):
        service.lower_bound_table(LPoly((1, 7), "integer"), 7, 7)
