from fractions import Fraction

import pytest

from expsum.core.errors import EmptyInput, FEViolation
from expsum.models.lpoly import (
    LPoly,
    charpoly_berkowitz,
    functional_equation_constant,
    lpoly_from_power_sums,
    poly_divide_exact,
    poly_mul,
    power_sums_from_poly,
)
from expsum.models.polygon import newton_polygon


def test_newton_identities_on_integer_roots() -> None:
    # (1 - 2T)(1 - 3T) has power sums -(2^n + 3^n)
    assert lpoly_from_power_sums([-5, -13], 1) == [1, -5, 6]
    assert power_sums_from_poly([1, -5, 6], 3) == [-5, -13, -35]


def test_polynomial_product_and_quotient() -> None:
    assert poly_mul([1, 2], [1, 3]) == [1, 5, 6]
    assert poly_mul([1, 2], [1, 3], limit=2) == [1, 5]
    assert poly_divide_exact([1, 5, 6], [1, 2]) == [1, 3, 0]


def test_berkowitz_gives_reverse_characteristic_polynomial() -> None:
    assert charpoly_berkowitz([[2, 0], [0, 3]], 1, 0) == [1, -5, 6]
    assert charpoly_berkowitz([[1, 2], [3, 4]], 1, 0) == [1, -5, -2]
    assert charpoly_berkowitz([], 1, 0) == [1]


def test_functional_equation_constant() -> None:
    # 1 - pT has weight p^2 and constant -p
    assert functional_equation_constant([1, -7], 49) == -7
    with pytest.raises(FEViolation):
        functional_equation_constant([1, -7], 7)


def test_degree_ignores_trailing_zeros() -> None:
    poly = LPoly((1, 3, 0, 0), "integer")
    assert poly.degree == 1
    assert poly.trimmed().coeffs == (1, 3)
    assert poly.coefficient(9) == 0


def test_newton_polygon_vertices_and_slopes() -> None:
    polygon = newton_polygon([(0, 0), (1, 1), (2, 3)])
    assert polygon.slope_list() == [1, 2]
    assert polygon.is_symmetric(3)
    assert not polygon.is_symmetric(4)

    flat = newton_polygon([(0, 0), (1, 2), (2, 2)])
    assert flat.slope_list() == [1, 1]
    assert flat.vertices == ((0, 0), (2, 2))


def test_newton_polygon_skips_infinite_valuations() -> None:
    polygon = newton_polygon([(0, 0), (1, None), (2, 1)])
    assert polygon.slope_list() == [Fraction(1, 2), Fraction(1, 2)]
    assert polygon.height_at(1) == Fraction(1, 2)


def test_newton_polygon_hull_is_idempotent() -> None:
    points = [(0, 0), (1, Fraction(5, 3)), (2, 4), (3, Fraction(13, 2)), (4, 8)]
    polygon = newton_polygon(points)
    again = newton_polygon(list(polygon.vertices))
    assert again == polygon


def test_newton_polygon_needs_a_finite_constant_term() -> None:
    with pytest.raises(EmptyInput):
        newton_polygon([])
    with pytest.raises(EmptyInput):
        newton_polygon([(0, None), (1, 0)])
