from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction

from expsum.core.errors import EmptyInput


@dataclass(frozen=True)
class NPolygon:
    """Lower convex hull of points (i, ord c_i) with exact rational slopes."""

    vertices: tuple[tuple[int, Fraction], ...]
    slopes: tuple[tuple[Fraction, int], ...]

    @property
    def degree(self) -> int:
        return sum(multiplicity for _, multiplicity in self.slopes)

    def slope_list(self) -> list[Fraction]:
        """Slopes repeated by multiplicity, nondecreasing."""
        return [slope for slope, multiplicity in self.slopes for _ in range(multiplicity)]

    def height_at(self, index: int) -> Fraction:
        for (x0, y0), (x1, y1) in zip(self.vertices, self.vertices[1:]):
            if x0 <= index <= x1:
                return y0 + (y1 - y0) * Fraction(index - x0, x1 - x0)
        if self.vertices and index == self.vertices[0][0]:
            return self.vertices[0][1]
        raise ValueError(f"index {index} outside the polygon")

    def is_symmetric(self, weight: Fraction | int) -> bool:
        """Slope multiset invariant under s -> weight - s."""
        slopes = self.slope_list()
        mirrored = sorted(Fraction(weight) - s for s in slopes)
        return mirrored == slopes


def newton_polygon(points: Sequence[tuple[int, Fraction | int | None]]) -> NPolygon:
    """Lower convex hull; points whose valuation is None (infinite) are skipped."""
    finite = sorted((int(i), Fraction(v)) for i, v in points if v is not None)
    if not points:
        raise EmptyInput("no points for a Newton polygon")
    if not finite or finite[0][0] != min(int(i) for i, _ in points):
        raise EmptyInput("the constant term must have finite valuation")

    hull: list[tuple[int, Fraction]] = []
    for point in finite:
        if hull and hull[-1][0] == point[0]:
            if point[1] >= hull[-1][1]:
                continue
            hull.pop()
        while len(hull) >= 2 and _cross(hull[-2], hull[-1], point) <= 0:
            hull.pop()
        hull.append(point)

    slopes = []
    for (x0, y0), (x1, y1) in zip(hull, hull[1:]):
        slopes.append(((y1 - y0) / (x1 - x0), x1 - x0))
    return NPolygon(tuple(hull), tuple(slopes))


def _cross(o: tuple[int, Fraction], a: tuple[int, Fraction], b: tuple[int, Fraction]) -> Fraction:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


@dataclass(frozen=True)
class BoundRow:
    """One coefficient of the quadratic lower-bound check.

    ``exact`` is False when the coefficient vanished to precision and
    ``valuation`` is only its certified floor.
    """

    m: int
    valuation: Fraction
    exact: bool
    bound: Fraction
    variant: Fraction
    conjectural: Fraction

    @property
    def margin(self) -> Fraction:
        return self.valuation - self.bound

    @property
    def passed(self) -> bool:
        return self.valuation >= self.bound
