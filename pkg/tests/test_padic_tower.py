from fractions import Fraction

import pytest

from expsum.core.errors import NonConvergent
from expsum.models.cyclotomic import CycloElem
from expsum.models.lpoly import LPoly
from expsum.models.padic import PadicContext
from expsum.services.padic_tower import PadicTowerService, splitting_rational


def test_zeta_image_is_a_pth_root_of_unity() -> None:
    tower = PadicTowerService()
    ctx = tower.context(7)
    zeta = tower.zeta(ctx, 30)
    assert zeta**7 == 1
    assert not (zeta - 1).is_zero()
    assert (zeta - 1).pi_valuation() == 1


def test_splitting_coefficients_start_with_powers_of_pi() -> None:
    # theta_n = pi^n / n! for n < p
    for n in range(1, 7):
        r, rational = splitting_rational(7, n)
        assert r == n % 6
        if n < 6:
            assert rational * _factorial(n) == 1


def _factorial(n: int) -> int:
    out = 1
    for i in range(2, n + 1):
        out *= i
    return out


def test_embedding_is_a_ring_map() -> None:
    tower = PadicTowerService()
    ctx = tower.context(7)
    x = CycloElem(7, (1, 2, 0, 0, 3, 0))
    y = CycloElem.zeta(7, 3) + 5
    left = tower.embed_padic(x * y, ctx, 24)
    right = tower.embed_padic(x, ctx, 24) * tower.embed_padic(y, ctx, 24)
    assert left == right


def test_embed_lpoly_keeps_integers() -> None:
    tower = PadicTowerService()
    poly = tower.embed_lpoly(LPoly((1, -7), "integer"), 7, 24)
    assert poly.domain == "padic"
    assert poly.coeffs[1] == -7
    assert poly.meta["prec"] == 24


def test_gauss_sums_follow_stickelberger_and_the_norm_relation() -> None:
    tower = PadicTowerService()
    for j in range(1, 6):
        g = tower.gauss_sum(7, 1, j, 30)
        assert g.valuation() == Fraction(j, 6)
        assert g * tower.gauss_sum(7, 1, 6 - j, 30) == (-1) ** j * 7


def test_fermat_valuations_split_by_residue_class() -> None:
    tower = PadicTowerService()
    minus, plus = tower.fermat_valuations(13)
    assert plus == 0
    assert minus is None or minus > 0
    minus, plus = tower.fermat_valuations(5)
    assert minus == 0
    assert plus is None or plus > 0


def test_exp_and_log_are_inverse(ctx7: PadicContext) -> None:
    tower = PadicTowerService()
    x = ctx7.from_int(14, 24)
    assert tower.padic_log(tower.padic_exp(x)) == x
    assert (tower.padic_exp(x) - 1).valuation() == 1
    with pytest.raises(NonConvergent):
        tower.padic_exp(ctx7.pi_power(1, 24))
    with pytest.raises(NonConvergent):
        tower.padic_log(ctx7.from_int(2, 24))
