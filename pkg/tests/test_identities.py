from fractions import Fraction

from expsum.services.identities import IdentityService, binsum_sides, combo_sides


def test_combo_sides() -> None:
    assert combo_sides(2) == (Fraction(8, 3), Fraction(8, 3))
    for n in range(12):
        left, right = combo_sides(n)
        assert left == right


def test_binsum_sides_carry_a_global_minus_sign() -> None:
    assert binsum_sides((2,), 1) == (2, Fraction(-2))
    left, right = binsum_sides((3, 1, 2), 2)
    assert left == -right


def test_small_identity_checks_pass() -> None:
    service = IdentityService()
    assert service.check_combo(10).passed
    binsum = service.check_binsum(4)
    assert binsum.passed
    assert binsum.detail["sign"] == -1
    assert service.check_h([2, 4]).passed
    assert service.check_kernel_dimension(20, [5, 7]).passed


def test_det_nk_reports_the_printed_form() -> None:
    result = IdentityService().check_det_nk([2, 4])
    assert result.passed
    assert result.detail["matches_2_to_the_k"]["2"] is False


def test_fermat_classes() -> None:
    result = IdentityService().check_fermat([13, 5, 7, 11])
    assert result.passed
    assert result.detail["classes"] == {"13": 1, "5": 5, "7": 7, "11": 11}


def test_identity_suite_runs_every_check_in_order() -> None:
    results = IdentityService().identity_suite(nmax=6, dmax=3, kmax=10, fermat_primes=(13, 5))
    names = [result.name for result in results]
    assert names == ["combo", "binsum", "det_nk", "h_cramer", "kernel_dimension", "fermat"]
    assert all(result.passed for result in results)
