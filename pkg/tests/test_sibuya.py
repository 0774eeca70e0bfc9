import math

import mpmath
import numpy as np
import pytest

from epkit.errors import DomainError, TruncationError
from epkit.sibuya import (
    TruncationPolicy,
    fisher_info_series,
    fisher_info_sibuya,
    limit_score_Psi,
    limit_score_Psi_prime,
    limit_score_series,
    sibuya_pmf,
    sibuya_pmf_table,
    sibuya_tail,
)


def _fisher_closed_form(a):
    # 1/a^2 + 3F2(1-a, 1-a, 1; 2, 2-a; 1) / (1-a), from summing formula B termwise
    mpmath.mp.dps = 30
    return float(1 / mpmath.mpf(a) ** 2 + mpmath.hyp3f2(1 - a, 1 - a, 1, 2, 2 - a, 1) / (1 - a))


def test_pmf_small_values():
    assert sibuya_pmf(0.5, 1) == pytest.approx(0.5, abs=1e-15)
    assert sibuya_pmf(0.5, 2) == pytest.approx(0.125, abs=1e-15)
    assert sibuya_pmf(0.5, 3) == pytest.approx(0.0625, abs=1e-15)


def test_pmf_rejects_bad_j():
    with pytest.raises(DomainError):
        sibuya_pmf(0.5, 0)
    with pytest.raises(DomainError):
        sibuya_pmf(0.5, 1.5)
    with pytest.raises(DomainError):
        sibuya_tail(0.5, 0)
    with pytest.raises(DomainError):
        sibuya_pmf(1.0, 3)


def test_tail_values():
    assert sibuya_tail(0.5, 1) == pytest.approx(0.5, abs=1e-15)
    assert sibuya_tail(0.3, 1) == pytest.approx(0.7, abs=1e-15)


def test_tail_matches_brute_force_sum():
    j = np.arange(5, 10**7 + 1)
    direct = math.fsum(sibuya_pmf(0.5, j))
    # what is left beyond 10^7 is itself given by the tail identity
    direct += sibuya_tail(0.5, 10**7)
    assert abs(sibuya_tail(0.5, 4) - direct) <= 1e-9


@pytest.mark.parametrize("a", [0.1, 0.3, 0.5, 0.7, 0.9])
def test_normalization(a):
    j, p = sibuya_pmf_table(a, 10**4)
    head = np.cumsum(p)
    for J in (1, 2, 10, 100, 10**4):
        assert abs(head[J - 1] + sibuya_tail(a, J) - 1) <= 1e-12


def test_table_matches_pointwise_pmf():
    j, p = sibuya_pmf_table(0.37, 2000)
    assert np.allclose(p, sibuya_pmf(0.37, j.astype(int)), rtol=1e-11, atol=0)
    assert not p.flags.writeable


@pytest.mark.parametrize("a", [0.2, 0.5, 0.8])
def test_heavy_tail_constant(a):
    j = 10**6
    ratio = sibuya_pmf(a, j) * j ** (1 + a) * math.gamma(1 - a) / a
    assert 0.99 <= ratio <= 1.01


@pytest.mark.parametrize("a", [0.05, 0.2, 0.35, 0.5, 0.65, 0.8, 0.95])
def test_fisher_formula_b_against_closed_form(a):
    value, err = fisher_info_series(a, 10**5, "B")
    assert err < 1e-6
    assert abs(value - _fisher_closed_form(a)) <= max(err, 1e-11)


@pytest.mark.parametrize("a", [0.2, 0.35, 0.5, 0.65, 0.8])
def test_formulas_a_and_b_agree(a):
    va, ea = fisher_info_series(a, 10**5, "A")
    vb, eb = fisher_info_series(a, 10**5, "B")
    assert abs(va - vb) <= ea + eb + 1e-10


def test_formula_a_at_large_cutoff():
    va, _ = fisher_info_series(0.5, 10**7, "A")
    assert abs(va - fisher_info_sibuya(0.5)) < 1e-3


def test_fisher_info_examples():
    assert fisher_info_sibuya(0.5) > 4.0
    assert fisher_info_sibuya(0.05) > 400
    assert fisher_info_sibuya(0.2) > fisher_info_sibuya(0.9)
    # alpha = 1/2 has I = 2 pi from the closed form
    assert fisher_info_sibuya(0.5) == pytest.approx(2 * math.pi, abs=1e-10)


def test_truncation_error_when_tolerance_too_small():
    with pytest.raises(TruncationError):
        fisher_info_sibuya(0.1, TruncationPolicy(j_max=10, tail_tol=1e-12))
    with pytest.raises(TruncationError):
        limit_score_Psi(0.1, 0.3, TruncationPolicy(j_max=10, tail_tol=1e-12))


def test_policy_validation():
    with pytest.raises(DomainError):
        TruncationPolicy(j_max=1)
    with pytest.raises(DomainError):
        TruncationPolicy(tail_tol=0.0)


def test_psi_signs_and_root():
    assert abs(limit_score_Psi(0.5, 0.5)) <= 1e-6
    assert limit_score_Psi(0.5, 0.3) > 0
    assert limit_score_Psi(0.5, 0.7) < 0


@pytest.mark.parametrize("a", [0.2, 0.35, 0.5, 0.65, 0.8])
def test_psi_zero_and_slope(a):
    assert abs(limit_score_Psi(a, a)) <= 1e-6
    h = 1e-4
    slope = (limit_score_Psi(a, a + h) - limit_score_Psi(a, a - h)) / (2 * h)
    info = fisher_info_sibuya(a)
    assert slope == pytest.approx(-info, rel=1e-3)
    assert limit_score_Psi_prime(a, a) == pytest.approx(-info, rel=1e-6)


def test_psi_error_bound_is_honest():
    # the bound at a small cutoff must enclose the value at a large one
    v_small, e_small = limit_score_series(0.4, 0.25, 2000)
    v_big, e_big = limit_score_series(0.4, 0.25, 10**6)
    assert abs(v_small - v_big) <= e_small + e_big
