"""Tests for the classical competitor failure probabilities."""
from __future__ import annotations

import math
from fractions import Fraction

import hypothesis
import hypothesis.strategies as st
import pytest

from ensemble_qcrit import (DeutschJozsaApprox, DeutschJozsaExact, DomainError,
                            ExponentialModel, cf_dj_approx, cf_dj_exact,
                            cf_dj_stirling, cf_exponential)

from conftest import dj_classical_brute


class TestExponential:
    def test_powers_of_two(self):
        assert cf_exponential(2, 3).exact == Fraction(1, 8)
        assert cf_exponential(2, 1).exact == Fraction(1, 2)

    def test_log_space_for_real_base(self):
        value = cf_exponential(math.e, 10)
        assert value.value == pytest.approx(math.exp(-10))
        assert value.exact is None
        assert value.log_value == pytest.approx(-10.0)

    def test_huge_exponent(self):
        value = cf_exponential(2, 1_000_000)
        assert value.log_value == pytest.approx(-1_000_000 * math.log(2))
        assert value.value == 0.0

    def test_domain(self):
        with pytest.raises(DomainError):
            cf_exponential(1, 3)
        with pytest.raises(DomainError):
            cf_exponential(2, 0)


class TestDeutschJozsaExact:
    def test_two_bit_pair(self):
        assert cf_dj_exact(2, 2).exact == Fraction(1, 6)

    def test_decides_with_certainty_past_half(self):
        assert cf_dj_exact(2, 3).exact == 0
        assert cf_dj_exact(3, 5).exact == 0

    def test_single_query_never_distinguishes(self):
        assert cf_dj_exact(1, 1).exact == Fraction(1, 2)

    def test_matches_comb_formula(self):
        for n in (1, 2, 3, 4, 6):
            N = 1 << n
            for M in range(1, N // 2 + 1):
                expected = (Fraction(1, 2) * 2
                            * Fraction(math.comb(N - M, N // 2 - M), math.comb(N, N // 2)))
                assert cf_dj_exact(n, M).exact == expected

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_matches_brute_force(self, n):
        N = 1 << n
        for M in range(1, N // 2 + 2):
            assert cf_dj_exact(n, M).exact == dj_classical_brute(n, M)

    def test_non_increasing_in_m(self):
        for n in (2, 4, 6):
            N = 1 << n
            values = [cf_dj_exact(n, M).exact for M in range(1, N // 2 + 2)]
            assert all(a >= b for a, b in zip(values, values[1:]))
            assert values[-1] == 0

    def test_prior_weighting(self):
        assert cf_dj_exact(2, 2, p_bal=1).exact == Fraction(1, 3)
        assert cf_dj_exact(2, 2, p_bal=0).exact == 0

    def test_bounded_by_half(self):
        for n in (1, 3, 5):
            for M in range(1, (1 << n) // 2 + 1):
                assert 0 <= cf_dj_exact(n, M).exact <= Fraction(1, 2)


class TestDeutschJozsaApprox:
    def test_examples(self):
        assert cf_dj_approx(2).exact == Fraction(1, 4)
        assert cf_dj_approx(20).value == pytest.approx(2.0**-20)

    def test_large_domain_convergence(self):
        # Exact model approaches 1/2^M as the domain outgrows the query count.
        approx = cf_dj_approx(10).exact
        exact = cf_dj_exact(20, 10).exact
        assert abs(exact - approx) / approx < 1e-4

    def test_convergence_is_monotone_in_n(self):
        approx = cf_dj_approx(10).exact
        deviations = [abs(cf_dj_exact(n, 10).exact - approx) / approx
                      for n in (8, 12, 16, 20)]
        assert all(a > b for a, b in zip(deviations, deviations[1:]))

    @hypothesis.given(st.integers(1, 60))
    def test_equals_exponential_base_two(self, M):
        assert cf_dj_approx(M).exact == cf_exponential(2, M).exact


class TestStirlingDiagnostic:
    def test_close_to_exact_for_large_domain(self):
        exact = float(cf_dj_exact(20, 10).exact)
        approx = cf_dj_stirling(20, 10)
        assert approx == pytest.approx(exact, rel=1e-4)

    def test_tends_to_power_of_two(self):
        assert cf_dj_stirling(20, 10) == pytest.approx(2.0**-10, rel=1e-4)

    def test_accuracy_improves_with_domain(self):
        errors = []
        for n in (8, 12, 16):
            exact = float(cf_dj_exact(n, 6).exact)
            errors.append(abs(cf_dj_stirling(n, 6) / exact - 1.0))
        assert errors[0] > errors[1] > errors[2]

    def test_domain(self):
        with pytest.raises(DomainError):
            cf_dj_stirling(2, 2)  # M = N/2 has a singular Stirling factor


class TestModels:
    def test_failure_dispatch(self):
        assert ExponentialModel(c=2).failure(3).exact == Fraction(1, 8)
        assert DeutschJozsaApprox().failure(4).exact == Fraction(1, 16)
        assert DeutschJozsaExact(n=2).failure(2).exact == Fraction(1, 6)

    def test_asymptotic_base(self):
        assert ExponentialModel(c=3.5).asymptotic_base == 3.5
        assert DeutschJozsaApprox().asymptotic_base == 2.0
        assert DeutschJozsaExact(n=4).asymptotic_base == 2.0

    def test_invalid_base(self):
        with pytest.raises(DomainError):
            ExponentialModel(c=1.0)
