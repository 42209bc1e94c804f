"""Tests for the closed-form tail bounds and the large-M failure approximation."""
from __future__ import annotations

import math
from fractions import Fraction

import pytest

from ensemble_qcrit import (BinomialTailQuery, DomainError, bahadur_bounds,
                            binom_tail, correction_factor, pfail_asymptotic,
                            pfail_best)

from conftest import tail_brute


class TestBounds:
    def test_worked_example(self):
        bounds = bahadur_bounds(BinomialTailQuery(3, 2, Fraction(1, 4)))
        assert bounds.applicable
        assert bounds.upper == 0.158203125
        assert bounds.correction == 1.36
        assert bounds.lower == pytest.approx(0.158203125 / 1.36)
        true_tail = tail_brute(3, 2, Fraction(1, 4))
        assert bounds.lower_exact <= true_tail <= bounds.upper_exact

    def test_single_term_tail_is_tight(self):
        bounds = bahadur_bounds(BinomialTailQuery(10, 10, Fraction(1, 2)))
        assert bounds.upper_exact == Fraction(1, 2) ** 10
        assert binom_tail(10, 10, Fraction(1, 2)).exact == Fraction(1, 2) ** 10

    def test_inapplicable_below_mean(self):
        bounds = bahadur_bounds(BinomialTailQuery(4, 1, Fraction(1, 2)))
        assert not bounds.applicable
        assert bounds.upper is None

    def test_inapplicable_at_mean_and_degenerate_p(self):
        assert not bahadur_bounds(BinomialTailQuery(10, 5, Fraction(1, 2))).applicable
        assert not bahadur_bounds(BinomialTailQuery(10, 7, 0)).applicable
        assert not bahadur_bounds(BinomialTailQuery(10, 7, 1)).applicable
        assert not bahadur_bounds(BinomialTailQuery(10, 0, Fraction(1, 4))).applicable

    def test_sandwich_exact_grid(self):
        violations = 0
        checked = 0
        for n in (5, 10, 20, 50, 100, 200):
            for k in range(1, 10):
                p = Fraction(k, 20)
                for m in range(1, n + 1):
                    bounds = bahadur_bounds(BinomialTailQuery(n, m, p))
                    if not bounds.applicable:
                        continue
                    tail = binom_tail(n, m, p).exact
                    checked += 1
                    if not (bounds.lower_exact <= tail <= bounds.upper_exact):
                        violations += 1
        assert checked > 1000
        assert violations == 0

    def test_float_path_matches_exact(self):
        for n in (8, 60):
            for m in range(n // 2 + 1, n + 1):
                exact = bahadur_bounds(BinomialTailQuery(n, m, Fraction(3, 10)))
                approx = bahadur_bounds(BinomialTailQuery(n, m, 0.3))
                assert exact.applicable == approx.applicable
                if exact.applicable:
                    assert approx.upper == pytest.approx(exact.upper, rel=1e-11)
                    assert approx.lower == pytest.approx(exact.lower, rel=1e-11)
                    assert approx.correction == pytest.approx(exact.correction, rel=1e-12)

    def test_correction_is_at_least_one(self):
        for n in (5, 40):
            for m in range(1, n + 1):
                bounds = bahadur_bounds(BinomialTailQuery(n, m, 0.2))
                if bounds.applicable:
                    assert bounds.correction >= 1.0
                    assert bounds.lower <= bounds.upper


class TestCorrectionFactor:
    def test_pure_state_is_one(self):
        for M in (1, 10, 1000):
            assert correction_factor(1, M, 2, "best_res") == 1.0

    def test_best_resolution_example(self):
        expected = 1 + 0.75 / (0.1 + 5.0) ** 2
        assert correction_factor(0.5, 100, 2, "best_res") == pytest.approx(expected)

    def test_tends_to_one(self):
        values = [correction_factor(0.5, M, 2, "best_res")
                  for M in (10, 100, 1000, 10_000)]
        assert all(a > b for a, b in zip(values, values[1:]))
        assert values[-1] == pytest.approx(1.0, abs=1e-3)
        assert all(v >= 1.0 for v in values)

    def test_general_resolution_terms(self):
        # Denominators: ceil(R)/(2 rt) + rt e and 1/rt - ceil(R)/(2 rt) + rt e.
        eps, M, R = 0.5, 64, 5
        rt = math.sqrt(M)
        first = 1 + (1 - eps**2) / (5 / (2 * rt) + rt * eps) ** 2
        second = 1 + (1 - eps**2) / (1 / rt - 5 / (2 * rt) + rt * eps) ** 2
        assert correction_factor(eps, M, R, "first_term") == pytest.approx(first)
        assert correction_factor(eps, M, R, "second_term") == pytest.approx(second)

    def test_matches_bound_bracket_for_odd_best_resolution(self):
        # For odd M with m = (M+1)/2 and p = (1-eps)/2 the protocol-level
        # factor is exactly the generic bracket 1 + np(1-p)/(m-np)^2.
        for M in (5, 21, 101):
            for eps in (0.25, 0.6):
                p = (1 - eps) / 2
                m = (M + 1) // 2
                generic = 1 + M * p * (1 - p) / (m - M * p) ** 2
                assert correction_factor(eps, M, 2, "best_res") == pytest.approx(generic)

    def test_zero_denominator(self):
        # M eps = ceil(R)/2 - 1 makes 1/rt - ceil(R)/(2 rt) + rt eps vanish.
        with pytest.raises(DomainError):
            correction_factor(0.5, 4, 6, "second_term")


class TestPfailAsymptotic:
    def test_pure_state_is_zero(self):
        assert pfail_asymptotic(1, 101).value == 0.0

    def test_zero_polarization_rejected(self):
        with pytest.raises(DomainError):
            pfail_asymptotic(0, 101)

    def test_moderate_m_within_ten_percent(self):
        exact = pfail_best(Fraction(1, 2), 101).exact
        approx = pfail_asymptotic(0.5, 101)
        rel = abs(math.exp(approx.log_value - math.log(exact.numerator)
                           + math.log(exact.denominator)) - 1.0)
        assert rel < 0.10

    def test_large_m_within_three_percent(self):
        exact_log = pfail_best(0.5, 1001).log_value
        approx_log = pfail_asymptotic(0.5, 1001).log_value
        assert abs(math.expm1(approx_log - exact_log)) < 0.03

    @pytest.mark.parametrize("eps", [0.3, 0.5, 0.8])
    def test_relative_error_decreases(self, eps):
        errors = []
        for M in (41, 401, 4001):
            exact_log = pfail_best(eps, M).log_value
            approx_log = pfail_asymptotic(eps, M).log_value
            errors.append(abs(math.expm1(approx_log - exact_log)))
        assert errors[0] > errors[1] > errors[2]
