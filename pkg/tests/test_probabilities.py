"""Tests for the binomial/beta kernels against brute-force and scipy oracles."""
from __future__ import annotations

import math
from fractions import Fraction

import hypothesis
import hypothesis.strategies as st
import pytest
import scipy.special
import scipy.stats

from ensemble_qcrit import (BinomialTailQuery, DomainError, ProbabilityValue,
                            binom_pmf, binom_tail, incomplete_beta)
from ensemble_qcrit.probabilities import combine, log_add

from conftest import tail_brute

rational_probs = st.fractions(min_value=0, max_value=1, max_denominator=64)


class TestBinomPmf:
    def test_single_bernoulli(self):
        assert binom_pmf(1, 1, Fraction(1, 4)).exact == Fraction(1, 4)

    def test_direct_expansion(self):
        # 3 * (1/16) * (3/4)
        assert binom_pmf(3, 2, Fraction(1, 4)).exact == Fraction(9, 64)

    def test_zero_probability(self):
        assert binom_pmf(3, 0, 0).exact == 1
        assert binom_pmf(3, 1, 0).exact == 0
        assert binom_pmf(3, 3, 1).exact == 1

    def test_out_of_range(self):
        with pytest.raises(DomainError):
            binom_pmf(3, 4, 0.5)
        with pytest.raises(DomainError):
            binom_pmf(3, -1, 0.5)
        with pytest.raises(DomainError):
            binom_pmf(3, 1, 1.5)

    def test_float_path_matches_exact(self):
        for n in (5, 40, 173):
            for k in range(0, n + 1, 7):
                exact = binom_pmf(n, k, Fraction(3, 10)).exact
                approx = binom_pmf(n, k, 0.3).value
                assert approx == pytest.approx(float(exact), rel=1e-12)

    def test_large_n_log_space(self):
        # n = 10^7 would overflow any direct factorial; scipy agrees in logs.
        pv = binom_pmf(10_000_000, 5_000_000, 0.3)
        expected = scipy.stats.binom.logpmf(5_000_000, 10_000_000, 0.3)
        assert pv.log_value == pytest.approx(expected, rel=1e-10)

    @hypothesis.given(st.integers(1, 60), st.data(), rational_probs)
    def test_pmf_sums_to_one(self, n, data, p):
        total = sum(binom_pmf(n, k, p).exact for k in range(n + 1))
        assert total == 1


class TestBinomTail:
    def test_two_term_sum(self):
        pv = binom_tail(3, 2, Fraction(1, 4))
        assert pv.exact == Fraction(10, 64)
        assert pv.value == 0.15625

    def test_full_support(self):
        assert binom_tail(5, 0, 0.3).value == 1.0

    def test_empty_sum(self):
        assert binom_tail(5, 6, 0.3).value == 0.0
        assert binom_tail(5, 6, Fraction(3, 10)).exact == 0

    def test_domain_error(self):
        with pytest.raises(DomainError):
            binom_tail(5, 7, 0.3)
        with pytest.raises(DomainError):
            binom_tail(5, 2, -0.1)

    @hypothesis.given(st.integers(1, 40), st.data(), rational_probs)
    def test_matches_brute_force(self, n, data, p):
        m = data.draw(st.integers(0, n + 1))
        assert binom_tail(n, m, p).exact == tail_brute(n, m, p)

    @hypothesis.given(st.integers(1, 40), rational_probs)
    def test_monotone_in_m(self, n, p):
        values = [binom_tail(n, m, p).exact for m in range(n + 2)]
        assert all(a >= b for a, b in zip(values, values[1:]))

    @hypothesis.given(st.integers(1, 50), st.data(),
                      st.fractions(min_value=0, max_value=1, max_denominator=32))
    def test_complementarity(self, n, data, p):
        m = data.draw(st.integers(1, n))
        total = binom_tail(n, m, p).exact + binom_tail(n, n - m + 1, 1 - p).exact
        assert total == 1

    @pytest.mark.parametrize("n", [10, 50, 200])
    def test_float_path_matches_exact_to_1e12(self, n):
        worst = 0.0
        for k in range(1, 20):
            p = Fraction(k, 20)
            for m in range(0, n + 2):
                exact = binom_tail(n, m, p).exact
                approx = binom_tail(n, m, float(p)).value
                if exact == 0:
                    assert approx == 0.0
                else:
                    worst = max(worst, abs(approx / float(exact) - 1.0))
        assert worst < 1e-12

    @staticmethod
    def _mpmath_log_tail(n: int, m: int, p: str) -> float:
        """40-digit naive summation of the tail series, summed from m upward."""
        import mpmath as mp

        with mp.workdps(40):
            pv = mp.mpf(p)
            log_first = (mp.loggamma(n + 1) - mp.loggamma(m + 1)
                         - mp.loggamma(n - m + 1)
                         + m * mp.log(pv) + (n - m) * mp.log1p(-pv))
            total = mp.mpf(1)
            rel = mp.mpf(1)
            for k in range(m, n):
                rel *= mp.mpf(n - k) / (k + 1) * pv / (1 - pv)
                total += rel
                if rel < mp.mpf("1e-45") * total:
                    break
            return float(log_first + mp.log(total))

    def test_deep_tail_log_value(self):
        # Far below double underflow; scipy's logsf itself underflows here.
        pv = binom_tail(1_000_000, 500_001, 0.067)
        expected = self._mpmath_log_tail(1_000_000, 500_001, "0.067")
        assert pv.log_value == pytest.approx(expected, rel=1e-12)
        assert pv.value == 0.0  # underflows as a double

    def test_bulk_tail_large_n(self):
        # Mode inside the summation range at n = 10^6: value is order one.
        # Accuracy here is floored by lgamma cancellation (~1e-9 in the log).
        pv = binom_tail(1_000_000, 499_000, 0.5)
        expected = self._mpmath_log_tail(1_000_000, 499_000, "0.5")
        assert pv.log_value == pytest.approx(expected, abs=1e-7)
        assert pv.value == pytest.approx(math.exp(expected), rel=1e-7)

    def test_query_validation(self):
        with pytest.raises(DomainError):
            BinomialTailQuery(0, 0, 0.5)
        with pytest.raises(DomainError):
            BinomialTailQuery(4, 6, 0.5)


class TestIncompleteBeta:
    def test_endpoints(self):
        assert incomplete_beta(0, 3, 5).exact == 0
        assert incomplete_beta(1, 3, 5).exact == 1

    def test_matches_tail(self):
        assert incomplete_beta(Fraction(1, 4), 2, 2).value == 0.15625

    def test_integer_arguments_required(self):
        with pytest.raises(DomainError):
            incomplete_beta(0.5, 0, 3)
        with pytest.raises(DomainError):
            incomplete_beta(0.5, 1.5, 3)  # type: ignore[arg-type]

    def test_tail_equivalence_exact_grid(self):
        for n in range(1, 61):
            for k in range(17):
                p = Fraction(k, 16)
                for m in range(1, n + 1):
                    assert (binom_tail(n, m, p).exact
                            == incomplete_beta(p, m, n - m + 1).exact)

    def test_symmetry_identity_floats(self):
        for x in range(1, 51):
            for k in range(1, 8):
                p = k / 8
                lhs = incomplete_beta(p, x + 1, x).value + incomplete_beta(p, x, x + 1).value
                rhs = 2 * incomplete_beta(p, x, x).value
                assert abs(lhs - rhs) <= 1e-12

    @hypothesis.given(st.integers(1, 40), rational_probs)
    def test_symmetry_identity_exact(self, x, p):
        lhs = incomplete_beta(p, x + 1, x).exact + incomplete_beta(p, x, x + 1).exact
        assert lhs == 2 * incomplete_beta(p, x, x).exact

    def test_against_scipy(self):
        for x in (1, 4, 17):
            for y in (1, 9, 30):
                for p in (0.03, 0.4, 0.97):
                    ours = incomplete_beta(p, x, y).value
                    assert ours == pytest.approx(scipy.special.betainc(x, y, p),
                                                 rel=1e-11, abs=1e-300)


class TestProbabilityValue:
    def test_exact_and_log_consistency(self):
        pv = ProbabilityValue.from_exact(Fraction(3, 7))
        assert float(pv) == pytest.approx(3 / 7)
        assert pv.log_value == pytest.approx(math.log(3 / 7))

    def test_rejects_out_of_range(self):
        with pytest.raises(DomainError):
            ProbabilityValue(1.5)
        with pytest.raises(DomainError):
            ProbabilityValue.from_exact(Fraction(-1, 2))

    def test_log_add(self):
        assert log_add(math.log(0.25), math.log(0.5)) == pytest.approx(math.log(0.75))
        assert log_add(float("-inf"), math.log(0.5)) == math.log(0.5)

    def test_combine_exact_and_float(self):
        a = ProbabilityValue.from_exact(Fraction(1, 4))
        b = ProbabilityValue.from_exact(Fraction(1, 8))
        out = combine([(1, a), (Fraction(1, 2), b)])
        assert out.exact == Fraction(5, 16)
        c = ProbabilityValue.from_log(math.log(0.25))
        out = combine([(1, c), (Fraction(1, 2), b)])
        assert out.exact is None
        assert out.value == pytest.approx(0.3125)
