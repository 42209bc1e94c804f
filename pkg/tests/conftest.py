"""Shared brute-force oracles, kept deliberately naive and independent of the package."""
from __future__ import annotations

import itertools
import math
from fractions import Fraction

import pytest


def tail_brute(n: int, m: int, p: Fraction) -> Fraction:
    """Upper binomial tail by direct term-by-term summation."""
    if m <= 0:
        return Fraction(1)
    if m > n:
        return Fraction(0)
    p = Fraction(p)
    return sum(Fraction(math.comb(n, k)) * p**k * (1 - p) ** (n - k)
               for k in range(m, n + 1))


def pfail_brute(eps: Fraction, M: int, R: Fraction) -> tuple[Fraction, Fraction]:
    """(class-0, class-1) failure probabilities by enumerating all 2^M outcome strings.

    Implements the resolution-limited protocol from its raw inequalities on
    z_bar, resolving indistinguishable outcomes with weight 1/2.
    """
    eps = Fraction(eps)
    R = Fraction(R)
    threshold = R / (2 * M)
    p_wrong = (1 - eps) / 2

    def one_class(prob_minus: Fraction, failing_sign: int) -> Fraction:
        total = Fraction(0)
        for bits in itertools.product((0, 1), repeat=M):
            minus = sum(bits)
            prob = prob_minus**minus * (1 - prob_minus) ** (M - minus)
            z_bar = Fraction(M - 2 * minus, M)
            if failing_sign * z_bar >= threshold:
                weight = Fraction(0)  # unequivocally the correct verdict
            elif -failing_sign * z_bar >= threshold:
                weight = Fraction(1)  # unequivocally the wrong verdict
            else:
                weight = Fraction(1, 2)
            total += prob * weight
        return total

    # Class 0: members read -1 with probability p_wrong and the correct verdict
    # needs z_bar >= threshold.  Class 1 swaps both roles.
    fail0 = one_class(p_wrong, +1)
    fail1 = one_class(1 - p_wrong, -1)
    return fail0, fail1


def dj_classical_brute(n: int, M: int) -> Fraction:
    """Failure rate of the classical algorithm by full enumeration.

    Every balanced function crossed with every M-subset of arguments, weighted
    by the 1/2 prior on drawing a balanced (vs constant) function.
    """
    N = 1 << n
    failures = 0
    total = 0
    for ones in itertools.combinations(range(N), N // 2):
        support = set(ones)
        for subset in itertools.combinations(range(N), M):
            outputs = {x in support for x in subset}
            failures += len(outputs) == 1
            total += 1
    return Fraction(1, 2) * Fraction(failures, total)


@pytest.fixture(scope="session")
def eps_grid() -> list[Fraction]:
    return [Fraction(k, 8) for k in range(9)]
