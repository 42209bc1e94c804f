"""Classical probabilistic competitor models and their failure probabilities.

The quantum ensemble spends Q = M*q aggregate oracle queries (q per member),
so it is compared against classical probabilistic algorithms allowed the same
query budget.  Supported competitors:

* a generic exponential family F(Q) = 1/c^Q with c > 1,
* the exact Deutsch-Jozsa classical algorithm, which evaluates the oracle on
  Q distinct arguments and answers "constant" iff all outputs agree, and
* its large-domain approximation F(Q) = 1/2^Q.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

from .errors import DomainError
from .probabilities import ProbabilityValue

Real = Union[int, float, Fraction]


def cf_exponential(c: Real, Q: int) -> ProbabilityValue:
    """F(Q) = 1/c^Q, exact for rational c, log-space for large Q."""
    if c <= 1:
        raise DomainError(f"exponential base c={c} must be > 1")
    if Q < 1:
        raise DomainError(f"query count Q={Q} must be positive")
    if isinstance(c, (int, Fraction)):
        return ProbabilityValue.from_exact(Fraction(1) / Fraction(c) ** Q)
    return ProbabilityValue.from_log(-Q * math.log(c))


def cf_dj_approx(M: int) -> ProbabilityValue:
    """Large-domain Deutsch-Jozsa classical failure probability 1/2^M."""
    if M < 1:
        raise DomainError(f"query count M={M} must be positive")
    return ProbabilityValue.from_exact(Fraction(1, 2**M))


def cf_dj_exact(n: int, M: int, p_bal: Union[Fraction, int] = Fraction(1, 2)
                ) -> ProbabilityValue:
    """Exact failure probability of the classical Deutsch-Jozsa algorithm.

    On an n-bit domain of N = 2^n arguments the algorithm queries M distinct
    arguments; only a balanced function that returns identical outputs on all
    M of them is misidentified.  The probability of that event is
    2 C(N-M, N/2-M) / C(N, N/2), evaluated here as the falling-factorial
    product prod_{i<M} (N/2 - i)/(N - i), and weighted by the prior
    probability p_bal of drawing a balanced function.  Zero for M > N/2.
    """
    if n < 1:
        raise DomainError(f"argument width n={n} must be positive")
    if M < 1:
        raise DomainError(f"query count M={M} must be positive")
    p_bal = Fraction(p_bal)
    if not (0 <= p_bal <= 1):
        raise DomainError(f"balanced prior p_bal={p_bal} outside [0, 1]")
    N = 1 << n
    if M > N // 2:
        return ProbabilityValue.zero()
    ratio = Fraction(1)
    for i in range(M):
        ratio *= Fraction(N // 2 - i, N - i)
    return ProbabilityValue.from_exact(p_bal * 2 * ratio)


def cf_dj_stirling(n: int, M: int, p_bal: Union[Fraction, int] = Fraction(1, 2)
                   ) -> float:
    """Stirling-formula approximation of :func:`cf_dj_exact` (diagnostic only).

    Expands the factorial ratio (N-M)! (N/2)! / (N! (N/2-M)!) with
    n! ~ sqrt(2 pi n) n^n e^-n, giving

        sqrt((N-M)(N/2) / (N (N/2-M)))
        * ((N/2-M)/(N-M))^M * ((N-M)/N)^N * ((N/2)/(N/2-M))^(N/2)

    which tends to 1/2^M when M << N/2.  Requires M < N/2.
    """
    if n < 1 or M < 1:
        raise DomainError("n and M must be positive")
    N = 1 << n
    if M >= N // 2:
        raise DomainError(f"Stirling form requires M < N/2 = {N // 2}")
    half = N / 2.0
    log_ratio = (0.5 * (math.log(N - M) + math.log(half) - math.log(N) - math.log(half - M))
                 + M * (math.log(half - M) - math.log(N - M))
                 + N * math.log1p(-M / N)
                 - half * math.log1p(-M / half))
    return float(p_bal) * 2.0 * math.exp(log_ratio)


@dataclass(frozen=True)
class ExponentialModel:
    """Classical competitor with F(Q) = 1/c^Q."""

    c: Real

    def __post_init__(self) -> None:
        if self.c <= 1:
            raise DomainError(f"exponential base c={self.c} must be > 1")

    def failure(self, Q: int) -> ProbabilityValue:
        return cf_exponential(self.c, Q)

    @property
    def asymptotic_base(self) -> float:
        return float(self.c)


@dataclass(frozen=True)
class DeutschJozsaApprox:
    """Large-domain Deutsch-Jozsa competitor, F(Q) = 1/2^Q."""

    def failure(self, Q: int) -> ProbabilityValue:
        return cf_dj_approx(Q)

    @property
    def asymptotic_base(self) -> float:
        return 2.0


@dataclass(frozen=True)
class DeutschJozsaExact:
    """Exact Deutsch-Jozsa competitor on an n-bit domain."""

    n: int
    p_bal: Fraction = field(default=Fraction(1, 2))

    def failure(self, Q: int) -> ProbabilityValue:
        return cf_dj_exact(self.n, Q, self.p_bal)

    @property
    def asymptotic_base(self) -> float:
        return 2.0


ClassicalModel = Union[ExponentialModel, DeutschJozsaApprox, DeutschJozsaExact]
