"""Binomial probability masses, cumulative upper tails and the incomplete beta function.

Every operation runs on two parallel numeric paths:

* an exact path using :class:`fractions.Fraction`, active whenever the success
  probability is given as a rational number (``int`` or ``Fraction``), and
* a float path that works in natural-log space so that tails remain meaningful
  far below the double-precision underflow threshold (trial counts up to ~1e7).

The float tail is accumulated outward from the largest binomial term with
compensated (Kahan) summation, which keeps the relative error of long tails
near machine precision.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Union

from .errors import DomainError

Rational = Union[int, Fraction]
Prob = Union[int, float, Fraction]

_NEG_INF = float("-inf")


def _log_fraction(value: Fraction) -> float:
    """Natural log of a nonnegative rational, exact -inf at zero.

    Works for fractions whose magnitude is far outside double range because the
    logs of numerator and denominator are taken separately.
    """
    if value < 0:
        raise DomainError(f"log of negative value {value}")
    if value == 0:
        return _NEG_INF
    return math.log(value.numerator) - math.log(value.denominator)


def _fraction_to_float(value: Fraction) -> float:
    # Fraction.__float__ is correctly rounded and underflows to 0.0 rather
    # than raising, which is exactly what we want for tiny tails.
    return float(value)


@dataclass(frozen=True)
class ProbabilityValue:
    """A probability carried in up to three representations.

    ``value`` is always present; ``exact`` is present when the inputs were
    rational; ``log_value`` is the natural log (``-inf`` for an exact zero) and
    is always populated so downstream code can compare probabilities that
    underflow the double range.
    """

    value: float
    exact: Fraction | None = None
    log_value: float = _NEG_INF

    def __post_init__(self) -> None:
        if not (-1e-9 <= self.value <= 1.0 + 1e-9):
            raise DomainError(f"probability value {self.value} outside [0, 1]")
        if self.exact is not None and not (0 <= self.exact <= 1):
            raise DomainError(f"exact probability {self.exact} outside [0, 1]")

    def __float__(self) -> float:
        return self.value

    @property
    def log(self) -> float:
        return self.log_value

    @classmethod
    def from_exact(cls, exact: Fraction) -> "ProbabilityValue":
        exact = Fraction(exact)
        return cls(value=_fraction_to_float(exact), exact=exact,
                   log_value=_log_fraction(exact))

    @classmethod
    def from_log(cls, log_value: float) -> "ProbabilityValue":
        if log_value > 1e-9:
            raise DomainError(f"log-probability {log_value} is positive")
        return cls(value=math.exp(min(log_value, 0.0)), exact=None,
                   log_value=log_value)

    @classmethod
    def zero(cls) -> "ProbabilityValue":
        return cls(value=0.0, exact=Fraction(0), log_value=_NEG_INF)

    @classmethod
    def one(cls) -> "ProbabilityValue":
        return cls(value=1.0, exact=Fraction(1), log_value=0.0)


@dataclass(frozen=True)
class BinomialTailQuery:
    """Parameters of an upper binomial tail: sum over k >= m of C(n,k) p^k (1-p)^(n-k).

    ``m == n + 1`` is allowed and denotes the empty sum.
    """

    n: int
    m: int
    p: Prob

    def __post_init__(self) -> None:
        if self.n < 1:
            raise DomainError(f"trial count n={self.n} must be positive")
        if not (0 <= self.m <= self.n + 1):
            raise DomainError(f"tail start m={self.m} outside [0, {self.n + 1}]")
        _check_prob(self.p)


def _check_prob(p: Prob) -> None:
    if isinstance(p, (int, Fraction)):
        if not (0 <= p <= 1):
            raise DomainError(f"probability p={p} outside [0, 1]")
    else:
        if not (0.0 <= p <= 1.0):
            raise DomainError(f"probability p={p} outside [0, 1]")


def _log_pmf(n: int, k: int, p: float) -> float:
    """log C(n,k) p^k (1-p)^(n-k) for 0 < p < 1 via log-gamma."""
    out = math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)
    if k:
        out += k * math.log(p)
    if n - k:
        out += (n - k) * math.log1p(-p)
    return out


def _pmf_exact(n: int, k: int, p: Fraction) -> Fraction:
    if p == 0:
        return Fraction(1) if k == 0 else Fraction(0)
    if p == 1:
        return Fraction(1) if k == n else Fraction(0)
    return Fraction(math.comb(n, k)) * p**k * (1 - p) ** (n - k)


def _tail_exact(n: int, m: int, p: Fraction) -> Fraction:
    """Exact upper tail via integer accumulation over a common denominator."""
    if m <= 0:
        return Fraction(1)
    if m > n:
        return Fraction(0)
    if p == 0:
        return Fraction(0)
    if p == 1:
        return Fraction(1)
    a, d = p.numerator, p.denominator
    b = d - a
    # term_k = C(n,k) a^k b^(n-k); the ratio recurrence below stays integral.
    term = math.comb(n, m) * a**m * b ** (n - m)
    total = term
    for k in range(m, n):
        term = term * (n - k) * a // ((k + 1) * b)
        total += term
    return Fraction(total, d**n)


def _tail_log(n: int, m: int, p: float) -> float:
    """Natural log of the upper tail, summed outward from the largest term."""
    if m <= 0:
        return 0.0
    if m > n:
        return _NEG_INF
    if p <= 0.0:
        return _NEG_INF
    if p >= 1.0:
        return 0.0
    k0 = min(max(math.floor((n + 1) * p), m), n)
    log_peak = _log_pmf(n, k0, p)

    total = 1.0
    comp = 0.0

    def add(x: float) -> None:
        nonlocal total, comp
        y = x - comp
        t = total + y
        comp = (t - total) - y
        total = t

    odds = p / (1.0 - p)
    # Upward from the peak: term ratios are strictly decreasing in k, so once
    # the geometric remainder bound drops below the target we may stop.
    rel = 1.0
    for k in range(k0, n):
        r = (n - k) / (k + 1) * odds
        rel *= r
        add(rel)
        if r < 1.0 and rel * r / (1.0 - r) < 1e-17 * total:
            break
    # Downward from the peak toward m (only entered when m < k0).
    rel = 1.0
    for k in range(k0, m, -1):
        r = k / (n - k + 1) / odds
        rel *= r
        add(rel)
        if r < 1.0 and rel * r / (1.0 - r) < 1e-17 * total:
            break
    return log_peak + math.log(total)


def binom_pmf(n: int, k: int, p: Prob) -> ProbabilityValue:
    """Probability of exactly ``k`` successes in ``n`` Bernoulli(p) trials."""
    if n < 1:
        raise DomainError(f"trial count n={n} must be positive")
    if not (0 <= k <= n):
        raise DomainError(f"success count k={k} outside [0, {n}]")
    _check_prob(p)
    if isinstance(p, (int, Fraction)):
        return ProbabilityValue.from_exact(_pmf_exact(n, k, Fraction(p)))
    if p == 0.0:
        return ProbabilityValue.one() if k == 0 else ProbabilityValue.zero()
    if p == 1.0:
        return ProbabilityValue.one() if k == n else ProbabilityValue.zero()
    return ProbabilityValue.from_log(_log_pmf(n, k, p))


def binom_tail(n: int, m: int, p: Prob) -> ProbabilityValue:
    """Upper binomial tail: sum over k in [m, n] of C(n,k) p^k (1-p)^(n-k).

    ``m = 0`` gives 1 (full support) and ``m = n + 1`` gives 0 (empty sum).
    """
    query = BinomialTailQuery(n=n, m=m, p=p)
    if isinstance(query.p, (int, Fraction)):
        return ProbabilityValue.from_exact(_tail_exact(n, m, Fraction(query.p)))
    return ProbabilityValue.from_log(_tail_log(n, m, query.p))


def binom_tail_query(query: BinomialTailQuery) -> ProbabilityValue:
    return binom_tail(query.n, query.m, query.p)


def incomplete_beta(p: Prob, x: int, y: int) -> ProbabilityValue:
    """Regularized incomplete beta function I_p(x, y) for integer x, y >= 1.

    For integer arguments it equals the binomial upper tail with
    n = x + y - 1 trials starting at m = x, which is how it is evaluated here.
    """
    if not isinstance(x, int) or not isinstance(y, int) or x < 1 or y < 1:
        raise DomainError(f"incomplete beta needs integer arguments >= 1, got x={x}, y={y}")
    _check_prob(p)
    return binom_tail(x + y - 1, x, p)


def log_add(a: float, b: float) -> float:
    """log(exp(a) + exp(b)) without leaving log space."""
    if a == _NEG_INF:
        return b
    if b == _NEG_INF:
        return a
    hi, lo = (a, b) if a >= b else (b, a)
    return hi + math.log1p(math.exp(lo - hi))


def combine(terms: Iterable[tuple[Rational, ProbabilityValue]]) -> ProbabilityValue:
    """Nonnegative rational-weighted sum of probability values.

    The exact representation survives only if every term carries one; the log
    representation is always propagated.
    """
    terms = list(terms)
    exact: Fraction | None = Fraction(0)
    log_total = _NEG_INF
    for weight, pv in terms:
        w = Fraction(weight)
        if w < 0:
            raise DomainError("combine weights must be nonnegative")
        if w == 0:
            continue
        if exact is not None and pv.exact is not None:
            exact = exact + w * pv.exact
        else:
            exact = None
        log_total = log_add(log_total, _log_fraction(w) + pv.log_value)
    if exact is not None:
        return ProbabilityValue.from_exact(exact)
    return ProbabilityValue.from_log(min(log_total, 0.0))
