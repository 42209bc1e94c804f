"""Closed-form two-sided bounds on binomial upper tails (due to Bahadur).

For n trials at success probability p with np <= m <= n and m != np, the
upper tail B_n(m) is sandwiched by

    A_n(m) / (1 + np(1-p)/(m-np)^2)  <=  B_n(m)  <=  A_n(m)

where A_n(m) = C(n,m) p^m (1-p)^(n-m) (m+1)(1-p) / ((m+1) - (n+1)p).

Note A_n(m) itself is not a probability: close to the mean it can exceed 1
(the bound is valid but useless there), so the bound values are carried as
plain floats with optional exact rationals rather than as ProbabilityValue.

The large-M failure-probability approximation derived from these bounds is
also provided, together with the bracket correction factors specialised to
the ensemble decision protocol.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Literal, Union

from .errors import DomainError
from .failure import Polarization, check_polarization
from .probabilities import BinomialTailQuery, ProbabilityValue, _log_pmf

_NEG_INF = float("-inf")


@dataclass(frozen=True)
class BahadurBounds:
    """Two-sided bounds on an upper binomial tail, when applicable.

    ``applicable`` is False when the query violates np <= m <= n, m != np or
    0 < p < 1; the bound fields are then None.  ``lower = upper / correction``
    with ``correction = 1 + np(1-p)/(m-np)^2 >= 1``.
    """

    query: BinomialTailQuery
    applicable: bool
    upper: float | None = None
    lower: float | None = None
    correction: float | None = None
    upper_exact: Fraction | None = None
    lower_exact: Fraction | None = None
    log_upper: float | None = None
    log_lower: float | None = None


def bahadur_bounds(query: BinomialTailQuery) -> BahadurBounds:
    """Evaluate the tail bounds for a query, flagging inapplicable ones."""
    n, m, p = query.n, query.m, query.p
    rational = isinstance(p, (int, Fraction))
    p_frac = Fraction(p) if rational else None
    pf = float(p)
    if not (0.0 < pf < 1.0) or m > n or m < 1:
        return BahadurBounds(query=query, applicable=False)
    # np <= m and m - np != 0; checked exactly on the rational path.
    if rational:
        mean = n * p_frac
        if not (mean < m):
            return BahadurBounds(query=query, applicable=False)
    else:
        if not (n * pf < m):
            return BahadurBounds(query=query, applicable=False)
    # (m+1) - (n+1)p = (m - np) + (1 - p) > 0 whenever applicable, but guard
    # anyway so a zero denominator reports as inapplicable instead of raising.
    if rational:
        denom = (m + 1) - (n + 1) * p_frac
        if denom == 0:
            return BahadurBounds(query=query, applicable=False)
        pmf = Fraction(math.comb(n, m)) * p_frac**m * (1 - p_frac) ** (n - m)
        upper_exact = pmf * (m + 1) * (1 - p_frac) / denom
        correction_exact = 1 + n * p_frac * (1 - p_frac) / (m - mean) ** 2
        lower_exact = upper_exact / correction_exact
        log_upper = _log_fraction_safe(upper_exact)
        return BahadurBounds(
            query=query, applicable=True,
            upper=float(upper_exact), lower=float(lower_exact),
            correction=float(correction_exact),
            upper_exact=upper_exact, lower_exact=lower_exact,
            log_upper=log_upper,
            log_lower=log_upper - math.log(float(correction_exact)),
        )
    denom = (m + 1) - (n + 1) * pf
    if denom == 0.0:
        return BahadurBounds(query=query, applicable=False)
    log_upper = _log_pmf(n, m, pf) + math.log((m + 1) * (1.0 - pf)) - math.log(denom)
    correction = 1.0 + n * pf * (1.0 - pf) / (m - n * pf) ** 2
    log_lower = log_upper - math.log(correction)
    return BahadurBounds(
        query=query, applicable=True,
        upper=math.exp(log_upper), lower=math.exp(log_lower),
        correction=correction, log_upper=log_upper, log_lower=log_lower,
    )


def _log_fraction_safe(value: Fraction) -> float:
    if value == 0:
        return _NEG_INF
    return math.log(value.numerator) - math.log(value.denominator)


CorrectionTerm = Literal["best_res", "first_term", "second_term"]


def correction_factor(eps: Polarization, M: int, R: Union[int, float, Fraction],
                      which: CorrectionTerm = "best_res") -> float:
    """Bracket factor 1 + (1 - eps^2)/d^2 controlling the bound tightness.

    The denominator d depends on which tail of the decision protocol the
    bound is applied to:

    * ``best_res``:    d = 1/sqrt(M) + sqrt(M) eps
    * ``first_term``:  d = ceil(R)/(2 sqrt(M)) + sqrt(M) eps
    * ``second_term``: d = 1/sqrt(M) - ceil(R)/(2 sqrt(M)) + sqrt(M) eps

    Tends to 1 as M grows at fixed eps > 0.
    """
    check_polarization(eps)
    if M < 1:
        raise DomainError(f"ensemble size M={M} must be positive")
    e = float(eps)
    root_m = math.sqrt(M)
    if which == "best_res":
        d = 1.0 / root_m + root_m * e
    elif which == "first_term":
        d = math.ceil(R) / (2.0 * root_m) + root_m * e
    elif which == "second_term":
        d = 1.0 / root_m - math.ceil(R) / (2.0 * root_m) + root_m * e
    else:
        raise DomainError(f"unknown correction term {which!r}")
    if d == 0.0:
        raise DomainError("correction factor denominator is zero")
    return 1.0 + (1.0 - e * e) / (d * d)


def pfail_asymptotic(eps: Polarization, M: int) -> ProbabilityValue:
    """Large-M approximation of the best-resolution failure probability.

    Stirling's formula for the central binomial coefficient applied to the
    closed-form tail bound at the failure threshold gives

        sqrt(2 / (pi M)) * (1 - eps^2)^((M+1)/2) / (2 eps),

    whose ratio to the exact failure probability tends to 1 as M grows along
    odd M at fixed eps in (0, 1).  Requires eps > 0; intended for M >~ 50.
    """
    check_polarization(eps)
    if M < 1:
        raise DomainError(f"ensemble size M={M} must be positive")
    e = float(eps)
    if e == 0.0:
        raise DomainError("asymptotic failure probability is undefined at eps = 0")
    if e == 1.0:
        return ProbabilityValue.zero()
    log_value = (0.5 * math.log(2.0 / (math.pi * M))
                 + 0.5 * (M + 1) * math.log1p(-e * e)
                 - math.log(2.0 * e))
    return ProbabilityValue.from_log(min(log_value, 0.0))
