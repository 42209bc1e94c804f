"""Ensemble measurement model: decision protocol and quantum failure probabilities.

An ensemble of M identical processors is prepared in a pseudo-pure state with
polarization eps.  Each member's target qubit is measured in the computational
basis (outcomes scaled to +/-1) and the input class is decided from the excess
count ``delta_m = m_plus - m_minus``, subject to a measurement resolution R:
only differences ``|delta_m| >= R/2`` are distinguishable from noise; anything
closer forces a fair guess.  R = 2 is the best-resolution case.

On a class-0 input each member independently reads -1 (the wrong value) with
probability p = (1 - eps)/2, so failure probabilities are cumulative binomial
tails in p.  All functions accept eps as a float or as an exact rational; a
rational eps activates the exact arithmetic path throughout.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Union

from .errors import DomainError, ResolutionTooCoarseError
from .probabilities import ProbabilityValue, binom_pmf, binom_tail, combine

Polarization = Union[int, float, Fraction]
Resolution = Union[int, float, Fraction]

# A failure probability is an ordinary probability constrained to [0, 1/2].
FailureProbability = ProbabilityValue


class InputClass(Enum):
    CLASS0 = 0
    CLASS1 = 1


class Verdict(Enum):
    CLASS0 = 0
    CLASS1 = 1
    GUESS = 2

    def matches(self, input_class: InputClass) -> bool:
        if self is Verdict.GUESS:
            raise ValueError("a guess verdict must be resolved by a coin before comparison")
        return self.value == input_class.value


def check_polarization(eps: Polarization) -> None:
    if not (0 <= eps <= 1):
        raise DomainError(f"polarization eps={eps} outside [0, 1]")


def wrong_outcome_prob(eps: Polarization) -> Union[float, Fraction]:
    """Per-member probability of the wrong +/-1 outcome: p = (1 - eps)/2.

    Exactness of eps is preserved: a rational eps yields a Fraction.
    """
    check_polarization(eps)
    if isinstance(eps, (int, Fraction)):
        return (1 - Fraction(eps)) / 2
    return (1.0 - eps) / 2.0


def individual_outcome_probs(eps: Polarization, input_class: InputClass
                             ) -> tuple[ProbabilityValue, ProbabilityValue]:
    """(Pr(z=+1), Pr(z=-1)) for a single ensemble member."""
    p_wrong = wrong_outcome_prob(eps)
    if isinstance(p_wrong, Fraction):
        right = ProbabilityValue.from_exact(1 - p_wrong)
        wrong = ProbabilityValue.from_exact(p_wrong)
    else:
        right = ProbabilityValue(1.0 - p_wrong, log_value=math.log1p(-p_wrong) if p_wrong < 1 else float("-inf"))
        wrong = ProbabilityValue(p_wrong, log_value=math.log(p_wrong) if p_wrong > 0 else float("-inf"))
    if input_class is InputClass.CLASS0:
        return right, wrong
    return wrong, right


def target_expectation(eps: Polarization, input_class: InputClass) -> Polarization:
    """Expectation of the +/-1 target outcome: +eps for class 0, -eps for class 1."""
    check_polarization(eps)
    return eps if input_class is InputClass.CLASS0 else -eps


def m_min(M: int, R: Resolution) -> int:
    """Minimum count of wrong outcomes that forces an unequivocal wrong verdict.

    Equals ceil((M + ceil(R/2)) / 2).  Rejects resolutions so coarse that even
    a unanimous ensemble could not register (ceil(R/2) > M + 1).
    """
    if M < 1:
        raise DomainError(f"ensemble size M={M} must be positive")
    if R < 2:
        raise DomainError(f"resolution R={R} must be >= 2")
    half_r = math.ceil(Fraction(R) / 2) if isinstance(R, (int, Fraction)) else math.ceil(R / 2)
    if half_r > M + 1:
        raise ResolutionTooCoarseError(
            f"ceil(R/2)={half_r} exceeds M+1={M + 1}: no outcome is distinguishable")
    return (M + half_r + 1) // 2


@dataclass(frozen=True)
class EnsembleSpec:
    """Ensemble size M and measurement resolution R (in units of delta_m)."""

    M: int
    R: Resolution = 2

    def __post_init__(self) -> None:
        m_min(self.M, self.R)  # validates M, R and their compatibility

    @property
    def m_min(self) -> int:
        return m_min(self.M, self.R)


@dataclass(frozen=True)
class EnsembleOutcome:
    """Counts of +1 and -1 outcomes over one ensemble measurement."""

    m_plus: int
    m_minus: int

    def __post_init__(self) -> None:
        if self.m_plus < 0 or self.m_minus < 0:
            raise DomainError("outcome counts must be nonnegative")

    @property
    def M(self) -> int:
        return self.m_plus + self.m_minus

    @property
    def delta_m(self) -> int:
        return self.m_plus - self.m_minus

    @property
    def z_bar(self) -> Fraction:
        return Fraction(self.delta_m, self.M)


def decide(outcome: EnsembleOutcome, spec: EnsembleSpec) -> Verdict:
    """Resolution-limited majority vote.

    z_bar >= R/2M reads class 0, z_bar <= -R/2M reads class 1, anything in
    between is indistinguishable from noise and must be guessed.  The guess is
    left to the caller so that analytic and sampled paths stay consistent.
    """
    if outcome.M != spec.M:
        raise DomainError(f"outcome has M={outcome.M} but spec has M={spec.M}")
    # z_bar >= R/(2M)  <=>  2*delta_m >= R; exact for int delta_m and any real R.
    doubled = 2 * outcome.delta_m
    if doubled >= spec.R:
        return Verdict.CLASS0
    if doubled <= -spec.R:
        return Verdict.CLASS1
    return Verdict.GUESS


def pfail_best(eps: Polarization, M: int) -> FailureProbability:
    """Failure probability of the best-resolution (R = 2) protocol.

    Odd M: the upper tail from (M+1)/2 wrong outcomes.  Even M: the tail from
    M/2 + 1 plus half the probability of an exact tie.
    """
    if M < 1:
        raise DomainError(f"ensemble size M={M} must be positive")
    p = wrong_outcome_prob(eps)
    if M % 2 == 1:
        return binom_tail(M, (M + 1) // 2, p)
    tail = binom_tail(M, M // 2 + 1, p)
    tie = binom_pmf(M, M // 2, p)
    return combine([(1, tail), (Fraction(1, 2), tie)])


def pfail_general(eps: Polarization, spec: EnsembleSpec) -> FailureProbability:
    """Failure probability of the general-resolution protocol.

    Equals (B(m_min) + B(M - m_min + 1)) / 2 where B is the upper binomial
    tail in the wrong-outcome probability p = (1 - eps)/2.  With R = 2 this
    reproduces :func:`pfail_best` exactly for both parities.
    """
    p = wrong_outcome_prob(eps)
    mm = spec.m_min
    unequivocal = binom_tail(spec.M, mm, p)
    widened = binom_tail(spec.M, spec.M - mm + 1, p)
    return combine([(Fraction(1, 2), unequivocal), (Fraction(1, 2), widened)])
