"""Critical polarization: where the quantum ensemble ties its classical competitor.

For a classical model with failure probability F(Q) and a quantum ensemble of
M members spending q oracle queries each (Q = M q), the critical polarization
eps(M) solves

    pfail(eps, M, m_min) = F(M q).

Since pfail decreases strictly and continuously from 1/2 at eps = 0 to 0 at
eps = 1, the root is unique and bisection is exact and robust; comparisons run
in log space so that ensembles up to M ~ 1e6 (failure probabilities around
2^-M) are handled without underflow.  Closed-form approximations of eps(M)
and the asymptotic limit sqrt(1 - c^-2q) are provided alongside.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

from .classical import ClassicalModel
from .errors import DomainError
from .failure import EnsembleSpec, pfail_best, pfail_general
from .probabilities import ProbabilityValue

LOG_HALF = math.log(0.5)

METHOD_NUMERIC = "numeric"
METHOD_ASYMPTOTIC = "asymptotic_general"
METHOD_BESTRES = "dj_bestres"
METHOD_MODERATE = "dj_moderate"
METHOD_LIMIT = "limit"
ALL_METHODS = (METHOD_NUMERIC, METHOD_ASYMPTOTIC, METHOD_BESTRES,
               METHOD_MODERATE, METHOD_LIMIT)

EPS_TOLERANCE = 1e-12
EXACT_CHECK_MAX_M = 1000


@dataclass(frozen=True)
class ResolutionScaling:
    """Resolution family R(M) = max(2, r0 * M^alpha) with 0 <= alpha < 1."""

    r0: float = 2.0
    alpha: float = 0.0

    def __post_init__(self) -> None:
        if self.r0 <= 0:
            raise DomainError(f"resolution prefactor r0={self.r0} must be positive")
        if not (0 <= self.alpha < 1):
            raise DomainError(f"resolution exponent alpha={self.alpha} outside [0, 1)")

    def resolution(self, M: int) -> float:
        return max(2.0, self.r0 * M**self.alpha)


BEST_RESOLUTION = ResolutionScaling(2.0, 0.0)
SQRT_RESOLUTION = ResolutionScaling(1.0, 0.5)


@dataclass(frozen=True)
class CriticalPolarizationPoint:
    """One (M, eps) point with provenance.

    ``residual`` is the relative mismatch pfail/F - 1 at the returned eps
    (numeric points only); ``residual_exact`` is an exact-rational
    pfail - F evaluated at the returned eps when M is small enough and the
    model supports exact arithmetic.  ``error`` flags rows whose method was
    outside its domain instead of aborting a whole curve.
    """

    M: int
    eps: float
    method: str
    resolution: float | None = None
    residual: float | None = None
    residual_exact: Fraction | None = None
    error: str | None = None


@dataclass(frozen=True)
class ThresholdBound:
    """A floor eps0 on the critical polarization holding for all M > M0."""

    M0: int
    eps0: float
    eps_prime: float
    cap: float

    def __post_init__(self) -> None:
        if not (0 <= self.eps0 <= 1):
            raise DomainError(f"threshold polarization eps0={self.eps0} outside [0, 1]")


def _failure_log(value: Union[ProbabilityValue, float]) -> float:
    if isinstance(value, ProbabilityValue):
        return value.log
    if not (0 <= value <= 1):
        raise DomainError(f"failure probability {value} outside [0, 1]")
    return math.log(value) if value > 0 else float("-inf")


def solve_critical(model: ClassicalModel, q: int, M: int,
                   scaling: ResolutionScaling = BEST_RESOLUTION,
                   exact_check: bool | None = None) -> CriticalPolarizationPoint:
    """Bisect for the polarization where the quantum ensemble ties the model.

    Returns eps = 0 when F(Mq) >= 1/2 (the competitor is no better than the
    fully mixed ensemble) and eps = 1 when F(Mq) = 0 exactly.  The bracket is
    narrowed to EPS_TOLERANCE; for M <= 1000 and exact-capable models an
    exact-rational residual at the returned eps is recorded.
    """
    if q < 1:
        raise DomainError(f"query count q={q} must be positive")
    if M < 1:
        raise DomainError(f"ensemble size M={M} must be positive")
    R = scaling.resolution(M)
    spec = EnsembleSpec(M, R)
    target = model.failure(M * q)
    target_log = target.log

    if target_log >= LOG_HALF:
        eps = 0.0
        residual = math.expm1(pfail_general(0.0, spec).log - target_log)
    elif target_log == float("-inf"):
        eps = 1.0
        residual = 0.0
    else:
        lo, hi = 0.0, 1.0
        while hi - lo > EPS_TOLERANCE:
            mid = 0.5 * (lo + hi)
            if pfail_general(mid, spec).log > target_log:
                lo = mid
            else:
                hi = mid
        eps = 0.5 * (lo + hi)
        residual = math.expm1(pfail_general(eps, spec).log - target_log)

    residual_exact: Fraction | None = None
    if exact_check is None:
        exact_check = M <= EXACT_CHECK_MAX_M
    if exact_check and target.exact is not None:
        pf = pfail_general(Fraction(eps), spec)
        if pf.exact is not None:
            residual_exact = pf.exact - target.exact
    return CriticalPolarizationPoint(
        M=M, eps=eps, method=METHOD_NUMERIC, resolution=R,
        residual=residual, residual_exact=residual_exact)


def eps_asymptotic_general(F_Mq: Union[ProbabilityValue, float], M: int) -> float:
    """Large-M closed form sqrt(1 - [M F(Mq)^2]^(1/M)), evaluated in log space.

    Valid when the critical polarization is bounded away from 0; raises when
    M F^2 > 1, where the expression has no real value.
    """
    if M < 1:
        raise DomainError(f"ensemble size M={M} must be positive")
    f_log = _failure_log(F_Mq)
    if f_log == float("-inf"):
        return 1.0
    t = (math.log(M) + 2.0 * f_log) / M
    if t > 0.0:
        raise DomainError(f"M * F^2 = exp({t * M:.6g}) exceeds 1: no real solution")
    return math.sqrt(-math.expm1(t))


def eps_exponential(c: float, q: int, M: int) -> float:
    """Critical polarization closed form sqrt(1 - M^(1/M) / c^(2q))."""
    if c <= 1:
        raise DomainError(f"exponential base c={c} must be > 1")
    if q < 1 or M < 1:
        raise DomainError("q and M must be positive")
    t = math.log(M) / M - 2.0 * q * math.log(c)
    if t > 0.0:
        raise DomainError(f"M^(1/M) exceeds c^(2q) at M={M}: no real solution")
    return math.sqrt(-math.expm1(t))


def eps_dj_bestres(M: int) -> float:
    """Deutsch-Jozsa best-resolution closed form sqrt(1 - M^(1/M)/4)."""
    return eps_exponential(2.0, 1, M)


MODERATE_CONSTANT = 2.44  # empirical fit; see refit_moderate_constant


def eps_dj_moderate(M: int) -> float:
    """Intermediate-M refinement sqrt(1 - (2.44 pi M)^(1/M) / 4).

    Tracks the numeric Deutsch-Jozsa solution more closely than the plain
    best-resolution form for moderate ensemble sizes.  Has no real value for
    very small M (the radicand goes negative); that is reported, not clamped.
    """
    if M < 1:
        raise DomainError(f"ensemble size M={M} must be positive")
    t = math.log(MODERATE_CONSTANT * math.pi * M) / M - math.log(4.0)
    if t > 0.0:
        raise DomainError(f"(2.44 pi M)^(1/M) exceeds 4 at M={M}: no real solution")
    return math.sqrt(-math.expm1(t))


def eps_limit(c: float, q: int = 1) -> float:
    """Asymptotic critical polarization sqrt(1 - 1/c^(2q)) as M -> infinity."""
    if c <= 1:
        raise DomainError(f"exponential base c={c} must be > 1")
    if q < 1:
        raise DomainError(f"query count q={q} must be positive")
    return math.sqrt(-math.expm1(-2.0 * q * math.log(c)))


def threshold_bound(c: float, q: int = 1) -> ThresholdBound:
    """Floor on the critical polarization for the exponential competitor.

    M0 = ceil(log 2 / (q log c)) is where the failure-probability ratio at
    eps = 0 first reaches 1; eps_prime solves
    pfail_best(eps, M0) * c^(q M0) = 1 by bisection, and the floor is
    min(eps_prime, sqrt(1 - 2 c^(-2q) / 3)).
    """
    if c <= 1:
        raise DomainError(f"exponential base c={c} must be > 1")
    if q < 1:
        raise DomainError(f"query count q={q} must be positive")
    M0 = max(1, math.ceil(math.log(2) / (q * math.log(c))))
    cap = math.sqrt(1.0 - (2.0 / 3.0) * math.exp(-2.0 * q * math.log(c)))
    target_log = -q * M0 * math.log(c)
    lo, hi = 0.0, 1.0
    if pfail_best(0.0, M0).log <= target_log:
        eps_prime = 0.0
    else:
        while hi - lo > EPS_TOLERANCE:
            mid = 0.5 * (lo + hi)
            if pfail_best(mid, M0).log > target_log:
                lo = mid
            else:
                hi = mid
        eps_prime = 0.5 * (lo + hi)
    return ThresholdBound(M0=M0, eps0=min(eps_prime, cap),
                          eps_prime=eps_prime, cap=cap)


def threshold_bound_simple(c: float) -> ThresholdBound:
    """Coarser single-query floor: eps >= sqrt(1 - 1/c^2) once M >= 2/log c.

    Diagnostic companion to :func:`threshold_bound`; the two forms differ and
    both are exposed.
    """
    if c <= 1:
        raise DomainError(f"exponential base c={c} must be > 1")
    M0 = max(1, math.ceil(2.0 / math.log(c)))
    eps0 = math.sqrt(-math.expm1(-2.0 * math.log(c)))
    return ThresholdBound(M0=M0, eps0=eps0, eps_prime=eps0, cap=eps0)


def _curve_point(model: ClassicalModel, q: int, M: int, method: str,
                 scaling: ResolutionScaling) -> CriticalPolarizationPoint:
    try:
        if method == METHOD_NUMERIC:
            return solve_critical(model, q, M, scaling)
        if method == METHOD_ASYMPTOTIC:
            eps = eps_asymptotic_general(model.failure(M * q), M)
        elif method == METHOD_BESTRES:
            eps = eps_exponential(model.asymptotic_base, q, M)
        elif method == METHOD_MODERATE:
            eps = eps_dj_moderate(M)
        elif method == METHOD_LIMIT:
            eps = eps_limit(model.asymptotic_base, q)
        else:
            raise DomainError(f"unknown method {method!r}")
        return CriticalPolarizationPoint(M=M, eps=eps, method=method)
    except DomainError as exc:
        return CriticalPolarizationPoint(M=M, eps=math.nan, method=method,
                                         error=str(exc))


def curve(model: ClassicalModel, q: int, m_values: Iterable[int],
          scaling: ResolutionScaling = BEST_RESOLUTION,
          methods: Sequence[str] = (METHOD_NUMERIC,),
          max_workers: int | None = None) -> list[CriticalPolarizationPoint]:
    """Critical-polarization points for each (M, method) pair.

    Rows are ordered by M ascending, then by the canonical method order.
    Per-point domain errors are returned as flagged rows (eps = NaN) rather
    than aborting the sweep.  Points are independent, so a worker pool may
    evaluate them concurrently; the output order is deterministic either way.
    """
    ms = sorted(set(int(m) for m in m_values))
    if not ms:
        raise DomainError("m_values must be nonempty")
    for method in methods:
        if method not in ALL_METHODS:
            raise DomainError(f"unknown method {method!r}")
    order = {name: i for i, name in enumerate(ALL_METHODS)}
    tasks = sorted(((M, method) for M in ms for method in methods),
                   key=lambda t: (t[0], order[t[1]]))
    if max_workers is not None and max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            points = list(pool.map(
                lambda t: _curve_point(model, q, t[0], t[1], scaling), tasks))
    else:
        points = [_curve_point(model, q, M, method, scaling)
                  for M, method in tasks]
    return points


def refit_moderate_constant(m_values: Iterable[int] = range(4, 41),
                            model: ClassicalModel | None = None
                            ) -> list[tuple[int, float]]:
    """Re-derive the 2.44 constant of :func:`eps_dj_moderate` from numeric solves.

    Writing the intermediate-M form as 1 - eps^2 = (K pi M)^(1/M) / 4 and
    substituting the numerically solved eps(M) gives
    K(M) = (4 (1 - eps(M)^2))^M / (pi M); for moderate M this hovers near the
    packaged constant.  Returns (M, K(M)) pairs.
    """
    from .classical import DeutschJozsaApprox
    if model is None:
        model = DeutschJozsaApprox()
    out: list[tuple[int, float]] = []
    for M in m_values:
        eps = solve_critical(model, 1, M, exact_check=False).eps
        log_k = M * math.log(4.0 * (1.0 - eps * eps)) - math.log(math.pi * M)
        out.append((M, math.exp(log_k)))
    return out
