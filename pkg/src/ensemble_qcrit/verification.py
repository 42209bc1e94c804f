"""Self-contained identity checks runnable from the command line.

Each check re-derives a structural property of the failure-probability
machinery (exact boundary values, parity equalities, tail/beta identities,
bound ordering, classical brute-force agreement) on a grid small enough to
finish in seconds.  The test suite exercises the same properties on larger
grids; these are the operational smoke checks.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .bahadur import bahadur_bounds
from .classical import cf_dj_approx, cf_dj_exact
from .errors import ResolutionTooCoarseError
from .failure import EnsembleSpec, pfail_best, pfail_general
from .probabilities import BinomialTailQuery, binom_tail, incomplete_beta
from .solver import eps_asymptotic_general, eps_exponential, eps_limit


@dataclass(frozen=True)
class VerificationResult:
    name: str
    passed: bool
    detail: str


def _eps_grid() -> list[Fraction]:
    return [Fraction(k, 8) for k in range(9)]


def check_boundary_values() -> VerificationResult:
    """pfail is exactly 1/2 at eps=0 and exactly 0 at eps=1.

    A device so coarse that no outcome registers (m_min = M + 1) guesses
    every time, so its failure probability is 1/2 at every eps; the eps=1
    boundary statement applies to devices with m_min <= M.
    """
    checked = 0
    for M in range(1, 25):
        for R in (2, 3, 7):
            try:
                spec = EnsembleSpec(M, R)
            except ResolutionTooCoarseError:
                continue
            if pfail_general(Fraction(0), spec).exact != Fraction(1, 2):
                return VerificationResult("boundary-values", False,
                                          f"pfail(0) != 1/2 at M={M}, R={R}")
            expected_pure = (Fraction(1, 2) if spec.m_min == M + 1 else Fraction(0))
            if pfail_general(Fraction(1), spec).exact != expected_pure:
                return VerificationResult("boundary-values", False,
                                          f"pfail(1) != {expected_pure} at M={M}, R={R}")
            checked += 1
    return VerificationResult("boundary-values", True, f"{checked} (M, R) pairs exact")


def check_eps_monotonicity() -> VerificationResult:
    """pfail strictly decreases in eps away from the endpoints."""
    grid = _eps_grid()
    for M in (1, 2, 5, 9, 16):
        for R in (2, 5):
            try:
                spec = EnsembleSpec(M, R)
            except ResolutionTooCoarseError:
                continue
            values = [pfail_general(e, spec).exact for e in grid]
            if spec.m_min == M + 1:
                # always-guess device: constant 1/2 instead of decreasing
                if any(v != Fraction(1, 2) for v in values):
                    return VerificationResult("eps-monotonicity", False,
                                              f"degenerate device not 1/2 at M={M}")
                continue
            for a, b in zip(values, values[1:]):
                if not a > b:
                    return VerificationResult("eps-monotonicity", False,
                                              f"non-decreasing step at M={M}, R={R}")
    return VerificationResult("eps-monotonicity", True, "strict decrease on all grids")


def check_resolution_monotonicity() -> VerificationResult:
    """pfail is non-decreasing in m_min at fixed (eps, M)."""
    for M in range(2, 31):
        for eps in (Fraction(1, 8), Fraction(1, 2), Fraction(7, 8)):
            p = (1 - eps) / 2
            values = []
            for mm in range(M // 2 + 1, M + 2):
                t1 = binom_tail(M, mm, p).exact
                t2 = binom_tail(M, M - mm + 1, p).exact
                values.append((t1 + t2) / 2)
            for a, b in zip(values, values[1:]):
                if a > b:
                    return VerificationResult("resolution-monotonicity", False,
                                              f"decrease at M={M}, eps={eps}")
    return VerificationResult("resolution-monotonicity", True, "non-decreasing in m_min")


def check_parity_equalities() -> VerificationResult:
    """Odd M: pfail(M+1) = pfail(M) exactly and the M+2 step has its closed form."""
    for M in range(1, 42, 2):
        for eps in _eps_grid():
            p = (1 - eps) / 2
            a = pfail_best(eps, M).exact
            if pfail_best(eps, M + 1).exact != a:
                return VerificationResult("parity-equalities", False,
                                          f"M+1 inequality at M={M}, eps={eps}")
            half = (M + 1) // 2
            delta = -math.comb(M, half) * (1 - 2 * p) * p**half * (1 - p) ** half
            if pfail_best(eps, M + 2).exact - a != delta:
                return VerificationResult("parity-equalities", False,
                                          f"M+2 step mismatch at M={M}, eps={eps}")
    return VerificationResult("parity-equalities", True, "odd M <= 41 exact")


def check_tail_beta_equivalence() -> VerificationResult:
    """binom_tail(n, m, p) = I_p(m, n-m+1) exactly on a rational grid."""
    for n in range(1, 41):
        for p in (Fraction(k, 16) for k in range(17)):
            for m in range(1, n + 1):
                if binom_tail(n, m, p).exact != incomplete_beta(p, m, n - m + 1).exact:
                    return VerificationResult("tail-beta-equivalence", False,
                                              f"mismatch at n={n}, m={m}, p={p}")
    return VerificationResult("tail-beta-equivalence", True, "exact for n <= 40")


def check_beta_symmetry() -> VerificationResult:
    """I_p(x+1,x) + I_p(x,x+1) = 2 I_p(x,x) exactly and on the float path."""
    for x in range(1, 31):
        for k in range(1, 16):
            p = Fraction(k, 16)
            lhs = incomplete_beta(p, x + 1, x).exact + incomplete_beta(p, x, x + 1).exact
            rhs = 2 * incomplete_beta(p, x, x).exact
            if lhs != rhs:
                return VerificationResult("beta-symmetry", False, f"x={x}, p={p}")
            f_lhs = incomplete_beta(float(p), x + 1, x).value + incomplete_beta(float(p), x, x + 1).value
            f_rhs = 2 * incomplete_beta(float(p), x, x).value
            if abs(f_lhs - f_rhs) > 1e-12:
                return VerificationResult("beta-symmetry", False,
                                          f"float path off by {abs(f_lhs - f_rhs):.2e}")
    return VerificationResult("beta-symmetry", True, "x <= 30 exact and to 1e-12 in floats")


def check_complementarity() -> VerificationResult:
    """binom_tail(n,m,p) + binom_tail(n,n-m+1,1-p) = 1 exactly."""
    for n in range(1, 41):
        for p in (Fraction(1, 16), Fraction(5, 16), Fraction(1, 2)):
            for m in range(1, n + 1):
                total = binom_tail(n, m, p).exact + binom_tail(n, n - m + 1, 1 - p).exact
                if total != 1:
                    return VerificationResult("complementarity", False,
                                              f"n={n}, m={m}, p={p}")
    return VerificationResult("complementarity", True, "exact for n <= 40")


def check_bahadur_sandwich() -> VerificationResult:
    """lower <= exact tail <= upper wherever the bounds apply."""
    checked = 0
    for n in (5, 10, 20, 50):
        for k in range(1, 10):
            p = Fraction(k, 20)
            for m in range(1, n + 1):
                bounds = bahadur_bounds(BinomialTailQuery(n, m, p))
                if not bounds.applicable:
                    continue
                tail = binom_tail(n, m, p).exact
                if not (bounds.lower_exact <= tail <= bounds.upper_exact):
                    return VerificationResult("bahadur-sandwich", False,
                                              f"violation at n={n}, m={m}, p={p}")
                checked += 1
    return VerificationResult("bahadur-sandwich", True, f"{checked} applicable queries")


def check_classical_brute_force() -> VerificationResult:
    """cf_dj_exact agrees with full enumeration of balanced functions x query sets."""
    for n in (1, 2, 3):
        N = 1 << n
        balanced = [frozenset(c) for c in itertools.combinations(range(N), N // 2)]
        for M in range(1, N // 2 + 2):
            fails = 0
            total = 0
            for support in balanced:
                for subset in itertools.combinations(range(N), M):
                    outputs = {x in support for x in subset}
                    fails += len(outputs) == 1
                    total += 1
            expected = Fraction(1, 2) * Fraction(fails, total)
            if cf_dj_exact(n, M).exact != expected:
                return VerificationResult("classical-brute-force", False,
                                          f"n={n}, M={M}")
    return VerificationResult("classical-brute-force", True, "N in {2,4,8} exact")


def check_float_exact_agreement() -> VerificationResult:
    """The log-space float tail tracks the exact tail to 1e-12 relative."""
    worst = 0.0
    for n in (7, 33, 100, 161):
        for k in (1, 7, 10):
            p = Fraction(k, 20)
            for m in range(1, n + 1, 3):
                exact = binom_tail(n, m, p).exact
                if exact == 0:
                    continue
                approx = binom_tail(n, m, float(p)).value
                rel = abs(approx / float(exact) - 1.0)
                worst = max(worst, rel)
    if worst > 1e-12:
        return VerificationResult("float-exact-agreement", False,
                                  f"worst relative error {worst:.2e}")
    return VerificationResult("float-exact-agreement", True,
                              f"worst relative error {worst:.2e}")


def check_closed_form_agreement() -> VerificationResult:
    """The exponential closed form matches the general form at F = 2^-M."""
    worst = 0.0
    for M in range(1, 2001):
        a = eps_exponential(2, 1, M)
        b = eps_asymptotic_general(cf_dj_approx(M), M)
        worst = max(worst, abs(a - b))
    limit_err = abs(eps_limit(2, 1) - math.sqrt(3) / 2)
    if worst > 1e-14 or limit_err > 1e-15:
        return VerificationResult("closed-form-agreement", False,
                                  f"worst diff {worst:.2e}, limit err {limit_err:.2e}")
    return VerificationResult("closed-form-agreement", True,
                              f"worst diff {worst:.2e}; limit exact to {limit_err:.1e}")


ALL_CHECKS: tuple[tuple[str, Callable[[], VerificationResult]], ...] = (
    ("boundary-values", check_boundary_values),
    ("eps-monotonicity", check_eps_monotonicity),
    ("resolution-monotonicity", check_resolution_monotonicity),
    ("parity-equalities", check_parity_equalities),
    ("tail-beta-equivalence", check_tail_beta_equivalence),
    ("beta-symmetry", check_beta_symmetry),
    ("complementarity", check_complementarity),
    ("bahadur-sandwich", check_bahadur_sandwich),
    ("classical-brute-force", check_classical_brute_force),
    ("float-exact-agreement", check_float_exact_agreement),
    ("closed-form-agreement", check_closed_form_agreement),
)


def run_all() -> list[VerificationResult]:
    return [fn() for _, fn in ALL_CHECKS]
