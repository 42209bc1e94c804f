"""Empirical validation: circuit simulation, pseudo-pure sampling, Monte Carlo trials.

The state-vector path checks the single-bit Deutsch-Jozsa circuit exactly:
starting from |0...0>|1>, Hadamards on all qubits, the oracle
U_f|x>|y> = |x>|y xor f(x)>, Hadamards again, and finally a NOT on the target
conditioned on the argument register being all-zero.  A constant oracle leaves
the target exactly |0>, a balanced oracle exactly |1>.

Ensemble members in a pseudo-pure state of polarization eps read the correct
target value with probability (1 + eps)/2, so Monte Carlo trials draw member
outcomes from that marginal Bernoulli law directly (exactly equivalent to, and
far cheaper than, evolving each member's density matrix).  Randomness comes
from counter-based Philox streams keyed by (seed, block), so results are
deterministic for a seed and independent of evaluation order.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DomainError, ResourceLimitError
from .failure import (EnsembleOutcome, EnsembleSpec, InputClass, Polarization,
                      Verdict, check_polarization, decide, pfail_general)

MAX_CIRCUIT_QUBITS = 20  # argument-register width bound for the state vector
_MASK64 = (1 << 64) - 1
_CHUNK = 1 << 16  # trials per Philox block in estimate_failure_rate


@dataclass(frozen=True)
class OracleSpec:
    """A constant or balanced Boolean function on n-bit arguments.

    Exactly one of ``constant_value`` (0 or 1) and ``support`` (the set of
    arguments mapped to 1, exactly half of all 2^n) is set.
    """

    n: int
    constant_value: int | None = None
    support: frozenset[int] | None = None

    def __post_init__(self) -> None:
        if self.n < 1:
            raise DomainError(f"argument width n={self.n} must be positive")
        if (self.constant_value is None) == (self.support is None):
            raise DomainError("exactly one of constant_value and support must be given")
        if self.constant_value is not None and self.constant_value not in (0, 1):
            raise DomainError(f"constant value must be a bit, got {self.constant_value}")
        if self.support is not None:
            N = 1 << self.n
            if len(self.support) != N // 2:
                raise DomainError(
                    f"balanced support must contain exactly {N // 2} arguments, "
                    f"got {len(self.support)}")
            if not all(0 <= x < N for x in self.support):
                raise DomainError("support contains arguments outside the domain")

    @classmethod
    def constant(cls, n: int, value: int) -> "OracleSpec":
        return cls(n=n, constant_value=value)

    @classmethod
    def balanced(cls, n: int, support) -> "OracleSpec":
        return cls(n=n, support=frozenset(int(x) for x in support))

    @classmethod
    def random_balanced(cls, n: int, rng: np.random.Generator) -> "OracleSpec":
        """Uniform draw over all C(N, N/2) balanced functions (partial shuffle)."""
        N = 1 << n
        picks = rng.permutation(N)[: N // 2]
        return cls.balanced(n, picks)

    @property
    def is_balanced(self) -> bool:
        return self.support is not None

    @property
    def input_class(self) -> InputClass:
        return InputClass.CLASS1 if self.is_balanced else InputClass.CLASS0

    def value(self, x: int) -> int:
        if not (0 <= x < (1 << self.n)):
            raise DomainError(f"argument {x} outside the {self.n}-bit domain")
        if self.constant_value is not None:
            return self.constant_value
        return int(x in self.support)


@lru_cache(maxsize=64)
def _truth_table(oracle: OracleSpec) -> np.ndarray:
    N = 1 << oracle.n
    if oracle.constant_value is not None:
        table = np.full(N, oracle.constant_value, dtype=np.uint8)
    else:
        table = np.zeros(N, dtype=np.uint8)
        table[np.fromiter(oracle.support, dtype=np.int64)] = 1
    table.setflags(write=False)
    return table


@dataclass(eq=False)
class RegisterState:
    """Amplitudes over (argument register) x (target qubit), index = 2x + t."""

    n: int
    amplitudes: np.ndarray

    def norm(self) -> float:
        return float(np.sum(np.abs(self.amplitudes) ** 2))

    def target_probabilities(self) -> tuple[float, float]:
        amps = self.amplitudes.reshape(-1, 2)
        p = np.sum(np.abs(amps) ** 2, axis=0)
        return float(p[0]), float(p[1])

    def argument_zero_weight(self) -> float:
        """Total probability weight on the all-zero argument register."""
        amps = self.amplitudes.reshape(-1, 2)
        return float(np.sum(np.abs(amps[0]) ** 2))


def _hadamard_arguments(amps: np.ndarray) -> None:
    """In-place H on every argument qubit: a Walsh-Hadamard butterfly on axis 0."""
    N = amps.shape[0]
    h = 1
    while h < N:
        view = amps.reshape(N // (2 * h), 2, h, 2)
        a = view[:, 0].copy()
        b = view[:, 1].copy()
        view[:, 0] = a + b
        view[:, 1] = a - b
        h *= 2
    amps *= 1.0 / math.sqrt(N)


def _hadamard_target(amps: np.ndarray) -> None:
    a = amps[:, 0].copy()
    b = amps[:, 1].copy()
    inv = 1.0 / math.sqrt(2.0)
    amps[:, 0] = (a + b) * inv
    amps[:, 1] = (a - b) * inv


def apply_circuit(oracle: OracleSpec, *, stop_before_final_gate: bool = False
                  ) -> RegisterState:
    """Run the single-bit-output Deutsch-Jozsa circuit on a pure state.

    Gate sequence: Hadamards on all n+1 qubits (target prepared in |1>), the
    oracle, Hadamards on all n+1 qubits again, then a NOT on the target
    conditioned on the argument register being all-|0>.  The second target
    Hadamard takes the phase-kickback |-> state back to |1> so the final
    controlled gate leaves the target exactly at the class bit.

    ``stop_before_final_gate`` returns the state just before the controlled
    NOT, where a balanced oracle puts zero weight on the all-zero argument.
    """
    if oracle.n > MAX_CIRCUIT_QUBITS:
        raise ResourceLimitError(
            f"state vector limited to n <= {MAX_CIRCUIT_QUBITS} argument qubits")
    N = 1 << oracle.n
    amps = np.zeros((N, 2), dtype=np.complex128)
    amps[0, 1] = 1.0

    _hadamard_arguments(amps)
    _hadamard_target(amps)

    flip = _truth_table(oracle).astype(bool)
    amps[flip] = amps[flip][:, ::-1]

    _hadamard_arguments(amps)
    _hadamard_target(amps)

    if not stop_before_final_gate:
        amps[0, 0], amps[0, 1] = amps[0, 1], amps[0, 0]
    return RegisterState(n=oracle.n, amplitudes=amps.reshape(-1))


@dataclass(frozen=True)
class TrialResult:
    """One ensemble measurement: counts, raw verdict, coin-resolved correctness."""

    outcome: EnsembleOutcome
    decision: Verdict
    correct: bool
    oracle_queries: int


def trial_stream(seed: int, block: int = 0) -> np.random.Generator:
    """Independent counter-based stream for (seed, block)."""
    key = ((int(seed) & _MASK64) << 64) | (int(block) & _MASK64)
    return np.random.Generator(np.random.Philox(key=key))


def _plus_probability(eps: float, input_class: InputClass) -> float:
    return (1.0 + eps) / 2.0 if input_class is InputClass.CLASS0 else (1.0 - eps) / 2.0


def sample_member(eps: Polarization, input_class: InputClass,
                  rng: np.random.Generator) -> int:
    """One member's +/-1 outcome: +1 with probability (1 +/- eps)/2.

    Equivalently: with probability eps the deterministic pure-algorithm
    outcome, otherwise a fair coin; both give the same marginal law.
    """
    check_polarization(eps)
    p_plus = _plus_probability(float(eps), input_class)
    return 1 if rng.random() < p_plus else -1


def run_ensemble_trial(eps: Polarization, spec: EnsembleSpec,
                       input_class: InputClass,
                       rng: np.random.Generator) -> TrialResult:
    """Measure all M members, decide, and resolve any guess with a fair coin.

    The guess coin is drawn from the same stream, after the member outcomes.
    """
    check_polarization(eps)
    p_plus = _plus_probability(float(eps), input_class)
    draws = rng.random(spec.M) < p_plus
    m_plus = int(np.count_nonzero(draws))
    outcome = EnsembleOutcome(m_plus=m_plus, m_minus=spec.M - m_plus)
    verdict = decide(outcome, spec)
    if verdict is Verdict.GUESS:
        resolved = InputClass.CLASS0 if rng.random() < 0.5 else InputClass.CLASS1
        correct = resolved is input_class
    else:
        correct = verdict.matches(input_class)
    return TrialResult(outcome=outcome, decision=verdict, correct=correct,
                       oracle_queries=spec.M)


def estimate_failure_rate(eps: Polarization, spec: EnsembleSpec, trials: int,
                          seed: int = 0) -> tuple[float, float]:
    """Monte Carlo failure rate over trials with a fair class-0/class-1 prior.

    Trials are evaluated in fixed blocks of 2^16, each on its own Philox
    stream keyed by (seed, block): results are reproducible for a seed and
    would be unchanged under parallel block evaluation.  Within a block the
    draw order is classes, then per-trial success counts (a Binomial(M, p)
    draw, exactly equivalent to M member Bernoulli draws), then guess coins.
    Returns (rate, stderr) with stderr = sqrt(rate (1 - rate) / trials).
    """
    check_polarization(eps)
    if trials < 1:
        raise DomainError(f"trial count {trials} must be positive")
    e = float(eps)
    M = spec.M
    R = float(spec.R)
    failures = 0
    done = 0
    block = 0
    while done < trials:
        k = min(_CHUNK, trials - done)
        rng = trial_stream(seed, block)
        is_class1 = rng.random(k) < 0.5
        p_plus = np.where(is_class1, (1.0 - e) / 2.0, (1.0 + e) / 2.0)
        m_plus = rng.binomial(M, p_plus)
        coins = rng.random(k) < 0.5  # drawn for every trial, used on guesses
        doubled = 2 * (2 * m_plus - M)
        verdict_class1 = doubled <= -R
        guess = ~((doubled >= R) | verdict_class1)
        resolved = np.where(guess, coins, verdict_class1)
        failures += int(np.count_nonzero(resolved != is_class1))
        done += k
        block += 1
    rate = failures / trials
    stderr = math.sqrt(rate * (1.0 - rate) / trials)
    return rate, stderr


def consistency_z(rate: float, analytic: float, trials: int) -> float:
    """Z-score of an empirical rate against its analytic value.

    Uses the standard error of the empirical rate under the analytic law,
    sqrt(analytic (1 - analytic) / trials); degenerate analytic rates (0 or 1)
    give 0 on exact agreement and infinity otherwise.
    """
    sigma = math.sqrt(analytic * (1.0 - analytic) / trials)
    if sigma == 0.0:
        return 0.0 if rate == analytic else math.inf
    return (rate - analytic) / sigma


def analytic_failure(eps: Polarization, spec: EnsembleSpec) -> float:
    """Float failure probability for comparison with Monte Carlo rates."""
    return pfail_general(float(eps), spec).value


def classical_run(oracle: OracleSpec, M: int, rng: np.random.Generator
                  ) -> tuple[InputClass, bool]:
    """One run of the classical algorithm: M distinct queries, constant iff all agree."""
    N = 1 << oracle.n
    if not (1 <= M <= N):
        raise DomainError(f"query count M={M} outside [1, {N}]")
    if oracle.n <= MAX_CIRCUIT_QUBITS:
        args = rng.permutation(N)[:M]
        vals = _truth_table(oracle)[args]
        constant = bool(vals.min() == vals.max())
    else:
        chosen: set[int] = set()
        while len(chosen) < M:
            chosen.add(int(rng.integers(N)))
        outputs = {oracle.value(x) for x in chosen}
        constant = len(outputs) == 1
    verdict = InputClass.CLASS0 if constant else InputClass.CLASS1
    return verdict, verdict is oracle.input_class
