"""Failure probabilities and critical polarization for ensemble quantum algorithms.

Computes, bounds and empirically validates how an ensemble quantum computer
with a single-bit output (pseudo-pure initial state, polarization eps,
ensemble size M) compares against classical probabilistic competitors at a
matched oracle-query budget, including the critical polarization eps(M) and
its Deutsch-Jozsa limit sqrt(3)/2 ~ 0.866025.
"""
from .bahadur import (BahadurBounds, bahadur_bounds, correction_factor,
                      pfail_asymptotic)
from .classical import (ClassicalModel, DeutschJozsaApprox, DeutschJozsaExact,
                        ExponentialModel, cf_dj_approx, cf_dj_exact,
                        cf_dj_stirling, cf_exponential)
from .errors import DomainError, ResolutionTooCoarseError, ResourceLimitError
from .failure import (EnsembleOutcome, EnsembleSpec, FailureProbability,
                      InputClass, Verdict, decide, individual_outcome_probs,
                      m_min, pfail_best, pfail_general, target_expectation,
                      wrong_outcome_prob)
from .probabilities import (BinomialTailQuery, ProbabilityValue, binom_pmf,
                            binom_tail, incomplete_beta)
from .simulator import (OracleSpec, RegisterState, TrialResult, apply_circuit,
                        classical_run, estimate_failure_rate,
                        run_ensemble_trial, sample_member, trial_stream)
from .solver import (BEST_RESOLUTION, SQRT_RESOLUTION,
                     CriticalPolarizationPoint, ResolutionScaling,
                     ThresholdBound, curve, eps_asymptotic_general,
                     eps_dj_bestres, eps_dj_moderate, eps_exponential,
                     eps_limit, refit_moderate_constant, solve_critical,
                     threshold_bound, threshold_bound_simple)

__version__ = "0.1.0"

__all__ = [
    "BahadurBounds", "bahadur_bounds", "correction_factor", "pfail_asymptotic",
    "ClassicalModel", "DeutschJozsaApprox", "DeutschJozsaExact",
    "ExponentialModel", "cf_dj_approx", "cf_dj_exact", "cf_dj_stirling",
    "cf_exponential",
    "DomainError", "ResolutionTooCoarseError", "ResourceLimitError",
    "EnsembleOutcome", "EnsembleSpec", "FailureProbability", "InputClass",
    "Verdict", "decide", "individual_outcome_probs", "m_min", "pfail_best",
    "pfail_general", "target_expectation", "wrong_outcome_prob",
    "BinomialTailQuery", "ProbabilityValue", "binom_pmf", "binom_tail",
    "incomplete_beta",
    "OracleSpec", "RegisterState", "TrialResult", "apply_circuit",
    "classical_run", "estimate_failure_rate", "run_ensemble_trial",
    "sample_member", "trial_stream",
    "BEST_RESOLUTION", "SQRT_RESOLUTION", "CriticalPolarizationPoint",
    "ResolutionScaling", "ThresholdBound", "curve", "eps_asymptotic_general",
    "eps_dj_bestres", "eps_dj_moderate", "eps_exponential", "eps_limit",
    "refit_moderate_constant", "solve_critical", "threshold_bound",
    "threshold_bound_simple",
    "__version__",
]
