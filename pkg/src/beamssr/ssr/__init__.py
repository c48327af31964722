"""SSR extraction, gamma modelling, KS model selection and beam-transition estimation."""

from .fitting import (CandidateFit, FitReport, fit_beta, fit_candidates, fit_lognormal,
                      ks_critical, ks_statistic, lognormal_cdf)
from .gamma import (MEASURED_SSR_GAMMA, GammaParams, fit_gamma_mle, gamma_cdf,
                    gamma_log_likelihood, gamma_logpdf, gamma_pdf, gamma_quantile)
from .segments import BeamRun, SsrSampleSet, extract_ssr_segments, iter_beam_runs
from .special import digamma, regularized_lower_gamma, regularized_upper_gamma, trigamma
from .transitions import (MEASURED_CHANGE_PROBABILITIES, TransitionModel, beam_indices,
                          conditional_change_probability, estimate_transition_model)

__all__ = [
    "BeamRun", "CandidateFit", "FitReport", "GammaParams", "MEASURED_CHANGE_PROBABILITIES",
    "MEASURED_SSR_GAMMA", "SsrSampleSet", "TransitionModel", "beam_indices",
    "conditional_change_probability", "digamma", "estimate_transition_model",
    "extract_ssr_segments", "fit_beta", "fit_candidates", "fit_gamma_mle", "fit_lognormal",
    "gamma_cdf", "gamma_log_likelihood", "gamma_logpdf", "gamma_pdf", "gamma_quantile",
    "iter_beam_runs", "ks_critical", "ks_statistic", "lognormal_cdf",
    "regularized_lower_gamma", "regularized_upper_gamma", "trigamma",
]
