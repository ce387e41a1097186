"""Multi-cluster fluctuating two-ray (MFTR) fading.

Moment generating function, SNR and envelope distributions, Monte Carlo
samplers, link metrics (outage, bit error rate, ergodic capacity) and
least-squares fitting to measured densities.
"""
from .model import (DegenerateModelError, MftrParams, ParameterError, UnsupportedCombination, mgf,
                    validate)
from .specfun import LaplaceInversionConfig, SpecialFunctionError, Tolerance
from .stats import aof, cdf, envelope_cdf, envelope_pdf, gamma_mixture_weights, pdf, special_case_params
from .metrics import (BPSK, Modulation, avg_ber, avg_ber_asymptotic, ergodic_capacity, outage_asymptotic,
                      outage_probability)
from .montecarlo import EmpiricalPdf, empirical_pdf, sample_mixture, sample_physical
from .fit import FitConfig, FitResult, load_empirical_csv, mse
from .fit import fit as fit_model  # ``mftr.fit`` stays the module

__version__ = "0.1.0"

__all__ = [
    "MftrParams", "ParameterError", "UnsupportedCombination", "DegenerateModelError", "validate", "mgf",
    "Tolerance", "LaplaceInversionConfig", "SpecialFunctionError",
    "pdf", "cdf", "envelope_pdf", "envelope_cdf", "gamma_mixture_weights", "aof", "special_case_params",
    "Modulation", "BPSK", "outage_probability", "outage_asymptotic", "avg_ber", "avg_ber_asymptotic",
    "ergodic_capacity",
    "EmpiricalPdf", "empirical_pdf", "sample_physical", "sample_mixture",
    "FitConfig", "FitResult", "fit_model", "mse", "load_empirical_csv",
]
