"""Exact l^p norms of the Cesaro operator minus identity, with numerical certificates."""

__version__ = "0.1.0"

from .estimation import NormEstimate, SectionNormEstimator, dual_power_lower_bound
from .exceptions import DomainError, NumericError
from .exponents import ERational, Exponent, dual_exponent, is_in_E
from .extremal import ExtremalReport, build_discrete_extremal, discrete_ratio
from .inequalities import CheckReport, run_suite
from .minimizer import CriticalPointResult, norm_formula, norm_formula_transpose, solve_tp

__all__ = [
    "CheckReport", "CriticalPointResult", "DomainError", "ERational", "Exponent",
    "ExtremalReport", "NormEstimate", "NumericError", "SectionNormEstimator",
    "build_discrete_extremal", "discrete_ratio", "dual_exponent", "dual_power_lower_bound",
    "is_in_E", "norm_formula", "norm_formula_transpose", "run_suite", "solve_tp",
]
