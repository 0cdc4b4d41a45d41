"""Exact polynomial and truncated-series arithmetic for the moment recursions."""

from .coefficients import (GOLDEN_BINOMIAL, GOLDEN_POISSON, binomial_np_series, check_against_golden,
                           golden_series, poisson_m_series, rising_binomial_poly)
from .moments import DegreeReport, binomial_moment_poly, degree_report, double_factorial, poisson_moment_poly
from .poly import (MissingBindingError, PolyError, RationalPoly, SubstitutionCycleError, const, parse_poly,
                   sym)
from .series import PowerSeries, TruncationError, binomial_series

__all__ = [
    "RationalPoly", "PowerSeries", "PolyError", "MissingBindingError", "SubstitutionCycleError",
    "TruncationError", "parse_poly", "sym", "const", "binomial_series",
    "binomial_moment_poly", "poisson_moment_poly", "degree_report", "DegreeReport", "double_factorial",
    "binomial_np_series", "poisson_m_series", "rising_binomial_poly", "golden_series",
    "check_against_golden", "GOLDEN_BINOMIAL", "GOLDEN_POISSON",
]
