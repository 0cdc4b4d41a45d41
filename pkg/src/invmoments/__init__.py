"""Inverse moments of positive binomial and Poisson distributions."""

from .distributions import BinomialSpec, MomentQuery, PoissonSpec
from .errors import ConvergenceError, ValidationError
from .expansion import (ExpansionReport, GeneralDistributionDescriptor, QuadratureConfig,
                        auto_truncate, binomial_descriptor, binomial_expansion, general_expansion,
                        poisson_descriptor, poisson_expansion)
from .oracle import (OracleResult, binomial_inverse_moment_exact,
                     binomial_inverse_moment_quadrature, poisson_inverse_moment_exact)

__all__ = [
    "BinomialSpec", "PoissonSpec", "MomentQuery",
    "ValidationError", "ConvergenceError",
    "OracleResult", "binomial_inverse_moment_exact", "poisson_inverse_moment_exact",
    "binomial_inverse_moment_quadrature",
    "ExpansionReport", "GeneralDistributionDescriptor", "QuadratureConfig",
    "binomial_expansion", "poisson_expansion", "general_expansion", "auto_truncate",
    "binomial_descriptor", "poisson_descriptor",
]
