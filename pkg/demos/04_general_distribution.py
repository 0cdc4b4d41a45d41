"""The series for an arbitrary positive law, driven by its cumulant derivative."""

import numpy as np

from invmoments import (BinomialSpec, GeneralDistributionDescriptor, MomentQuery, PoissonSpec,
                        auto_truncate, binomial_descriptor, binomial_expansion,
                        binomial_inverse_moment_exact, general_expansion, poisson_descriptor,
                        poisson_expansion, poisson_inverse_moment_exact)
from invmoments.distributions import poisson_central_moment

# For the Poisson law the gamma averages are closed-form, so both paths agree term by term.
spec, query = PoissonSpec(10), MomentQuery(1)
g = general_expansion(poisson_descriptor(spec), query, 4)
s = poisson_expansion(spec, query, 4)
print("general path  ", g.value)
print("Poisson series", s.value)
print("per-term gap  ", np.abs(np.subtract(g.contributions(), s.contributions())).max())

# Any law works once its mean, central moments and phi' = d/dt log E[e^{tX}] are given.
mean = 100.0
desc = GeneralDistributionDescriptor(
    mean=mean,
    central_moments=lambda k: float(poisson_central_moment(PoissonSpec(mean), k)),
    cumulant_derivative=lambda t: mean * np.exp(t),
    name="poisson-by-hand")
rep = general_expansion(desc, MomentQuery(2), 6)
oracle = poisson_inverse_moment_exact(PoissonSpec(mean), MomentQuery(2)).value
print(f"\nhand descriptor {rep.value:.12e}  estimate {rep.error_estimate:.1e}")
print(f"oracle          {oracle:.12e}  gap      {abs(rep.value - oracle):.1e}")

# The binomial law centres its series at np, the dedicated series at np + q,
# so individual terms differ while both sums approach the same value.
bspec = BinomialSpec(50, 0.4)
gb = general_expansion(binomial_descriptor(bspec), MomentQuery(1), 7)
sb = binomial_expansion(bspec, MomentQuery(1), 7)
ob = binomial_inverse_moment_exact(bspec, MomentQuery(1)).value
print("\nbinomial n=50, p=0.4")
print("  first terms, general  ", np.round(gb.contributions()[:3], 8))
print("  first terms, dedicated", np.round(sb.contributions()[:3], 8))
print(f"  sums {gb.value:.10f} {sb.value:.10f}  oracle {ob:.10f}")

# auto_truncate stops when a same-order pair of terms grows.
rep = auto_truncate(PoissonSpec(3), MomentQuery(1), 30)
print("\nm=3: kept", rep.order_used, "terms; warnings:", rep.warnings)
