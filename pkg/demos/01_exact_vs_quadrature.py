"""Two independent reference values for E[1/X^r], X a zero-truncated binomial."""

from fractions import Fraction

import numpy as np

from invmoments import BinomialSpec, MomentQuery
from invmoments import binomial_inverse_moment_exact, binomial_inverse_moment_quadrature

# A tiny case by hand first: n=2, p=1/2 gives 2*(1/4)*1 + (1/4)*(1/2) = 5/8.
exact = binomial_inverse_moment_exact(BinomialSpec(2, 0.5), MomentQuery(1))
print("n=2, p=0.5, r=1:", exact.value, "bound", exact.bound)

# Rational inputs keep every step exact.
print("exact rational:", binomial_inverse_moment_exact(
    BinomialSpec(2, Fraction(1, 2)), MomentQuery(1, mode="rational")).value)

# The summed pmf and the integral route agree well inside their bounds.
print(f"\n{'n':>6} {'p':>5} {'r':>4} {'direct sum':>22} {'quadrature':>22} {'gap':>9}")
for n in (5, 50, 500, 5000):
    for p in (0.1, 0.9):
        for r in (0.5, 2.0):
            spec, query = BinomialSpec(n, p), MomentQuery(r)
            a = binomial_inverse_moment_exact(spec, query)
            b = binomial_inverse_moment_quadrature(spec, query)
            print(f"{n:6d} {p:5.1f} {r:4.1f} {a.value:22.16e} {b.value:22.16e} "
                  f"{abs(a.value - b.value):9.1e}")

# For large n the moment behaves like (np)^-r.
ns = np.array([10**k for k in range(2, 6)])
ratios = [binomial_inverse_moment_exact(BinomialSpec(int(n), 0.3), MomentQuery(1)).value * n * 0.3
          for n in ns]
print("\nn*p*f_1(n):", np.round(ratios, 6))
