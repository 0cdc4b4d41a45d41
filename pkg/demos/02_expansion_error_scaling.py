"""How fast the truncated series closes in on the reference value as n grows."""

import numpy as np

from invmoments import BinomialSpec, MomentQuery, binomial_expansion, binomial_inverse_moment_exact

ns = np.array([128, 256, 512, 1024, 2048, 4096, 8192])
p, r = 0.3, 1

reference = np.array([binomial_inverse_moment_exact(BinomialSpec(int(n), p), MomentQuery(r)).value
                      for n in ns])

# Retaining m terms leaves a relative error of order n^-ceil(m/2):
# terms come in same-order pairs, so orders 3 and 4 share a slope.
for order in (1, 2, 3, 4, 5, 6):
    values = np.array([binomial_expansion(BinomialSpec(int(n), p), MomentQuery(r), order).value
                       for n in ns])
    rel = np.abs(values / reference - 1)
    slope = np.polyfit(np.log(ns), np.log(rel), 1)[0]
    print(f"order {order}: slope {slope:6.2f}   expected {-np.ceil(order / 2):4.0f}   "
          f"rel error at n=8192 {rel[-1]:.1e}")

# The report carries its own ledger of terms and an error estimate.
rep = binomial_expansion(BinomialSpec(1000, p), MomentQuery(2), 6)
print("\nprefactor", rep.prefactor)
for k, t in rep.terms:
    print(f"  k={k}: {t: .3e}")
exact = binomial_inverse_moment_exact(BinomialSpec(1000, p), MomentQuery(2)).value
print("value", rep.value, "estimate", rep.error_estimate, "actual", abs(rep.value - exact))
