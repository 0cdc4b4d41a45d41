"""Exact series coefficients in 1/(np) and 1/m, built from the moment recursions."""

from invmoments.symbolic import (binomial_moment_poly, binomial_np_series, check_against_golden,
                                 degree_report, poisson_m_series)

# Central moments as polynomials in n and p.
for k in range(2, 6):
    print(f"mu_{k} =", binomial_moment_poly(k))

# Highest power of n is k//2 with a double-factorial leading coefficient.
print("\ndegree of mu_8 in n:", degree_report(8).deg_n,
      " leading coefficient:", degree_report(8).leading_n_coefficient)

# Coefficients of (np)^-r * sum_k c_k (np)^-k, written in q = 1 - p.
print()
print(binomial_np_series(1, 5).to_text())
print(binomial_np_series(None, 2).to_text())
print(poisson_m_series(None, 2).to_text())

# Every coefficient equals the stored golden table exactly.
for r, K in ((1, 5), (2, 4), (3, 4)):
    rows = check_against_golden("binomial", r, K)
    print(f"r={r}: {sum(ok for *_, ok in rows)}/{len(rows)} coefficients match")

# Substituting a numeric r into the symbolic-r series gives the same table.
assert binomial_np_series(None, 3).substitute({"r": 2}) == binomial_np_series(2, 3)
