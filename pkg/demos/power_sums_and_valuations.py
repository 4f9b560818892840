"""Power sums S_r(t) over F_p and their multiplicity at t = 1."""

from torsionlab.polynomials import (
    generating_poly,
    power_sum_poly,
    t1_valuation,
    t1_valuation_by_derivatives,
    verify_degree_divisibility_family,
)
from torsionlab.special_maps import PeriodicMap

p = 7
print(f"S_r(t) = sum n^r t^n over F_{p}")
for r in range(p):
    S = power_sum_poly(r, p)
    print(f"  r={r}: coeffs={S.coeffs}  v_(t-1)={t1_valuation(S)}  by derivatives={t1_valuation_by_derivatives(S)}")

# the valuation drops by one per step, so S_r vanishes at t=1 to order p-1-r
# the generating polynomial of n -> n^r over one period is exactly S_r
phi = PeriodicMap.monomial(p, 1, 1, 3)
print("\ngenerating polynomial of n^3 equals S_3:", generating_poly(phi) == power_sum_poly(3, p))

# degree <= g+1 is the same as a divisibility statement for the generating polynomial
rep = verify_degree_divisibility_family(5, 1, 2, 2)
print("\ndegree vs divisibility, p=5 N=2 g=2:", rep.status)
for name, row in rep.witness["maps"].items():
    print(f"  {name:<12} degree={row['degree']:<3} criteria agree={row['equivalence_holds']}")
