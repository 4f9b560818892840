"""Special maps, step by step.

A g-special map is a periodic function Z -> Z/p^k of small difference degree
that scales like n^g under n -> m^2 n.  Here we compute the whole group of
them for a few small parameter sets and look at what is inside.
"""

import numpy as np

from torsionlab.special_maps import (
    PeriodicMap,
    cross_check_kernel,
    degree,
    is_g_special,
    minimal_annihilating_exponent,
    special_kernel,
)

# n -> n^2 with period 25 and values mod 5 has difference degree 2
mono = PeriodicMap.monomial(5, 1, 2, 2)
print("degree of n^2 over Z/5, period 25:", degree(mono))
print("is it 2-special?", bool(is_g_special(mono, 2)))

# a random table is almost never special; the verdict says why
rng = np.random.default_rng(0)
junk = PeriodicMap(5, 1, 2, tuple(rng.integers(0, 5, 25)))
print("random table:", is_g_special(junk, 2).witness)

# the full kernel for p=5, g=2 contains only multiples of n^2
K = special_kernel(5, 1, 2, 2)
print(f"\n(p,k,N,g)=(5,1,2,2): {K.size} special maps")
for gen in K.generators:
    print("  generator values[:10] =", gen.values[:10])

# with p = 3 the small-prime exclusion matters: more maps survive
K3 = special_kernel(3, 1, 2, 1)
print(f"\n(p,k,N,g)=(3,1,2,1): {K3.size} special maps (n -> n alone would give 3)")

# over Z/25 at g=4 the kernel is bigger than {lambda n^4}, but p kills the excess
K4 = special_kernel(5, 2, 2, 4)
print(f"\n(p,k,N,g)=(5,2,2,4): {K4.size} maps; smallest e with p^e killing phi(n)-n^g phi(1):",
      minimal_annihilating_exponent(K4))

# three independent ways of counting the same kernel
cc = cross_check_kernel(5, 1, 2, 3)
print("\ncross-check at (5,1,2,3):", cc)
