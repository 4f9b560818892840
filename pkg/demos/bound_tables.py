"""Tables of the annihilation constants against the baseline 4 d^3."""

from torsionlab.bounds import big_N_of_g, faltings_chai_bound, n_p_g, torsion_bound_exponents

print(f"{'d':>4} {'g':>3} {'bound':>8} {'4d^3':>10} {'ratio':>10}")
for d in (1, 2, 3, 6, 7, 21, 27, 28):
    for g in (2, 4, 6):
        b = torsion_bound_exponents(d, g)
        fc = faltings_chai_bound(d)
        print(f"{d:>4} {g:>3} {b.total_bound:>8} {fc:>10} {fc // b.total_bound:>10}")

print("\nexponents n(p, g)")
for g in range(1, 7):
    row = {p: n_p_g(p, g) for p in (2, 3, 5, 7, 11) if p <= 2 * g - 1}
    print(f"  g={g}: {row}   N(g) = {big_N_of_g(g)}")

# boundary behaviour shows up in the notes
for d, g in [(3, 2), (49, 10)]:
    b = torsion_bound_exponents(d, g)
    print(f"\nd={d} g={g}: exponents={b.exponents} notes={b.notes}")
