"""Picard groups as finitely presented abelian groups."""

from torsionlab.picard import (
    PIC_A1,
    annihilator_bound,
    cyclic_order,
    elliptic_delta,
    interpolate_detLn,
    m2bar_chain_group,
    moduli_genus2_groups,
    printed_detLn,
)

for name, G in moduli_genus2_groups().items():
    print(f"{name:<8} = {G.describe()}")

G = m2bar_chain_group()
print("\nidentity chain group:", G.describe())
print("5w - delta - Delta'(L^2) vanishes:", G.contains(G.element(w=5, delta=-1, Dp2=-1)))

print("\nelliptic curves, Pic = Z/12 omega")
for d in range(1, 7):
    D = elliptic_delta(d) % PIC_A1
    print(f"  d={d}: Delta(L_d) = {D:>2} omega, order {cyclic_order(D, PIC_A1)}")

print("\ndet pi_* L^n from five seed values (g=2)")
for n in range(-4, 6):
    print(f"  n={n:>2}: interpolated {interpolate_detLn(2, n)}  closed form {tuple(map(str, printed_detLn(2, n)))}")

print("\nq-exponent forced by the relation model")
for g, q, B in [(2, 2, 9), (2, 2, 18), (2, 3, 12), (3, 2, 18), (3, 3, 12)]:
    print(f"  g={g} q={q} B={B}: {annihilator_bound(g, q, B)}")
