"""Sp_4(F_2) permuting the six odd theta characteristics."""

from collections import Counter

from torsionlab.symplectic import (
    cycle_type,
    elementary_matrix,
    enumerate_forms,
    forms_fixed_by,
    lagrangian_enumerate,
    lagrangian_formula,
    sp4_s6_action,
    verify_delta_in_commutators,
)

print("parities at g=2:", Counter(par for _, par in enumerate_forms(2)))

act = sp4_s6_action()
print(f"|Sp_4(F_2)| = {act.order}, homomorphism={act.homomorphism}, faithful={act.faithful}, onto S_6={act.onto}")

# conjugacy classes of S_6 as seen through the action
print("cycle types:", Counter(cycle_type(p) for p in act.perms.tolist()))

for i, j in [(1, 4), (1, 1), (3, 3)]:
    E = elementary_matrix(i, j, 2)
    fixed = [q.values for q in forms_fixed_by(E)]
    print(f"E{i},{j}: permutation {act.permutation(E)}, fixes forms with values {fixed}")

r = verify_delta_in_commutators(3)
print(f"\ng=3: {len(r.witness['witnesses'])} Delta generators with commutator witnesses")
for label, w in list(r.witness["witnesses"].items())[:4]:
    print(f"  {label} = [{w['a']}, {w['b']}]")

print("\nLagrangian subspaces")
for p, rr in [(2, 1), (2, 2), (3, 1), (3, 2), (2, 3)]:
    print(f"  p={p} r={rr}: enumerated {lagrangian_enumerate(p, rr)}, product formula {lagrangian_formula(p, rr)}")
