"""The Markov quiver under 1, 2, 3, 1, ...: one map does all the work.

Mutating at vertex 1, rotating the labels and reversing every arrow brings
the quiver back to itself, so the cyclic sequence is a single map rho
iterated on the frozen row.  Every nonzero start eventually sits at
(-, +, -).  The alternating sequence 1, 2, 1, ... behaves differently: the
pair of rows below never agrees on a sign in the third slot.
"""

from signcoh import markov as mk
from signcoh.signs import sign_vector

a = (7, -4, 9)
print(f"rho orbit of {a}:")
for n, x in enumerate(mk.rho_iterates(a, 10)):
    print(f"  n={n:2d}  {str(x):18s} {sign_vector(x)}")
print("stabilization time:", mk.stabilization_time_markov(a))
print("rho agrees with the conjugated mutation sequence:", mk.rho_equals_mutation_conjugation(a, 12))

print("\nescape from (+,-,+) for (a1, -a2, a3):")
for b in [(1, 1, 1), (1, 3, 1), (25, 67, 43)]:
    print(f"  {b}: escapes at step {mk.escape_index(*b)}, "
          f"inequalities first fail at {mk.inequality_escape_step(*b)}")

worst = max(
    (mk.stabilization_time_markov((x, y, z)), (x, y, z))
    for x in range(-6, 7) for y in range(-6, 7) for z in range(-6, 7) if (x, y, z) != (0, 0, 0)
)
print(f"\nslowest start in [-6, 6]^3: {worst[1]} with T = {worst[0]}")

trace = mk.counterexample_trace(3, 6)
print("\nalternating 1, 2, 1, ... with rows (1,-1,3) and (1,-1,-3):")
for n, m in enumerate(trace):
    print(f"  n={n}  " + "  ".join(str(sign_vector(r)) for r in m.frozen))
