"""Walk the built-in four-vertex example and watch the C-matrix evolve.

Mutation at k flips column k of the coefficient block and shears the other
columns.  With principal coefficients every column of the C-matrix keeps a
single sign at every step, which is printed alongside.
"""

from signcoh.harness import load_example22
from signcoh.mutation import mutate_sequence
from signcoh.signs import column_sign_coherent

bhat, seq, expected = load_example22()
print("exchange matrix B:")
for row in bhat.principal:
    print("  ", row)

for n, m in enumerate(mutate_sequence(bhat, seq)):
    step = "start" if n == 0 else f"after mu_{seq[n - 1]}"
    agrees = [list(r) for r in m.frozen] == expected[n]
    print(f"\nC[{n}] ({step}); matches reference: {agrees}; "
          f"column sign-coherent: {column_sign_coherent(m.frozen)}")
    for row in m.frozen:
        print("  ", " ".join(f"{x:3d}" for x in row))
