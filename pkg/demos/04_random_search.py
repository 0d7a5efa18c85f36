"""Randomized search for sign stabilization on random rank-3 and rank-4 matrices.

Each trial draws a skew-symmetrizable B, a random frozen row and a seeded
random sequence.  The harness reports when the frozen rows (plus unit
probe rows) settle on a common strict sign vector and whether the
sequence passed the monotonicity and balance checks.  A run that passes
both checks without stabilizing would be flagged as a potential
counterexample; re-running it with a larger distance budget usually
settles it, because sequences that fail to stabilize tend to double back
in the exchange graph.

Sequences are kept short on purpose.  For most matrices of rank 3 and up
the principal part itself grows under mutation, and its entries grow
doubly exponentially: a few dozen random steps already produce numbers
with hundreds of thousands of digits.
"""

import random
from math import lcm

from signcoh.harness import ExperimentSpec, cmd_conjecture
from signcoh.mutation import ExchangeMatrix, is_irreducible
from signcoh.serialize import matrix_to_json


def random_b(rng, n):
    while True:
        d = [rng.choice((1, 2)) for _ in range(n)]
        b = [[0] * n for _ in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                L = lcm(d[i], d[j])
                t = rng.randint(-1, 1)
                b[i][j], b[j][i] = t * L // d[i], -t * L // d[j]
        if is_irreducible(b):
            return b


rng = random.Random(11)
for trial in range(8):
    n = rng.choice((3, 4))
    b = random_b(rng, n)
    row = [rng.randint(-3, 3) for _ in range(n)]
    bhat = ExchangeMatrix.from_blocks(b, [row])
    spec = ExperimentSpec(
        matrix=matrix_to_json(bhat),
        sequence={"random": {"length": 24, "seed": 1000 + trial}},
    )
    p = cmd_conjecture(spec)["payload"]
    if p["potential_counterexample"]:
        spec.max_depth = 12
        p = cmd_conjecture(spec)["payload"]
    stab = p["stabilization"]
    print(f"trial {trial}: N={n} row={row} "
          f"T={stab['T'] if stab else None} monotone={p['monotone']['status']}"
          f"(to {p['monotone']['verified_to']}) balanced={p['balance']['balanced_proxy']} "
          f"counterexample={p['potential_counterexample']}")
