"""Distances in the exchange graph, and what they say about sequences.

A mutation sequence is monotone when each step moves strictly farther
from the start.  For the rank-2 and Markov seeds the reduced sequences
keep going straight out; an immediate repeat undoes a step; and the
finite-type A2 seed comes back around its pentagon.
"""

from signcoh.exchange import SeedNode, distance, is_monotone_prefix
from signcoh.markov import MARKOV_B
from signcoh.mutation import mutate_sequence

cases = {
    "rank 2, p=2 q=3": ([[0, -2], [3, 0]], [1, 2, 1, 2, 1, 2, 1, 2]),
    "Markov cyclic": (MARKOV_B, [1, 2, 3, 1, 2, 3, 1]),
    "A2": ([[0, 1], [-1, 0]], [1, 2, 1, 2, 1, 2]),
    "immediate repeat": ([[0, -2], [3, 0]], [1, 2, 2, 1]),
}
for name, (b, seq) in cases.items():
    start = SeedNode.principal(b)
    trace = mutate_sequence(start.matrix, seq)
    dists = [distance(start, SeedNode(m), 8) for m in trace]
    verdict = is_monotone_prefix(b, seq, max_depth=8)
    print(f"{name:18s} distances {dists}  ->  {verdict.status}"
          + (f" at step {verdict.step}" if verdict.step is not None else ""))
