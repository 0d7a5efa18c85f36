"""Rank 2: classify a few frozen rows and compare simulation with the closed forms.

For B = [[0, -p], [q, 0]] with pq >= 4 every frozen row ends up following
the alternating pattern ((-)^(n-1), (-)^n) in both directions.  Rows of mixed
sign inside a quadratic cone follow it everywhere; all others deviate at
exactly three consecutive indices (counting a transitional zero as
agreeing with either sign).
"""

from signcoh.rank2 import Rank2Config, rank2_trace, sigma_reg, verify_rank2
from signcoh.signs import sign_vector

cfg = Rank2Config(2, 3)
for a in [(1, 1), (-3, 2), (-1, 5), (-5, 1), (4, -1)]:
    rep = verify_rank2(cfg, *a, window=(-12, 12))
    cls = rep.classification
    print(f"a = {a}: {cls.variant}" + (f" (N = {cls.N})" if cls.N is not None else ""))
    trace = rank2_trace(cfg, *a, -6, 6)
    line = " ".join(
        str(sign_vector(v)) if sign_vector(v) == sigma_reg(n) else f"[{sign_vector(v)}]"
        for n, v in trace.items()
    )
    print("   n=-6..6:", line)
    print(f"   closed form agrees on [-12, 12]: {rep.matches}; "
          f"deviations at {list(rep.deviation_indices)}; predicted trio {list(rep.predicted_deviation_indices)}")
