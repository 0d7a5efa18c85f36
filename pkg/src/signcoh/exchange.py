"""Exchange-graph distance, monotonicity and balance of mutation sequences.

Seeds are identified with their principal-coefficient matrices: two
labelled seeds are the same node iff their ``2N x N`` extended matrices
agree entrywise.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .errors import DomainError
from .mutation import ExchangeMatrix, mutate, with_principal_coefficients

__all__ = [
    "SeedNode",
    "canonical_key",
    "distance",
    "MonotoneVerdict",
    "is_monotone_prefix",
    "default_max_depth",
    "SequenceDiagnostics",
    "balance_diagnostics",
    "random_sequence",
    "GENERATOR_NAME",
]

GENERATOR_NAME = "python-random-MT19937"


def _int_bytes(x: int) -> bytes:
    length = (x.bit_length() + 8) // 8
    return length.to_bytes(4, "big") + x.to_bytes(length, "big", signed=True)


def canonical_key(bhat: ExchangeMatrix) -> bytes:
    """Injective byte encoding: dimension header then big-endian two's-complement entries."""
    parts = [bhat.n_mutable.to_bytes(4, "big"), bhat.n_frozen.to_bytes(4, "big")]
    for row in bhat.rows:
        for x in row:
            parts.append(_int_bytes(x))
    return b"".join(parts)


@dataclass(frozen=True)
class SeedNode:
    matrix: ExchangeMatrix
    canonical_key: bytes = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "canonical_key", canonical_key(self.matrix))

    @classmethod
    def principal(cls, b) -> "SeedNode":
        return cls(with_principal_coefficients(b))

    def mutate(self, k: int) -> "SeedNode":
        return SeedNode(mutate(self.matrix, k))

    def __eq__(self, other):
        if not isinstance(other, SeedNode):
            return NotImplemented
        return self.canonical_key == other.canonical_key

    def __hash__(self):
        return hash(self.canonical_key)


def _as_node(x) -> SeedNode:
    return x if isinstance(x, SeedNode) else SeedNode(x)


def distance(a, b, max_depth: int) -> Optional[int]:
    """Length of a shortest mutation path from ``a`` to ``b``, or ``None`` beyond ``max_depth``.

    Bidirectional breadth-first search.  Nodes are deduplicated by canonical
    key, and an edge straight back to the parent (the same direction twice)
    is never expanded since mutation is an involution.
    """
    a, b = _as_node(a), _as_node(b)
    if a.matrix.shape != b.matrix.shape:
        raise DomainError(f"dimension mismatch: {a.matrix.shape} vs {b.matrix.shape}")
    if max_depth < 0:
        raise DomainError("max_depth must be nonnegative")
    if a.canonical_key == b.canonical_key:
        return 0
    n = a.matrix.n_mutable
    # key -> depth, and frontier entries (node, direction that produced it)
    seen = ({a.canonical_key: 0}, {b.canonical_key: 0})
    frontier = ([(a.matrix, 0)], [(b.matrix, 0)])
    depth = [0, 0]
    while depth[0] + depth[1] < max_depth:
        side = 0 if len(frontier[0]) <= len(frontier[1]) else 1
        here, there = seen[side], seen[1 - side]
        nxt = []
        best = None
        for mat, came in frontier[side]:
            for k in range(1, n + 1):
                if k == came:
                    continue
                child = mutate(mat, k)
                key = canonical_key(child)
                if key in here:
                    continue
                here[key] = depth[side] + 1
                if key in there:
                    total = depth[side] + 1 + there[key]
                    best = total if best is None else min(best, total)
                nxt.append((child, k))
        if best is not None:
            return best
        if not nxt:
            return None
        frontier = (nxt, frontier[1]) if side == 0 else (frontier[0], nxt)
        depth[side] += 1
    return None


def default_max_depth(n_mutable: int) -> int:
    if n_mutable <= 3:
        return 8
    if n_mutable <= 5:
        return 6
    return 4


@dataclass(frozen=True)
class MonotoneVerdict:
    """``status`` is ``'verified'``, ``'violated'`` or ``'unknown'``.

    For ``violated``, ``step`` is the first ``n`` with
    ``dist(n+1) <= dist(n)``; for ``unknown`` it is the first prefix length
    whose distance the budget could not certify.
    """

    status: str
    step: Optional[int] = None
    verified_to: int = 0

    def to_json(self) -> dict:
        return {"status": self.status, "step": self.step, "verified_to": self.verified_to}


def is_monotone_prefix(b, seq: Sequence[int], max_depth: Optional[int] = None) -> MonotoneVerdict:
    """Certify that the seeds along ``seq`` move strictly away from the start.

    Since ``dist(n) <= n``, strict increase from ``dist(0) = 0`` is the
    same as every prefix being a geodesic, i.e. ``dist(n) = n``.  Prefix
    ``n`` is checked by a search of depth ``n - 1`` for a shorter path; that
    needs ``n - 1 < max_depth``'s budget, so prefixes longer than
    ``max_depth`` come back ``unknown``.
    """
    if not seq:
        raise DomainError("empty sequence")
    start = SeedNode.principal(b)
    n_mut = start.matrix.n_mutable
    if max_depth is None:
        max_depth = default_max_depth(n_mut)
    for k in seq:
        if not 1 <= k <= n_mut:
            raise DomainError(f"mutation direction {k} out of range 1..{n_mut}")
    node = start.matrix
    for n in range(1, len(seq) + 1):
        if n > max_depth:
            return MonotoneVerdict("unknown", n, n - 1)
        node = mutate(node, seq[n - 1])
        shorter = distance(start, SeedNode(node), n - 1)
        if shorter is not None:
            # dist(n) < n = dist(n-1) + 1, so the step n-1 -> n does not increase
            return MonotoneVerdict("violated", n - 1, n - 1)
    return MonotoneVerdict("verified", None, len(seq))


@dataclass(frozen=True)
class SequenceDiagnostics:
    length: int
    counts: dict[int, int]
    frequencies: dict[int, Fraction]
    balance_floor: Fraction
    balanced_proxy: bool
    weakly_balanced_proxy: bool
    delta: Fraction
    window: int
    monotone_verified_to: Optional[int] = None

    def to_json(self) -> dict:
        return {
            "length": self.length,
            "counts": {str(k): v for k, v in sorted(self.counts.items())},
            "frequencies": {str(k): f"{v.numerator}/{v.denominator}" for k, v in sorted(self.frequencies.items())},
            "balance_floor": f"{self.balance_floor.numerator}/{self.balance_floor.denominator}",
            "balanced_proxy": self.balanced_proxy,
            "weakly_balanced_proxy": self.weakly_balanced_proxy,
            "delta": f"{self.delta.numerator}/{self.delta.denominator}",
            "window": self.window,
            "monotone_verified_to": self.monotone_verified_to,
        }


def balance_diagnostics(seq: Sequence[int], n_mutable: int, delta, window: int) -> SequenceDiagnostics:
    """Finite proxies for "balanced" and "weakly balanced".

    ``balanced_proxy``: every direction has running frequency ``>= delta``
    at every prefix length ``n >= window``.  ``weakly_balanced_proxy``:
    every direction occurs in every contiguous block of ``window`` steps.
    """
    delta = Fraction(delta)
    if not seq:
        raise DomainError("empty sequence")
    if n_mutable < 1:
        raise DomainError("n_mutable must be positive")
    if not 0 < delta <= Fraction(1, n_mutable):
        raise DomainError(f"delta must lie in (0, 1/{n_mutable}], got {delta}")
    if window < n_mutable:
        raise DomainError(f"window must be at least {n_mutable}, got {window}")
    if any(not 1 <= k <= n_mutable for k in seq):
        raise DomainError("sequence direction out of range")
    dirs = range(1, n_mutable + 1)
    running = Counter()
    balanced = len(seq) >= window
    for n, k in enumerate(seq, start=1):
        running[k] += 1
        if n >= window and balanced:
            if any(running[d] < delta * n for d in dirs):
                balanced = False
    weak = len(seq) >= window
    block = Counter(seq[:window])
    if weak and any(block[d] == 0 for d in dirs):
        weak = False
    for i in range(window, len(seq)):
        if not weak:
            break
        block[seq[i]] += 1
        block[seq[i - window]] -= 1
        if any(block[d] == 0 for d in dirs):
            weak = False
    counts = {d: running[d] for d in dirs}
    freqs = {d: Fraction(c, len(seq)) for d, c in counts.items()}
    return SequenceDiagnostics(
        length=len(seq),
        counts=counts,
        frequencies=freqs,
        balance_floor=min(freqs.values()),
        balanced_proxy=balanced,
        weakly_balanced_proxy=weak,
        delta=delta,
        window=window,
    )


def random_sequence(n_mutable: int, length: int, seed: int, forbid_repeat: bool = True) -> list[int]:
    """Seeded uniform random directions in ``1..n_mutable``.

    With ``forbid_repeat`` each step is uniform over the ``n_mutable - 1``
    directions different from the previous one.
    """
    if n_mutable < 2:
        raise DomainError("need at least two mutable directions")
    if length < 0:
        raise DomainError("length must be nonnegative")
    rng = random.Random(seed)
    seq: list[int] = []
    for _ in range(length):
        if forbid_repeat and seq:
            k = rng.randrange(1, n_mutable)
            if k >= seq[-1]:
                k += 1
        else:
            k = rng.randrange(1, n_mutable + 1)
        seq.append(k)
    return seq
