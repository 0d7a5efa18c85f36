"""Extended exchange matrices and matrix mutation.

An extended exchange matrix is an ``(N+M) x N`` integer matrix whose first
``N`` rows (the principal part ``B``) are skew-symmetrizable.  The bottom
``M`` rows are the frozen rows; for principal coefficients they form the
C-matrix.

Entries are Python ``int`` throughout, so nothing overflows however long a
mutation sequence runs.  Mutation directions are 1-based in every public
function, matching the usual convention in the literature.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Optional, Sequence

from .errors import DomainError

__all__ = [
    "ExchangeMatrix",
    "mutate",
    "mutate_sequence",
    "find_skew_symmetrizer",
    "is_irreducible",
    "with_principal_coefficients",
    "support_components",
]

Matrix = tuple[tuple[int, ...], ...]


def _pos(a: int) -> int:
    return a if a > 0 else 0


def _as_rows(rows: Iterable[Iterable[int]]) -> Matrix:
    out = []
    for row in rows:
        r = []
        for x in row:
            if isinstance(x, bool) or not isinstance(x, int):
                # accept exact integers only (e.g. numpy ints via __index__)
                try:
                    x = x.__index__()
                except AttributeError:
                    raise TypeError(f"matrix entries must be integers, got {x!r}") from None
            r.append(int(x))
        out.append(tuple(r))
    return tuple(out)


@dataclass(frozen=True)
class ExchangeMatrix:
    """Immutable ``(N+M) x N`` extended exchange matrix.

    ``rows`` holds all ``N+M`` rows; the first ``n_mutable`` of them are the
    principal part.  Construction checks shapes and that the principal part
    admits a skew-symmetrizer.
    """

    n_mutable: int
    n_frozen: int
    rows: Matrix

    def __post_init__(self):
        rows = _as_rows(self.rows)
        object.__setattr__(self, "rows", rows)
        n, m = self.n_mutable, self.n_frozen
        if n < 1 or m < 0:
            raise DomainError(f"need n_mutable >= 1 and n_frozen >= 0, got {n}, {m}")
        if len(rows) != n + m:
            raise DomainError(f"expected {n + m} rows, got {len(rows)}")
        for i, row in enumerate(rows):
            if len(row) != n:
                raise DomainError(f"row {i + 1} has {len(row)} entries, expected {n}")
        if find_skew_symmetrizer(rows[:n]) is None:
            raise DomainError("principal part is not skew-symmetrizable")

    @classmethod
    def _trusted(cls, n: int, m: int, rows: Matrix) -> "ExchangeMatrix":
        # skips validation; only for results of mutation of a valid matrix
        obj = object.__new__(cls)
        object.__setattr__(obj, "n_mutable", n)
        object.__setattr__(obj, "n_frozen", m)
        object.__setattr__(obj, "rows", rows)
        return obj

    @classmethod
    def from_blocks(cls, b: Sequence[Sequence[int]], frozen: Sequence[Sequence[int]] = ()) -> "ExchangeMatrix":
        """Stack a principal part ``b`` over frozen rows."""
        b = _as_rows(b)
        frozen = _as_rows(frozen)
        return cls(len(b), len(frozen), b + frozen)

    @property
    def principal(self) -> Matrix:
        return self.rows[: self.n_mutable]

    @property
    def frozen(self) -> Matrix:
        """The bottom ``M x N`` block (the C-matrix for principal coefficients)."""
        return self.rows[self.n_mutable:]

    @property
    def shape(self) -> tuple[int, int]:
        return (self.n_mutable + self.n_frozen, self.n_mutable)

    def entry(self, i: int, j: int) -> int:
        """1-based entry ``b_ij``."""
        return self.rows[i - 1][j - 1]

    def mutate(self, k: int, eps: int = 1) -> "ExchangeMatrix":
        return mutate(self, k, eps)

    def without_frozen_row(self, r: int) -> "ExchangeMatrix":
        """Drop frozen row ``r`` (1-based among the frozen rows)."""
        if not 1 <= r <= self.n_frozen:
            raise DomainError(f"frozen row {r} out of range 1..{self.n_frozen}")
        idx = self.n_mutable + r - 1
        rows = self.rows[:idx] + self.rows[idx + 1:]
        return ExchangeMatrix._trusted(self.n_mutable, self.n_frozen - 1, rows)

    def with_frozen_rows(self, frozen: Sequence[Sequence[int]]) -> "ExchangeMatrix":
        """Same principal part, frozen block replaced by ``frozen``."""
        return ExchangeMatrix.from_blocks(self.principal, frozen)

    def __str__(self):
        width = max(len(str(x)) for row in self.rows for x in row)
        lines = []
        for i, row in enumerate(self.rows):
            if i == self.n_mutable and self.n_frozen:
                lines.append("-" * ((width + 1) * self.n_mutable))
            lines.append(" ".join(str(x).rjust(width) for x in row))
        return "\n".join(lines)


def mutate(bhat: ExchangeMatrix, k: int, eps: int = 1) -> ExchangeMatrix:
    """Mutate ``bhat`` in direction ``k`` (1-based).

    Entries in row or column ``k`` change sign; every other entry becomes
    ``b_ij + [-eps*b_ik]_+ * b_kj + b_ik * [eps*b_kj]_+``.  The result does
    not depend on ``eps``.
    """
    n = bhat.n_mutable
    if isinstance(k, bool) or not isinstance(k, int) or not 1 <= k <= n:
        raise DomainError(f"mutation direction {k!r} out of range 1..{n}")
    if eps not in (1, -1):
        raise DomainError(f"sign choice must be +1 or -1, got {eps!r}")
    k0 = k - 1
    rows = bhat.rows
    row_k = rows[k0]
    if eps == 1:
        pos_k = tuple(_pos(x) for x in row_k)
    else:
        pos_k = tuple(_pos(-x) for x in row_k)
    out = []
    for i, row in enumerate(rows):
        if i == k0:
            out.append(tuple(-x for x in row))
            continue
        b_ik = row[k0]
        if b_ik == 0:
            new = list(row)
        else:
            neg_ik = _pos(-eps * b_ik)
            new = [x + neg_ik * bk + b_ik * pk for x, bk, pk in zip(row, row_k, pos_k)]
        new[k0] = -b_ik
        out.append(tuple(new))
    return ExchangeMatrix._trusted(n, bhat.n_frozen, tuple(out))


def mutate_sequence(bhat: ExchangeMatrix, seq: Iterable[int], eps: int = 1) -> list[ExchangeMatrix]:
    """Return the trace ``[bhat, mu_{k1}(bhat), mu_{k2} mu_{k1}(bhat), ...]``."""
    trace = [bhat]
    for k in seq:
        trace.append(mutate(trace[-1], k, eps))
    return trace


def _square(b) -> Matrix:
    b = _as_rows(b)
    n = len(b)
    if any(len(row) != n for row in b):
        raise DomainError("expected a square matrix")
    return b


def support_components(b) -> list[list[int]]:
    """Connected components (0-based vertex lists) of the support graph of ``b``.

    Vertices ``i != j`` are adjacent when ``b_ij != 0`` or ``b_ji != 0``.
    """
    b = _square(b)
    n = len(b)
    seen = [False] * n
    comps = []
    for s in range(n):
        if seen[s]:
            continue
        seen[s] = True
        comp, stack = [], [s]
        while stack:
            i = stack.pop()
            comp.append(i)
            for j in range(n):
                if not seen[j] and j != i and (b[i][j] or b[j][i]):
                    seen[j] = True
                    stack.append(j)
        comps.append(sorted(comp))
    return comps


def find_skew_symmetrizer(b) -> Optional[tuple[int, ...]]:
    """Minimal positive integer diagonal ``D`` with ``DB`` skew-symmetric.

    Returns the diagonal as a tuple, or ``None`` when no skew-symmetrizer
    exists.  On each connected block of the support graph ``D`` is unique
    up to a positive scalar; the returned one is gcd-reduced per block.
    """
    b = _square(b)
    n = len(b)
    for i in range(n):
        if b[i][i] != 0:
            return None
        for j in range(i + 1, n):
            x, y = b[i][j], b[j][i]
            if (x == 0) != (y == 0):
                return None
            if x and (x > 0) == (y > 0):
                return None
    d: list[Optional[Fraction]] = [None] * n
    for comp in support_components(b):
        root = comp[0]
        d[root] = Fraction(1)
        stack = [root]
        while stack:
            i = stack.pop()
            for j in range(n):
                if j == i or b[i][j] == 0:
                    continue
                # d_i b_ij = -d_j b_ji
                want = -d[i] * b[i][j] / b[j][i]
                if d[j] is None:
                    d[j] = want
                    stack.append(j)
                elif d[j] != want:
                    return None
        den = 1
        for i in comp:
            den = lcm(den, d[i].denominator)
        ints = [int(d[i] * den) for i in comp]
        g = 0
        for v in ints:
            g = gcd(g, v)
        for i, v in zip(comp, ints):
            d[i] = Fraction(v // g)
    return tuple(int(x) for x in d)


def is_irreducible(b) -> bool:
    """True iff ``[N]`` admits no split ``I | J`` with ``b_ij = 0`` on ``I x J``.

    For a skew-symmetrizable matrix ``b_ij = 0`` iff ``b_ji = 0``, so this is
    the same as connectedness of the support graph, which is what is
    computed.
    """
    b = _square(b)
    return len(support_components(b)) == 1


def with_principal_coefficients(b) -> ExchangeMatrix:
    """Stack ``b`` over the ``N x N`` identity."""
    b = _square(b)
    if find_skew_symmetrizer(b) is None:
        raise DomainError("principal part is not skew-symmetrizable")
    n = len(b)
    ident = tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))
    return ExchangeMatrix(n, n, b + ident)
