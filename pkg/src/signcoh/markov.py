"""Frozen-row dynamics on the Markov quiver under the cyclic sequence 1, 2, 3, ...

The Markov quiver has double arrows ``1 -> 2 -> 3 -> 1``.  Mutation at any
vertex reverses all arrows, so mutating at 1, relabelling ``2, 3, 1`` as
``1, 2, 3`` and reversing every arrow (frozen ones included) returns the
same quiver.  That composite acts on the frozen row as the map ``rho``,
and ``n`` steps of ``1, 2, 3, 1, ...`` are ``rho`` iterated ``n`` times up to
a sign and a cyclic relabelling.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Optional, Sequence

from .errors import DomainError, FalsificationError, HorizonExceeded
from .mutation import ExchangeMatrix, mutate, mutate_sequence
from .signs import SignVector, sign_vector

__all__ = [
    "MARKOV_B",
    "markov_matrix",
    "rho",
    "rho_iterates",
    "conjugated_rows",
    "rho_equals_mutation_conjugation",
    "rho5_closed_form",
    "fib",
    "fib_first_component",
    "inequality_escape_step",
    "escape_index",
    "stabilization_time_markov",
    "counterexample_trace",
    "STABLE",
]

MARKOV_B = ((0, 2, -2), (-2, 0, 2), (2, -2, 0))
STABLE = SignVector((-1, 1, -1))
ESCAPE_PATTERN = SignVector((1, -1, 1))


def markov_matrix(*frozen_rows: Sequence[int]) -> ExchangeMatrix:
    return ExchangeMatrix.from_blocks(MARKOV_B, frozen_rows)


def rho(a: Sequence[int]) -> tuple[int, int, int]:
    a1, a2, a3 = a
    return (-2 * max(a1, 0) - a2, 2 * max(-a1, 0) - a3, a1)


def rho_iterates(a: Sequence[int], steps: int) -> list[tuple[int, int, int]]:
    out = [tuple(a)]
    for _ in range(steps):
        out.append(rho(out[-1]))
    return out


def conjugated_rows(a: Sequence[int], steps: int) -> list[tuple[int, int, int]]:
    """Frozen rows along ``1, 2, 3, 1, ...`` pulled back to ``rho`` coordinates.

    After ``n`` real mutations, label ``i`` of the rotated quiver is original
    vertex ``((i - 1 + n) mod 3) + 1``, and every arrow reversal contributes a
    factor ``-1``.
    """
    seq = [(j % 3) + 1 for j in range(steps)]
    trace = mutate_sequence(markov_matrix(a), seq)
    out = []
    for n, m in enumerate(trace):
        row = m.frozen[0]
        s = -1 if n % 2 else 1
        out.append(tuple(s * row[(i + n) % 3] for i in range(3)))
    return out


def rho_equals_mutation_conjugation(a: Sequence[int], steps: int) -> bool:
    if steps < 1:
        raise DomainError("steps must be at least 1")
    return conjugated_rows(a, steps) == rho_iterates(a, steps)


def rho5_closed_form(a1: int, a2: int, a3: int) -> tuple[int, int, int]:
    """``rho^5`` of ``(-a1, a2, -a3)`` for nonnegative, not all zero ``a_i``."""
    if min(a1, a2, a3) < 0 or (a1, a2, a3) == (0, 0, 0):
        raise DomainError("rho^5 closed form needs nonnegative a_i, not all zero")
    return (-4 * a1 - 4 * a2 - a3, 9 * a1 + 4 * a2 + 4 * a3, -4 * a1 - a2 - 2 * a3)


@lru_cache(maxsize=None)
def fib(n: int) -> int:
    """Fibonacci numbers with ``fib(1) = fib(2) = 1``."""
    if n < 0:
        raise DomainError("negative Fibonacci index")
    a, b = 0, 1
    for _ in range(n):
        a, b = b, a + b
    return a


def _g(n: int, a1: int, a2: int, a3: int) -> int:
    return (fib(n + 3) - 1) * a1 - (fib(n + 2) - 1) * a2 + (fib(n + 1) - 1) * a3


def fib_first_component(n: int, a1: int, a2: int, a3: int) -> int:
    """First component of ``rho^n(a1, -a2, a3)`` while ``(+,-,+)`` persists."""
    if n < 0:
        raise DomainError("n must be nonnegative")
    return (-1) ** n * _g(n, a1, a2, a3)


def inequality_escape_step(a1: int, a2: int, a3: int, horizon: int = 200) -> Optional[int]:
    """First step at which the paired Fibonacci inequalities break.

    The ``n``-th pair requires ``g(2n-2) > 0 > g(2n-1)`` where
    ``g(k) = (f_{k+3}-1) a1 - (f_{k+2}-1) a2 + (f_{k+1}-1) a3``.  Returns
    the step ``k`` of the first failing half, or ``None`` if none fails up
    to ``horizon``.
    """
    for n in range(1, horizon // 2 + 2):
        left, right = 2 * n - 2, 2 * n - 1
        if left <= horizon and not _g(left, a1, a2, a3) > 0:
            return left
        if right <= horizon and not _g(right, a1, a2, a3) < 0:
            return right
    return None


def escape_index(a1: int, a2: int, a3: int, horizon: int = 200) -> int:
    """First ``n`` at which ``rho^n(a1, -a2, a3)`` leaves the pattern ``(+,-,+)``.

    Termination for positive integers follows from the golden-ratio limit
    of the Fibonacci inequalities, which only an irrational ratio
    ``a1 : a2 : a3`` could satisfy forever.  Exhausting ``horizon`` is
    reported as ``HorizonExceeded`` with the trace attached.
    """
    if min(a1, a2, a3) <= 0:
        raise DomainError("escape_index needs positive a_i")
    if horizon < 1:
        raise DomainError("horizon must be at least 1")
    a = (a1, -a2, a3)
    trace = [a]
    for n in range(horizon + 1):
        if sign_vector(a) != ESCAPE_PATTERN:
            return n
        a = rho(a)
        trace.append(a)
    raise HorizonExceeded(
        f"(+,-,+) persisted for {horizon} steps from {(a1, -a2, a3)}", trace
    )


def stabilization_time_markov(a: Sequence[int], horizon: int = 200) -> Optional[int]:
    """Smallest ``T`` with sign ``(-,+,-)`` at every ``T <= n <= horizon``, else ``None``."""
    if tuple(a) == (0, 0, 0):
        raise DomainError("initial vector must be nonzero")
    T = None
    a1, a2, a3 = a
    for n in range(horizon + 1):
        if a1 < 0 and a2 > 0 and a3 < 0:
            if T is None:
                T = n
        else:
            T = None
        # rho, inlined for the exhaustive scans
        a1, a2, a3 = -2 * max(a1, 0) - a2, 2 * max(-a1, 0) - a3, a1
    return T


def counterexample_trace(a3: int, steps: int) -> list[ExchangeMatrix]:
    """Mutate ``1, 2, 1, 2, ...`` with frozen rows ``(1, -1, a3)`` and ``(1, -1, -a3)``.

    Both rows must stay ``((-1)^n, (-1)^(n+1), +-a3)``; any departure raises
    ``FalsificationError``.  The second row witnesses that no common sign
    vector emerges: its third sign is opposite (or both are 0).
    """
    if steps < 1:
        raise DomainError("steps must be at least 1")
    m = markov_matrix((1, -1, a3), (1, -1, -a3))
    trace = [m]
    for n in range(1, steps + 1):
        m = mutate(m, 1 if n % 2 else 2)
        trace.append(m)
        s = (-1) ** n
        if m.frozen != ((s, -s, a3), (s, -s, -a3)):
            raise FalsificationError(f"step {n}: frozen rows {m.frozen} off the period-2 orbit", trace)
    return trace
