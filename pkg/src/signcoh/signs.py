"""Sign vectors, sign patterns and stabilization of frozen-row signs."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Optional, Sequence, Union

from .errors import DomainError
from .mutation import ExchangeMatrix, mutate_sequence

__all__ = [
    "sign",
    "SignVector",
    "sign_vector",
    "column_sign_coherent",
    "sign_trace",
    "Stabilization",
    "detect_stabilization",
    "approx_matches",
    "pattern_to_json",
]

_CHARS = {1: "+", 0: "0", -1: "-"}
_VALUES = {"+": 1, "0": 0, "-": -1}


def sign(a: int) -> int:
    return (a > 0) - (a < 0)


class SignVector(tuple):
    """A tuple of signs in ``{+1, 0, -1}``; prints as e.g. ``'-+0-'``."""

    __slots__ = ()

    def __new__(cls, values: Iterable[int]):
        vals = tuple(values)
        for v in vals:
            if v not in (1, 0, -1):
                raise DomainError(f"sign components must be +1, 0 or -1, got {v!r}")
        return super().__new__(cls, vals)

    @classmethod
    def parse(cls, text: str) -> "SignVector":
        try:
            return cls(_VALUES[c] for c in text)
        except KeyError as exc:
            raise DomainError(f"bad sign character {exc.args[0]!r}") from None

    @property
    def is_strict(self) -> bool:
        return 0 not in self

    def flipped(self) -> "SignVector":
        return SignVector(-v for v in self)

    def swapped(self) -> "SignVector":
        """Reverse the components (the transposition for 2-vectors)."""
        return SignVector(reversed(self))

    def __str__(self):
        return "".join(_CHARS[v] for v in self)

    def __repr__(self):
        return f"SignVector('{self}')"


def sign_vector(row: Sequence[int]) -> SignVector:
    if len(row) == 0:
        raise DomainError("sign vector of an empty row")
    return SignVector(sign(x) for x in row)


def column_sign_coherent(c: Sequence[Sequence[int]]) -> bool:
    """Every column is nonzero and its nonzero entries share one sign."""
    if not c or not c[0]:
        raise DomainError("empty matrix")
    for j in range(len(c[0])):
        seen = {sign(row[j]) for row in c} - {0}
        if len(seen) != 1:
            return False
    return True


def sign_trace(bhat: ExchangeMatrix, seq: Iterable[int]) -> list[tuple[SignVector, ...]]:
    """Per step, the sign vectors of every frozen row."""
    if bhat.n_frozen < 1:
        raise DomainError("sign trace needs at least one frozen row")
    return [tuple(sign_vector(r) for r in m.frozen) for m in mutate_sequence(bhat, seq)]


def approx_matches(weak: Sequence[int], strict: Sequence[int]) -> bool:
    """``weak ≈ strict``: no component has opposite nonzero signs."""
    if len(weak) != len(strict):
        raise DomainError("sign vectors of different lengths")
    if 0 in strict:
        raise DomainError("right-hand side must be a strict sign vector")
    return all(w * s >= 0 for w, s in zip(weak, strict))


def _compatible(u: Sequence[int], v: Sequence[int]) -> bool:
    return all(a * b >= 0 for a, b in zip(u, v))


@dataclass(frozen=True)
class Stabilization:
    """Finite-horizon stabilization witness.

    The regime holds at every index ``n`` with ``T < n <= last``; ``tail``
    lists the common sign vector at each of those indices.  ``tail_length``
    is how many indices back the verdict, nothing more: a finite trace can
    never certify the infinite tail.
    """

    T: int
    last: int
    tail: tuple[SignVector, ...]
    strict: bool

    @property
    def tail_length(self) -> int:
        return len(self.tail)


Reference = Union[Callable[[int], Sequence[int]], Mapping[int, Sequence[int]]]


def _step_ok(rows, require_strict, ref):
    live = [r for r in rows if any(r)]
    if not live:
        return None
    first = live[0]
    if require_strict:
        if not all(r.is_strict for r in live) or any(r != first for r in live):
            return None
        if ref is not None and tuple(first) != tuple(ref):
            return None
        return first
    # relaxed (non-conjectural): nonzero components must agree across rows
    for r in live[1:]:
        if not _compatible(first, r):
            return None
    if ref is not None and not all(_compatible(r, ref) for r in live):
        return None
    merged = [0] * len(first)
    for r in live:
        merged = [m or x for m, x in zip(merged, r)]
    return SignVector(merged)


def detect_stabilization(
    trace: Sequence[Sequence[SignVector]],
    require_strict: bool = True,
    reference: Optional[Reference] = None,
    start: int = 0,
) -> Optional[Stabilization]:
    """Smallest ``T`` after which all nonzero frozen rows share a strict sign vector.

    ``trace[i]`` holds the frozen-row sign vectors at index ``start + i``.
    Returns ``None`` if the last index of the trace already fails.  With a
    ``reference`` (map or callable from index to sign vector) the common
    vector must also equal the reference at each index.  ``require_strict=False``
    is an exploratory mode that tolerates zeros; it is not the stabilized
    regime.
    """
    if not trace:
        return None
    if callable(reference):
        ref_at = reference
    elif reference is not None:
        ref_at = reference.__getitem__
    else:
        ref_at = None
    tail = []
    last = start + len(trace) - 1
    T = start
    for i in range(len(trace) - 1, -1, -1):
        n = start + i
        rows = [SignVector(r) for r in trace[i]]
        got = _step_ok(rows, require_strict, ref_at(n) if ref_at else None)
        if got is None:
            T = n
            break
        tail.append(got)
    else:
        # the whole trace is in the regime; T is the first index
        tail.pop()
    if not tail:
        return None
    tail.reverse()
    return Stabilization(T=T, last=last, tail=tuple(tail), strict=require_strict)


def pattern_to_json(pattern: Mapping[int, Sequence[int]]) -> dict[str, str]:
    return {str(n): str(SignVector(v)) for n, v in sorted(pattern.items())}
