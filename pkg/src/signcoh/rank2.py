"""Exact closed forms for rank-2 mutation dynamics.

The principal part alternates between ``[[0, -p], [q, 0]]`` (even steps)
and its negative (odd steps) along the double-infinite alternating
sequence; index ``n > 0`` is reached by mutating ``1, 2, 1, ...`` and
``n < 0`` by ``2, 1, 2, ...``.  With ``kappa = sqrt(pq)`` and
``nu = sqrt(p/q)``, the frozen row is an integer combination of the
Chebyshev values ``U_n(kappa/2)``.

Even-index values ``U_{2j}(kappa/2)`` are integers and odd-index ones are
integer multiples of ``sqrt(pq)``.  Every product with ``nu`` or ``1/nu``
that occurs lands back in the integers because ``nu * sqrt(pq) = p`` and
``sqrt(pq) / nu = q``, so no irrational number is ever formed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .errors import DomainError
from .signs import SignVector, sign, sign_vector

__all__ = [
    "Rank2Config",
    "QuadExt",
    "cheb_u",
    "quad_sign",
    "rank2_trace",
    "closed_form",
    "Rank2Classification",
    "classify",
    "PatternDescriptor",
    "predicted_pattern",
    "sigma_reg",
    "Rank2Report",
    "verify_rank2",
]


@dataclass(frozen=True)
class Rank2Config:
    p: int
    q: int

    def __post_init__(self):
        if self.p < 1 or self.q < 1:
            raise DomainError(f"p and q must be positive, got p={self.p}, q={self.q}")
        if self.p * self.q < 4:
            raise DomainError(f"rank-2 infinite type needs pq >= 4, got pq={self.p * self.q}")

    @property
    def m(self) -> int:
        return self.p * self.q

    def swapped(self) -> "Rank2Config":
        return Rank2Config(self.q, self.p)

    def principal(self, n: int = 0) -> tuple[tuple[int, int], tuple[int, int]]:
        """Principal part at index ``n``."""
        s = 1 if n % 2 == 0 else -1
        return ((0, -s * self.p), (s * self.q, 0))


@dataclass(frozen=True)
class QuadExt:
    """``x + y*sqrt(m)`` in ``Z[sqrt(m)]``."""

    x: int
    y: int
    m: int

    def _check(self, other: "QuadExt"):
        if other.m != self.m:
            raise DomainError(f"radicands differ: {self.m} vs {other.m}")

    def __add__(self, other):
        if isinstance(other, int):
            return QuadExt(self.x + other, self.y, self.m)
        self._check(other)
        return QuadExt(self.x + other.x, self.y + other.y, self.m)

    __radd__ = __add__

    def __neg__(self):
        return QuadExt(-self.x, -self.y, self.m)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return QuadExt(self.x * other, self.y * other, self.m)
        self._check(other)
        return QuadExt(
            self.x * other.x + self.m * self.y * other.y,
            self.x * other.y + self.y * other.x,
            self.m,
        )

    __rmul__ = __mul__

    def sign(self) -> int:
        return quad_sign(self)

    def __str__(self):
        return f"{self.x}{self.y:+}√{self.m}"


def quad_sign(v: QuadExt) -> int:
    """Exact sign of ``x + y*sqrt(m)``."""
    if v.m <= 0:
        raise DomainError("radicand must be positive")
    sx, sy = sign(v.x), sign(v.y)
    if sx == 0 or sx == sy:
        return sy if sx == 0 else sx
    if sy == 0:
        return sx
    # opposite signs: the larger magnitude wins
    lhs, rhs = v.x * v.x, v.m * v.y * v.y
    if lhs == rhs:
        return 0
    return sx if lhs > rhs else sy


_CHEB: dict[int, list[int]] = {}


def _u(config: Rank2Config, n: int) -> int:
    """Integer ``u`` with ``U_n(kappa/2) = u`` (n even) or ``u*sqrt(pq)`` (n odd)."""
    if n < -1:
        raise DomainError(f"Chebyshev index must be >= -1, got {n}")
    m = config.m
    us = _CHEB.setdefault(m, [0, 1])  # u_{-1}, u_0
    # U_{k+1} = sqrt(m) U_k - U_{k-1}; for odd k the sqrt(m) factors meet
    while len(us) < n + 2:
        k = len(us) - 2
        us.append(m * us[-1] - us[-2] if k % 2 else us[-1] - us[-2])
    return us[n + 1]


def cheb_u(n: int, config: Rank2Config) -> QuadExt:
    """``U_n(kappa/2)`` exactly, for ``n >= -1``."""
    u = _u(config, n)
    return QuadExt(u, 0, config.m) if n % 2 == 0 else QuadExt(0, u, config.m)


# Products appearing in the closed forms, as integers.
def _nu_u(config: Rank2Config, n: int) -> int:
    """``nu * U_n`` for odd ``n`` (equals ``p * u_n``)."""
    assert n % 2 == 1 or n == -1
    return config.p * _u(config, n)


def _nuinv_u(config: Rank2Config, n: int) -> int:
    """``U_n / nu`` for odd ``n`` (equals ``q * u_n``)."""
    assert n % 2 == 1 or n == -1
    return config.q * _u(config, n)


def _step_forward(config: Rank2Config, n: int, a1: int, a2: int) -> tuple[int, int]:
    """From index ``n >= 0`` to ``n+1``, sign choice +1."""
    p, q = config.p, config.q
    if n % 2 == 0:
        return -a1, a2 - max(-a1, 0) * p
    return a1 - max(-a2, 0) * q, -a2


def _step_backward(config: Rank2Config, n: int, a1: int, a2: int) -> tuple[int, int]:
    """From index ``n <= 0`` to ``n-1``, sign choice -1."""
    p, q = config.p, config.q
    if n % 2 == 0:
        return a1 + max(a2, 0) * q, -a2
    return -a1, a2 + max(a1, 0) * p


def rank2_trace(config: Rank2Config, a1_0: int, a2_0: int, n_min: int, n_max: int) -> dict[int, tuple[int, int]]:
    """Frozen row ``(a1^(n), a2^(n))`` for ``n_min <= n <= n_max``."""
    if a1_0 == 0 and a2_0 == 0:
        raise DomainError("initial frozen row must be nonzero")
    if not n_min <= 0 <= n_max:
        raise DomainError("window must contain 0")
    out = {0: (a1_0, a2_0)}
    a = (a1_0, a2_0)
    for n in range(0, n_max):
        a = _step_forward(config, n, *a)
        out[n + 1] = a
    a = (a1_0, a2_0)
    for n in range(0, n_min, -1):
        a = _step_backward(config, n, *a)
        out[n - 1] = a
    return dict(sorted(out.items()))


# --- classification -------------------------------------------------------

QUADRANT_PP = "QuadrantPP"
QUADRANT_MM = "QuadrantMM"
QUADRANT_PM = "QuadrantPM"
CASE1 = "Case1"
CASE2 = "Case2"
CASE3 = "Case3"


@dataclass(frozen=True)
class Rank2Classification:
    """Which closed form governs the initial row.

    ``N`` is the escape index for ``Case2``/``Case3`` and ``None`` otherwise.
    ``N = 0`` is admitted for both: ratios ``a2/a1 >= p`` (Case 2) or
    ``a2/a1 < 1/q`` (Case 3) escape after a single step.
    """

    variant: str
    N: Optional[int] = None
    config: Optional[Rank2Config] = field(default=None, compare=False, repr=False)
    a: tuple[int, int] = field(default=(0, 0), compare=False, repr=False)

    @property
    def uses_n0_extension(self) -> bool:
        return self.variant in (CASE2, CASE3) and self.N == 0

    def to_json(self) -> dict:
        return {"variant": self.variant, "N": self.N, "n0_extension": self.uses_n0_extension}


def _nu_ratio(config: Rank2Config, i: int, j: int) -> tuple[int, int]:
    """``nu * U_i / U_j`` as a fraction ``(num, den)`` with ``|i - j| = 1``.

    ``den == 0`` encodes +infinity.
    """
    ui, uj = _u(config, i), _u(config, j)
    if i % 2 == 1 or i == -1:
        # nu * sqrt(m) ui / uj = p ui / uj
        return config.p * ui, uj
    # nu ui / (sqrt(m) uj) = ui / (q uj)
    return ui, config.q * uj


def _le(r: tuple[int, int], s: tuple[int, int]) -> bool:
    """``r <= s`` for nonnegative fractions; ``den == 0`` is +infinity."""
    if s[1] == 0:
        return True
    if r[1] == 0:
        return False
    return r[0] * s[1] <= s[0] * r[1]


def _lt(r, s) -> bool:
    return _le(r, s) and not _le(s, r)


def classify(config: Rank2Config, a1_0: int, a2_0: int) -> Rank2Classification:
    if a1_0 == 0 and a2_0 == 0:
        raise DomainError("initial frozen row must be nonzero")
    a = (a1_0, a2_0)
    if a1_0 >= 0 and a2_0 >= 0:
        return Rank2Classification(QUADRANT_PP, None, config, a)
    if a1_0 <= 0 and a2_0 <= 0:
        return Rank2Classification(QUADRANT_MM, None, config, a)
    if a1_0 > 0:
        return Rank2Classification(QUADRANT_PM, None, config, a)
    A1, A2 = -a1_0, a2_0
    p, q = config.p, config.q
    # Case 1 <=> |2 A2 - p A1| * sqrt(q) <= A1 * sqrt(p (pq - 4))
    t = 2 * A2 - p * A1
    if q * t * t <= A1 * A1 * p * (p * q - 4):
        return Rank2Classification(CASE1, None, config, a)
    r = (A2, A1)
    N = 0
    if t > 0:
        # nu U_{N+1}/U_N <= r < nu U_N/U_{N-1}
        while not (_le(_nu_ratio(config, N + 1, N), r) and _lt(r, _nu_ratio(config, N, N - 1))):
            N += 1
        return Rank2Classification(CASE2, N, config, a)
    # nu U_{N-1}/U_N <= r < nu U_N/U_{N+1}
    while not (_le(_nu_ratio(config, N - 1, N), r) and _lt(r, _nu_ratio(config, N, N + 1))):
        N += 1
    return Rank2Classification(CASE3, N, config, a)


# --- closed forms -------------------------------------------------------


def _pp(config: Rank2Config, b1: int, b2: int, n: int) -> tuple[int, int]:
    """Closed form at index ``n`` for a nonnegative initial row ``(b1, b2)``."""
    u, nu_u, nuinv_u = (lambda k: _u(config, k)), (lambda k: _nu_u(config, k)), (lambda k: _nuinv_u(config, k))
    if n == 0:
        return b1, b2
    if n == 1:
        return -b1, b2
    if n == 2:
        return -b1, -b2
    if n > 0 and n % 2 == 0:
        j = n // 2
        return (-b1 * u(2 * j - 2) - b2 * nuinv_u(2 * j - 3), b1 * nu_u(2 * j - 3) + b2 * u(2 * j - 4))
    if n > 0:
        j = (n - 1) // 2
        return (b1 * u(2 * j - 2) + b2 * nuinv_u(2 * j - 3), -b1 * nu_u(2 * j - 1) - b2 * u(2 * j - 2))
    if n % 2 == 0:
        j = (-n - 2) // 2
        return (-b1 * u(2 * j) - b2 * nuinv_u(2 * j + 1), b1 * nu_u(2 * j + 1) + b2 * u(2 * j + 2))
    j = (-n - 1) // 2
    return (b1 * u(2 * j) + b2 * nuinv_u(2 * j + 1), -b1 * nu_u(2 * j - 1) - b2 * u(2 * j))


def _mixed(config: Rank2Config, A1: int, A2: int, n: int) -> tuple[int, int]:
    """Closed form at ``n`` for ``(-A1, A2)`` along the Case-1 expressions."""
    u, nu_u, nuinv_u = (lambda k: _u(config, k)), (lambda k: _nu_u(config, k)), (lambda k: _nuinv_u(config, k))
    if n == 0:
        return -A1, A2
    if n > 0 and n % 2 == 0:
        j = n // 2
        return (-A1 * u(2 * j) + A2 * nuinv_u(2 * j - 1), A1 * nu_u(2 * j - 1) - A2 * u(2 * j - 2))
    if n > 0:
        j = (n - 1) // 2
        return (A1 * u(2 * j) - A2 * nuinv_u(2 * j - 1), -A1 * nu_u(2 * j + 1) + A2 * u(2 * j))
    if n % 2 == 0:
        j = (-n - 2) // 2
        return (A1 * u(2 * j) - A2 * nuinv_u(2 * j + 1), -A1 * nu_u(2 * j + 1) + A2 * u(2 * j + 2))
    j = (-n - 1) // 2
    return (-A1 * u(2 * j) + A2 * nuinv_u(2 * j + 1), A1 * nu_u(2 * j - 1) - A2 * u(2 * j))


def _restart(config: Rank2Config, c: tuple[int, int], at: int, n: int, *, nonpositive: bool) -> tuple[int, int]:
    """Continue from row ``c`` sitting at index ``at`` using the quadrant closed form.

    At odd indices the roles of the two coordinates and of ``p, q`` trade
    places, so the evaluation happens in the swapped configuration.
    """
    swap = at % 2 != 0
    cfg = config.swapped() if swap else config
    b = (c[1], c[0]) if swap else c
    if nonpositive:
        # a nonpositive row at index 0 is a nonnegative one at index -2
        v = _pp(cfg, -b[0], -b[1], n - at + 2)
    else:
        v = _pp(cfg, b[0], b[1], n - at)
    return (v[1], v[0]) if swap else v


def closed_form(config: Rank2Config, classification: Rank2Classification, n: int) -> tuple[int, int]:
    """``(a1^(n), a2^(n))`` from the Chebyshev expressions, valid for every ``n``.

    Each case composes the closed-form expressions on their validity ranges:
    Case 2 follows the mixed-sign expressions up to index ``N+1`` and
    continues with the nonnegative-quadrant form from there; Case 3 does the
    same on the negative side from ``-N-1``.
    """
    v, a = classification.variant, classification.a
    if v == QUADRANT_PP:
        return _pp(config, a[0], a[1], n)
    if v == QUADRANT_MM:
        return _pp(config, -a[0], -a[1], n + 2)
    if v == QUADRANT_PM:
        # (a1, -A2) at 0 is index 1 of the swapped system started from (A2, a1)
        w = _pp(config.swapped(), -a[1], a[0], n + 1)
        return w[1], w[0]
    A1, A2 = -a[0], a[1]
    if v == CASE1:
        return _mixed(config, A1, A2, n)
    N = classification.N
    if v == CASE2:
        if n <= N + 1:
            return _mixed(config, A1, A2, n)
        c = _mixed(config, A1, A2, N + 1)
        if c[0] < 0 or c[1] < 0 or c == (0, 0):
            raise DomainError(f"escape row {c} at {N + 1} is not nonnegative and nonzero")
        return _restart(config, c, N + 1, n, nonpositive=False)
    if v == CASE3:
        if n >= -N - 1:
            return _mixed(config, A1, A2, n)
        c = _mixed(config, A1, A2, -N - 1)
        if c[0] > 0 or c[1] > 0 or c == (0, 0):
            raise DomainError(f"escape row {c} at {-N - 1} is not nonpositive and nonzero")
        return _restart(config, c, -N - 1, n, nonpositive=True)
    raise DomainError(f"unknown classification {v!r}")


# --- sign patterns ------------------------------------------------------


def sigma_reg(n: int) -> SignVector:
    """``((-)^(n-1), (-)^n)``."""
    return SignVector((1 if (n - 1) % 2 == 0 else -1, 1 if n % 2 == 0 else -1))


# sigma_++ at its transitional indices: (strict representative, zero allowed)
_PP_TRANSITION = {
    -1: ((1, -1), (False, True)),
    0: ((1, 1), (True, True)),
    1: ((-1, 1), (True, True)),
    2: ((-1, -1), (True, True)),
    3: ((1, -1), (True, False)),
}


@dataclass(frozen=True)
class PatternDescriptor:
    """``sigma^(n) = base^(n + shift)``, components swapped when ``swapped``.

    ``base`` is ``'reg'`` or ``'++'``.
    """

    base: str
    shift: int = 0
    swapped: bool = False

    def at(self, n: int) -> tuple[SignVector, tuple[bool, bool]]:
        """Predicted strict representative at ``n`` and which components may be 0."""
        if self.base == "reg":
            return sigma_reg(n), (False, False)
        m = n + self.shift
        rep, zero = _PP_TRANSITION.get(m, (tuple(sigma_reg(m)), (False, False)))
        rep = SignVector(rep)
        if self.swapped:
            return rep.swapped(), (zero[1], zero[0])
        return rep, zero

    def matches(self, n: int, observed) -> bool:
        rep, zero = self.at(n)
        return all(o == r or (o == 0 and z) for o, r, z in zip(observed, rep, zero))

    def transitional(self) -> list[int]:
        if self.base == "reg":
            return []
        return sorted(m - self.shift for m in _PP_TRANSITION)

    def predicted_deviations(self) -> list[int]:
        """Indices where the strict representative differs from ``sigma_reg``."""
        return [n for n in self.transitional() if self.at(n)[0] != sigma_reg(n)]

    def to_json(self) -> dict:
        return {"base": self.base, "shift": self.shift, "swapped": self.swapped}


def predicted_pattern(classification: Rank2Classification) -> PatternDescriptor:
    v, N = classification.variant, classification.N
    if v == QUADRANT_PP:
        return PatternDescriptor("++", 0, False)
    if v == QUADRANT_MM:
        return PatternDescriptor("++", 2, False)
    if v == QUADRANT_PM:
        return PatternDescriptor("++", 1, True)
    if v == CASE1:
        return PatternDescriptor("reg")
    if v == CASE2:
        return PatternDescriptor("++", -N - 1, N % 2 == 0)
    if v == CASE3:
        return PatternDescriptor("++", N + 3, N % 2 == 0)
    raise DomainError(f"unknown classification {v!r}")


# --- verification -------------------------------------------------------


@dataclass(frozen=True)
class Rank2Report:
    config: Rank2Config
    a: tuple[int, int]
    window: tuple[int, int]
    classification: Rank2Classification
    descriptor: PatternDescriptor
    closed_form_mismatches: tuple[int, ...]
    pattern_mismatches: tuple[int, ...]
    deviation_indices: tuple[int, ...]
    strict_deviation_indices: tuple[int, ...]
    predicted_deviation_indices: tuple[int, ...]
    T: Optional[int]

    @property
    def matches(self) -> bool:
        return not self.closed_form_mismatches and not self.pattern_mismatches

    def to_json(self) -> dict:
        return {
            "p": self.config.p,
            "q": self.config.q,
            "a": list(self.a),
            "window": list(self.window),
            "classification": self.classification.to_json(),
            "descriptor": self.descriptor.to_json(),
            "matches": self.matches,
            "closed_form_mismatches": list(self.closed_form_mismatches),
            "pattern_mismatches": list(self.pattern_mismatches),
            "deviation_indices": list(self.deviation_indices),
            "strict_deviation_indices": list(self.strict_deviation_indices),
            "predicted_deviation_indices": list(self.predicted_deviation_indices),
            "T": self.T,
        }


def verify_rank2(config: Rank2Config, a1_0: int, a2_0: int, window: tuple[int, int] = (-40, 40)) -> Rank2Report:
    """Compare the simulated trace with the closed form and the predicted sign pattern.

    ``deviation_indices``: where the observed sign vector differs from
    ``sigma_reg`` in any way, zeros included.  ``strict_deviation_indices``:
    where some component has the sign opposite to ``sigma_reg``.
    ``predicted_deviation_indices``: where the predicted pattern's strict
    representative differs from ``sigma_reg`` (three consecutive indices for
    every non-regular pattern).  ``T`` is the largest ``|n|`` among the
    deviations, or ``None`` when there are none.
    """
    lo, hi = window
    trace = rank2_trace(config, a1_0, a2_0, lo, hi)
    cls = classify(config, a1_0, a2_0)
    desc = predicted_pattern(cls)
    cf_bad, pat_bad, dev, strict_dev = [], [], [], []
    for n, a in trace.items():
        if closed_form(config, cls, n) != a:
            cf_bad.append(n)
        s = sign_vector(a)
        if not desc.matches(n, s):
            pat_bad.append(n)
        reg = sigma_reg(n)
        if s != reg:
            dev.append(n)
            if any(x * r < 0 for x, r in zip(s, reg)):
                strict_dev.append(n)
    predicted = [n for n in desc.predicted_deviations() if lo <= n <= hi]
    T = max((abs(n) for n in dev), default=None)
    return Rank2Report(
        config=config,
        a=(a1_0, a2_0),
        window=(lo, hi),
        classification=cls,
        descriptor=desc,
        closed_form_mismatches=tuple(cf_bad),
        pattern_mismatches=tuple(pat_bad),
        deviation_indices=tuple(dev),
        strict_deviation_indices=tuple(strict_dev),
        predicted_deviation_indices=tuple(predicted),
        T=T,
    )
