"""Experiment runner: reproductions, randomized conjecture runs, verification grids.

Every command returns a report dictionary::

    {"schema_version": 1, "kind": ..., "header": {...}, "spec": {...},
     "payload": {...}, "ok": bool}

``header`` holds the wall-clock timestamp and duration and is the only part
that varies between identical runs; ``spec`` echoes every input (the matrix
itself included) so ``replay`` can re-run it.
"""

from __future__ import annotations

import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from fractions import Fraction
from importlib import resources
from typing import Any, Optional, Sequence

from . import markov as mk
from .errors import DomainError, FalsificationError, HorizonExceeded
from .exchange import (
    GENERATOR_NAME,
    balance_diagnostics,
    default_max_depth,
    distance,
    is_monotone_prefix,
    random_sequence,
    SeedNode,
)
from .mutation import ExchangeMatrix, mutate_sequence, with_principal_coefficients
from .rank2 import Rank2Config, sigma_reg, verify_rank2
from .serialize import encode_fraction, encode_int, matrix_from_json, matrix_to_json
from .signs import detect_stabilization, sign_vector

SCHEMA_VERSION = 1

__all__ = [
    "ExperimentSpec",
    "load_example22",
    "resolve_matrix",
    "build_sequence",
    "cmd_mutate",
    "cmd_conjecture",
    "cmd_dist",
    "cmd_rank2_verify",
    "cmd_markov_verify",
    "replay",
    "payload_bytes",
    "csv_sign_rows",
]


def load_example22() -> tuple[ExchangeMatrix, list[int], list]:
    """Built-in four-vertex example: matrix, sequence and the expected C-matrices."""
    text = resources.files("signcoh").joinpath("data/example22.json").read_text()
    doc = json.loads(text)
    return matrix_from_json(doc), list(doc["sequence"]), doc["c_matrices"]


def _parse_builtin(name: str):
    name = name.strip().lower()
    if name == "example22":
        return "example22", None
    if name == "markov":
        return "markov", None
    if name.startswith("rank2"):
        inner = name[len("rank2"):].strip("():, ")
        try:
            p, q = (int(x) for x in inner.split(","))
        except ValueError:
            raise DomainError(f"rank2 builtin needs two integers, e.g. rank2:2,3; got {name!r}") from None
        return "rank2", Rank2Config(p, q)
    raise DomainError(f"unknown builtin matrix {name!r}")


def resolve_matrix(builtin: Optional[str] = None, matrix: Optional[ExchangeMatrix] = None,
                   rows: Optional[Sequence[Sequence[int]]] = None) -> ExchangeMatrix:
    """Matrix from a builtin name or an explicit value, frozen rows optionally replaced."""
    if (builtin is None) == (matrix is None):
        raise DomainError("exactly one matrix source is required")
    if matrix is None:
        kind, cfg = _parse_builtin(builtin)
        if kind == "example22":
            matrix = load_example22()[0]
        elif kind == "markov":
            matrix = with_principal_coefficients(mk.MARKOV_B)
        else:
            matrix = with_principal_coefficients(cfg.principal(0))
    if rows:
        matrix = matrix.with_frozen_rows(rows)
    return matrix


@dataclass
class ExperimentSpec:
    """Inputs of one run.

    ``sequence`` is one of ``{"explicit": [...]}``,
    ``{"random": {"length": L, "seed": S, "forbid_repeat": bool}}`` or
    ``{"named": "alternating" | "cyclic123" | "cyclic" | "example22"}``.
    Named sequences have length ``horizon``.
    """

    builtin: Optional[str] = None
    matrix: Optional[dict] = None
    rows: Optional[list] = None
    sequence: dict = field(default_factory=lambda: {"explicit": []})
    horizon: int = 100
    delta: Optional[str] = None
    window: Optional[int] = None
    max_depth: Optional[int] = None
    probe: bool = True

    def __post_init__(self):
        if (self.builtin is None) == (self.matrix is None):
            raise DomainError("exactly one of builtin / matrix must be given")
        if len(self.sequence) != 1:
            raise DomainError("exactly one sequence source must be given")
        if self.horizon < 1:
            raise DomainError("horizon must be at least 1")

    def to_json(self) -> dict:
        d = asdict(self)
        if self.rows is not None:
            d["rows"] = [[encode_int(x) for x in r] for r in self.rows]
        return d

    @classmethod
    def from_json(cls, d: dict) -> "ExperimentSpec":
        return cls(**d)

    def resolve(self) -> ExchangeMatrix:
        m = matrix_from_json(self.matrix) if self.matrix is not None else None
        return resolve_matrix(self.builtin, m, self.rows)


def build_sequence(seq_spec: dict, n_mutable: int, horizon: int) -> tuple[list[int], Optional[dict]]:
    """The mutation sequence and, for random ones, the PRNG record."""
    (kind, val), = seq_spec.items()
    if kind == "explicit":
        seq = [int(k) for k in val]
        bad = [k for k in seq if not 1 <= k <= n_mutable]
        if bad:
            raise DomainError(f"direction {bad[0]} out of range 1..{n_mutable}")
        return seq, None
    if kind == "random":
        seed = int(val["seed"])
        seq = random_sequence(n_mutable, int(val["length"]), seed, bool(val.get("forbid_repeat", True)))
        return seq, {"generator": GENERATOR_NAME, "seed": seed}
    if kind == "named":
        if val == "alternating":
            return [1 + (j % 2) for j in range(horizon)], None
        if val in ("cyclic", "cyclic123"):
            if val == "cyclic123" and n_mutable < 3:
                raise DomainError("cyclic123 needs at least 3 mutable directions")
            period = 3 if val == "cyclic123" else n_mutable
            return [1 + (j % period) for j in range(horizon)], None
        if val == "example22":
            return load_example22()[1], None
        raise DomainError(f"unknown named sequence {val!r}")
    raise DomainError(f"unknown sequence source {kind!r}")


def _report(kind: str, spec: Any, payload: dict, ok: bool, started: float) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": kind,
        "header": {
            "generated_at": datetime.now(timezone.utc).isoformat(timespec="seconds"),
            "duration_s": round(time.perf_counter() - started, 6),
        },
        "spec": spec,
        "payload": payload,
        "ok": ok,
    }


def payload_bytes(report: dict) -> bytes:
    """Deterministic bytes of everything except the header."""
    body = {k: v for k, v in report.items() if k != "header"}
    return json.dumps(body, sort_keys=True).encode()


def _spec_echo(spec: ExperimentSpec, matrix: ExchangeMatrix) -> dict:
    d = spec.to_json()
    d["resolved_matrix"] = matrix_to_json(matrix)
    return d


def cmd_mutate(spec: ExperimentSpec) -> dict:
    """Full matrix trace and sign trace of the frozen rows."""
    started = time.perf_counter()
    bhat = spec.resolve()
    seq, prng = build_sequence(spec.sequence, bhat.n_mutable, spec.horizon)
    trace = mutate_sequence(bhat, seq)
    payload = {
        "sequence": seq,
        "prng": prng,
        "matrices": [matrix_to_json(m)["rows"] for m in trace],
        "signs": [[str(sign_vector(r)) for r in m.frozen] for m in trace] if bhat.n_frozen else [],
    }
    if spec.builtin and spec.builtin.strip().lower() == "example22" and not spec.rows:
        expected = load_example22()[2]
        if seq == load_example22()[1]:
            payload["matches_reference"] = [list(map(list, m.frozen)) == c for m, c in zip(trace, expected)]
    ok = all(payload.get("matches_reference", [True]))
    return _report("mutate", _spec_echo(spec, bhat), payload, ok, started)


def cmd_conjecture(spec: ExperimentSpec) -> dict:
    """Run a sequence and collect the evidence relevant to asymptotic sign coherence.

    With ``probe`` the unit rows ``e_1..e_N`` are appended to the frozen
    block.  A common regular pattern has to be shared by every nonzero row,
    so a single row cannot exhibit failure on its own; the probes give it
    company without affecting it, since frozen rows evolve independently.

    ``ok`` is false for a potential counterexample (no stabilization although
    the sequence was not shown non-monotone and passed the balance proxy) and
    for a rank-2 run that disagrees with the closed-form oracle.
    """
    started = time.perf_counter()
    bhat = spec.resolve()
    n = bhat.n_mutable
    if bhat.n_frozen == 0:
        raise DomainError("conjecture runs need at least one frozen row (use --row)")
    user_rows = len(bhat.frozen)
    if spec.probe:
        probes = [tuple(1 if i == j else 0 for j in range(n)) for i in range(n)]
        bhat = bhat.with_frozen_rows(list(bhat.frozen) + probes)
    seq, prng = build_sequence(spec.sequence, n, spec.horizon)
    if not seq:
        raise DomainError("empty mutation sequence")
    trace = mutate_sequence(bhat, seq)
    signs = [tuple(sign_vector(r) for r in m.frozen) for m in trace]
    stab = detect_stabilization(signs)
    depth = spec.max_depth if spec.max_depth is not None else default_max_depth(n)
    mono = is_monotone_prefix(bhat.principal, seq, depth)
    delta = Fraction(spec.delta) if spec.delta is not None else Fraction(1, 2 * n)
    window = spec.window if spec.window is not None else 2 * n
    bal = balance_diagnostics(seq, n, delta, window)
    bal_json = bal.to_json()
    bal_json["monotone_verified_to"] = mono.verified_to
    payload = {
        "sequence": seq,
        "prng": prng,
        "n_user_rows": user_rows,
        "n_probe_rows": bhat.n_frozen - user_rows,
        "signs": [[str(s) for s in step] for step in signs],
        "stabilization": None if stab is None else {
            "T": stab.T,
            "last": stab.last,
            "tail_length": stab.tail_length,
        },
        "sigma_reg_candidate": None if stab is None else [str(s) for s in stab.tail],
        "monotone": mono.to_json(),
        "balance": bal_json,
    }
    rank2 = _rank2_cross_check(spec, bhat, seq, signs, user_rows)
    if rank2 is not None:
        payload["rank2"] = rank2
    hypotheses_hold = mono.status != "violated" and bal.balanced_proxy
    payload["potential_counterexample"] = hypotheses_hold and stab is None
    ok = not payload["potential_counterexample"] and (rank2 is None or rank2["consistent"])
    return _report("conjecture", _spec_echo(spec, bhat), payload, ok, started)


def _rank2_cross_check(spec, bhat, seq, signs, user_rows) -> Optional[dict]:
    """For rank-2 builtins on ``1, 2, 1, ...``: stabilization against ``sigma_reg`` next to the oracle.

    ``T_sigma_reg`` equals the largest nonnegative oracle deviation index
    (0 when there is none), which is what the cross-check records.
    """
    if not spec.builtin or _parse_builtin(spec.builtin)[0] != "rank2":
        return None
    if any(k != 1 + (j % 2) for j, k in enumerate(seq)):
        return None
    cfg = _parse_builtin(spec.builtin)[1]
    user = [step[:user_rows] for step in signs]
    stab = detect_stabilization(user, reference=sigma_reg)
    rows = []
    for a in bhat.frozen[:user_rows]:
        if not any(a):
            continue
        rep = verify_rank2(cfg, a[0], a[1], (0, len(seq)))
        rows.append({
            "a": list(a),
            "classification": rep.classification.to_json(),
            "oracle_T_forward": max(rep.deviation_indices, default=0),
        })
    oracle_T = max((r["oracle_T_forward"] for r in rows), default=0)
    T = None if stab is None else stab.T
    return {"T_sigma_reg": T, "rows": rows, "consistent": T == oracle_T}


def cmd_dist(spec: ExperimentSpec) -> dict:
    """Distance between the principal seed of the matrix and its image under the sequence."""
    started = time.perf_counter()
    bhat = spec.resolve()
    n = bhat.n_mutable
    start = SeedNode.principal(bhat.principal)
    seq, prng = build_sequence(spec.sequence, n, spec.horizon)
    target = mutate_sequence(start.matrix, seq)[-1]
    depth = spec.max_depth if spec.max_depth is not None else default_max_depth(n)
    d = distance(start, SeedNode(target), depth)
    payload = {"sequence": seq, "prng": prng, "max_depth": depth, "distance": d}
    return _report("dist", _spec_echo(spec, bhat), payload, True, started)


def _rank2_cell(args):
    p, q, a1, a2, lo, hi = args
    return verify_rank2(Rank2Config(p, q), a1, a2, (lo, hi)).to_json()


def _grid_map(fn, cells, jobs):
    if jobs and jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            return list(ex.map(fn, cells, chunksize=64))
    return [fn(c) for c in cells]


def cmd_rank2_verify(configs: Sequence[tuple[int, int]], a_range: int = 8,
                     window: tuple[int, int] = (-40, 40), jobs: int = 1) -> dict:
    """Simulation versus closed form over all nonzero ``a`` in ``[-a_range, a_range]^2``."""
    started = time.perf_counter()
    cfgs = sorted({(Rank2Config(p, q).p, q) for p, q in configs})
    cells = [(p, q, a1, a2, window[0], window[1])
             for p, q in cfgs
             for a1 in range(-a_range, a_range + 1)
             for a2 in range(-a_range, a_range + 1)
             if (a1, a2) != (0, 0)]
    results = _grid_map(_rank2_cell, cells, jobs)
    mismatches = [r for r in results if not r["matches"]]
    max_dev = max((r["T"] or 0) for r in results) if results else 0
    payload = {
        "cells": len(results),
        "mismatches": mismatches,
        "max_abs_deviation_index": max_dev,
        "n0_extension_cells": sum(1 for r in results if r["classification"]["n0_extension"]),
        "variants": _count(r["classification"]["variant"] for r in results),
        "per_cell_T": {f"{r['p']},{r['q']}:{r['a'][0]},{r['a'][1]}": r["T"] for r in results},
    }
    spec = {"configs": [list(c) for c in cfgs], "a_range": a_range, "window": list(window)}
    return _report("rank2-verify", spec, payload, not mismatches, started)


def _count(items) -> dict:
    out: dict = {}
    for x in items:
        out[x] = out.get(x, 0) + 1
    return dict(sorted(out.items()))


def _markov_stab_cell(args):
    a, horizon = args
    return list(a), mk.stabilization_time_markov(a, horizon)


def cmd_markov_verify(bound: int = 15, horizon: int = 200, conj_steps: int = 12,
                      counterexample_steps: int = 100, jobs: int = 1) -> dict:
    """Exhaustive checks of the Markov-quiver claims over boxes of half-width ``bound``."""
    if bound < 1:
        raise DomainError("range bound must be at least 1")
    started = time.perf_counter()
    rng = range(-bound, bound + 1)
    failures: dict[str, list] = {"conjugation": [], "rho5": [], "fibonacci": [], "stabilization": [], "counterexample": []}

    for a in ((x, y, z) for x in rng for y in rng for z in rng):
        if not mk.rho_equals_mutation_conjugation(a, conj_steps):
            failures["conjugation"].append(list(a))

    for a in ((x, y, z) for x in range(bound + 1) for y in range(bound + 1) for z in range(bound + 1)):
        if a == (0, 0, 0):
            continue
        it = mk.rho_iterates((-a[0], a[1], -a[2]), 5)[-1]
        if it != mk.rho5_closed_form(*a):
            failures["rho5"].append(list(a))

    escapes = []
    for a in ((x, y, z) for x in range(1, bound + 1) for y in range(1, bound + 1) for z in range(1, bound + 1)):
        try:
            e = mk.escape_index(*a, horizon=horizon)
        except HorizonExceeded as exc:
            failures["fibonacci"].append({"a": list(a), "reason": str(exc)})
            continue
        escapes.append(e)
        x = (a[0], -a[1], a[2])
        ok = mk.inequality_escape_step(*a, horizon=horizon) == e
        for n in range(e):
            ok = ok and x[0] == mk.fib_first_component(n, *a)
            x = mk.rho(x)
        if not ok:
            failures["fibonacci"].append({"a": list(a), "escape": e})

    cells = [(a, horizon) for a in ((x, y, z) for x in rng for y in rng for z in rng) if a != (0, 0, 0)]
    stab = _grid_map(_markov_stab_cell, cells, jobs)
    Ts = [T for _, T in stab if T is not None]
    failures["stabilization"] = [a for a, T in stab if T is None]

    for a3 in rng:
        try:
            trace = mk.counterexample_trace(a3, counterexample_steps)
        except FalsificationError as exc:
            failures["counterexample"].append({"a3": a3, "reason": str(exc)})
            continue
        signs = [tuple(sign_vector(r) for r in m.frozen) for m in trace]
        if detect_stabilization(signs) is not None:
            failures["counterexample"].append({"a3": a3, "reason": "stabilized"})

    payload = {
        "failures": failures,
        "max_stabilization_T": max(Ts) if Ts else None,
        "max_escape_index": max(escapes) if escapes else None,
    }
    spec = {"bound": bound, "horizon": horizon, "conj_steps": conj_steps,
            "counterexample_steps": counterexample_steps}
    ok = not any(failures.values())
    return _report("markov-verify", spec, payload, ok, started)


def replay(report: dict) -> dict:
    """Re-run the command recorded in ``report``."""
    kind, spec = report["kind"], report["spec"]
    if kind in ("mutate", "conjecture", "dist"):
        s = {k: v for k, v in spec.items() if k != "resolved_matrix"}
        fn = {"mutate": cmd_mutate, "conjecture": cmd_conjecture, "dist": cmd_dist}[kind]
        return fn(ExperimentSpec.from_json(s))
    if kind == "rank2-verify":
        return cmd_rank2_verify([tuple(c) for c in spec["configs"]], spec["a_range"], tuple(spec["window"]))
    if kind == "markov-verify":
        return cmd_markov_verify(spec["bound"], spec["horizon"], spec["conj_steps"], spec["counterexample_steps"])
    raise DomainError(f"unknown report kind {kind!r}")


def csv_sign_rows(report: dict) -> list[list[str]]:
    """Flat ``step,row,signs`` records from a mutate or conjecture report."""
    if report["kind"] not in ("mutate", "conjecture"):
        raise DomainError(f"CSV export is only available for per-step sign data, not {report['kind']!r}")
    out = [["step", "row", "signs"]]
    for n, step in enumerate(report["payload"]["signs"]):
        for r, s in enumerate(step, start=1):
            out.append([str(n), str(r), s])
    return out
