"""JSON reading and writing of exchange matrices, sequences and sign data.

Integers outside the exactly-representable double range are written as
decimal strings; readers accept either form.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any, Union

from .errors import DomainError
from .mutation import ExchangeMatrix

_SAFE = 2**53


class MatrixFormatError(ValueError):
    """A matrix file could not be parsed; carries line/column when known."""

    def __init__(self, message, line=None, column=None):
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(message + where)
        self.line = line
        self.column = column


def encode_int(x: int) -> Union[int, str]:
    return x if -_SAFE < x < _SAFE else str(x)


def decode_int(v: Any) -> int:
    if isinstance(v, bool):
        raise MatrixFormatError(f"expected an integer, got {v!r}")
    if isinstance(v, int):
        return v
    if isinstance(v, str):
        try:
            return int(v.strip(), 10)
        except ValueError:
            raise MatrixFormatError(f"expected a decimal integer string, got {v!r}") from None
    if isinstance(v, float) and v.is_integer() and abs(v) < _SAFE:
        return int(v)
    raise MatrixFormatError(f"expected an integer, got {v!r}")


def encode_fraction(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def matrix_to_json(bhat: ExchangeMatrix) -> dict:
    return {
        "n_mutable": bhat.n_mutable,
        "n_frozen": bhat.n_frozen,
        "rows": [[encode_int(x) for x in row] for row in bhat.rows],
    }


def matrix_from_json(obj: Any) -> ExchangeMatrix:
    if not isinstance(obj, dict):
        raise MatrixFormatError("matrix document must be a JSON object")
    try:
        n = decode_int(obj["n_mutable"])
        m = decode_int(obj["n_frozen"])
        raw = obj["rows"]
    except KeyError as exc:
        raise MatrixFormatError(f"missing key {exc.args[0]!r}") from None
    if not isinstance(raw, list) or not all(isinstance(r, list) for r in raw):
        raise MatrixFormatError("'rows' must be a list of lists")
    rows = [[decode_int(x) for x in r] for r in raw]
    try:
        return ExchangeMatrix(n, m, rows)
    except DomainError as exc:
        raise MatrixFormatError(str(exc)) from None


def loads_matrix(text: str) -> ExchangeMatrix:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MatrixFormatError(exc.msg, exc.lineno, exc.colno) from None
    return matrix_from_json(obj)


def load_matrix(path) -> ExchangeMatrix:
    return loads_matrix(Path(path).read_text())


def dumps_matrix(bhat: ExchangeMatrix) -> str:
    return json.dumps(matrix_to_json(bhat))


def dump_json(obj: Any) -> str:
    """Canonical serialization used for reports (stable key order)."""
    return json.dumps(obj, sort_keys=True, indent=2)
