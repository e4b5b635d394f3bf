"""JSON documents for tables, pair/decoherence matrices and finite functions.

Numbers are read from strings exactly (``"9/16"``, ``"0.25"``); JSON floats
stay floats. Subsets are sorted lists of 0-based indices; bitmask integers
are accepted on input.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from ._numeric import parse_number, to_output
from .finite_space import (
    DecoherenceMatrix,
    MeasureSpaceError,
    PairMeasureMatrix,
    QMeasureTable,
    Universe,
    from_decoherence,
    from_pair_matrix,
    members,
)
from .q_integral_finite import FiniteFunction


class DocumentError(ValueError):
    """Malformed input document."""


def _universe(doc) -> Universe:
    labels = doc.get("universe")
    if not isinstance(labels, list) or not all(isinstance(x, str) for x in labels):
        raise DocumentError('"universe" must be a list of labels')
    return Universe(tuple(labels))


def _mask(universe: Universe, s) -> int:
    if isinstance(s, bool):
        raise DocumentError(f"bad subset {s!r}")
    if isinstance(s, int):
        return universe.check(s)
    if not isinstance(s, list):
        raise DocumentError(f"bad subset {s!r}")
    m = 0
    for i in s:
        if isinstance(i, bool) or not isinstance(i, int) or not 0 <= i < universe.n:
            raise DocumentError(f"bad index {i!r} in subset {s!r}")
        m |= 1 << i
    return m


def _number(x):
    try:
        return parse_number(x)
    except (TypeError, ValueError) as e:
        raise DocumentError(str(e)) from None


def _entry(x):
    if isinstance(x, dict):
        if set(x) - {"re", "im"}:
            raise DocumentError(f"bad complex entry {x!r}")
        return _number(x.get("re", 0)), _number(x.get("im", 0))
    return _number(x), Fraction(0)


def table_from_doc(doc) -> QMeasureTable:
    u = _universe(doc)
    if "matrix" in doc:
        return matrix_table_from_doc(doc)
    entries = doc.get("values")
    if not isinstance(entries, list):
        raise DocumentError('"values" must be a list of {"set", "mu"} records')
    vals = [None] * u.size
    for e in entries:
        if not isinstance(e, dict) or "set" not in e or "mu" not in e:
            raise DocumentError(f"bad table entry {e!r}")
        m = _mask(u, e["set"])
        if vals[m] is not None:
            raise DocumentError(f"subset {members(m)} listed twice")
        vals[m] = _number(e["mu"])
    missing = [m for m, v in enumerate(vals) if v is None]
    if missing:
        raise DocumentError(f"table is missing subset {members(missing[0])}")
    return QMeasureTable(u, vals)


def matrix_from_doc(doc):
    """A :class:`PairMeasureMatrix`, or a :class:`DecoherenceMatrix` when any entry is complex."""
    u = _universe(doc)
    rows = doc.get("matrix")
    if not isinstance(rows, list) or len(rows) != u.n or any(
            not isinstance(r, list) or len(r) != u.n for r in rows):
        raise DocumentError(f'"matrix" must be {u.n} x {u.n}')
    parsed = [[_entry(x) for x in r] for r in rows]
    complex_input = doc.get("kind") == "decoherence" or any(
        isinstance(x, dict) for r in rows for x in r)
    if complex_input:
        re = tuple(tuple(a for a, _ in r) for r in parsed)
        im = tuple(tuple(b for _, b in r) for r in parsed)
        return DecoherenceMatrix(u, re, im)
    return PairMeasureMatrix(u, tuple(tuple(a for a, _ in r) for r in parsed))


def matrix_table_from_doc(doc) -> QMeasureTable:
    m = matrix_from_doc(doc)
    if isinstance(m, DecoherenceMatrix):
        return from_decoherence(m)
    return from_pair_matrix(m)


def function_from_doc(doc, universe: Universe) -> FiniteFunction:
    vals = doc.get("values") if isinstance(doc, dict) else None
    if not isinstance(vals, list):
        raise DocumentError('function document needs "values"')
    if len(vals) != universe.n:
        raise DocumentError(f"function needs {universe.n} values, got {len(vals)}")
    return FiniteFunction(universe, [_number(v) for v in vals])


def table_to_doc(mu: QMeasureTable) -> dict:
    return {"universe": list(mu.universe.labels),
            "values": [{"set": members(m), "mu": to_output(v, mu.exact)}
                       for m, v in enumerate(mu.values())]}


def load_json(path) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except OSError as e:
        raise DocumentError(f"cannot read {path}: {e}") from None
    except json.JSONDecodeError as e:
        raise DocumentError(f"invalid JSON in {path}: {e}") from None


def load_table(path) -> QMeasureTable:
    doc = load_json(path)
    if not isinstance(doc, dict):
        raise DocumentError("top level must be an object")
    try:
        return table_from_doc(doc)
    except MeasureSpaceError as e:
        raise DocumentError(str(e)) from None
