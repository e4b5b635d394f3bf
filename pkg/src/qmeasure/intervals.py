"""Finite unions of half-open subintervals of [0, 1].

A set is stored as sorted, disjoint, non-touching pieces ``[a, b)`` inside
``[0, 1)`` plus a flag for the point 1. Endpoints may be ``Fraction`` (exact)
or ``float``; nothing is rounded or merged within a tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Tuple

Piece = Tuple[object, object]


def _canonical(pieces: Iterable[Piece]) -> tuple:
    clipped = []
    for a, b in pieces:
        a, b = max(a, 0), min(b, 1)
        if a < b:
            clipped.append((a, b))
    clipped.sort()
    merged = []
    for a, b in clipped:
        if merged and a <= merged[-1][1]:
            if b > merged[-1][1]:
                merged[-1] = (merged[-1][0], b)
        else:
            merged.append((a, b))
    return tuple(merged)


@dataclass(frozen=True)
class IntervalUnion:
    pieces: tuple = ()
    has_one: bool = False

    def __post_init__(self):
        object.__setattr__(self, "pieces", _canonical(self.pieces))

    # constructors

    @classmethod
    def empty(cls) -> "IntervalUnion":
        return cls()

    @classmethod
    def full(cls) -> "IntervalUnion":
        return cls(((Fraction(0), Fraction(1)),), True)

    @classmethod
    def closed(cls, a, b) -> "IntervalUnion":
        """``[a, b]`` (stored as ``[a, b)``, keeping the point 1 if ``b == 1``)."""
        return cls(((a, b),), b >= 1 >= a)

    @classmethod
    def half_open(cls, a, b) -> "IntervalUnion":
        return cls(((a, b),))

    @classmethod
    def from_intervals(cls, intervals, has_one: bool = False) -> "IntervalUnion":
        return cls(tuple(tuple(p) for p in intervals), has_one)

    # queries

    def lebesgue(self):
        return sum((b - a for a, b in self.pieces), Fraction(0))

    def contains(self, x) -> bool:
        if x == 1:
            return self.has_one
        return any(a <= x < b for a, b in self.pieces)

    def is_empty(self) -> bool:
        return not self.pieces and not self.has_one

    def endpoints(self) -> list:
        return sorted({e for p in self.pieces for e in p})

    def __bool__(self):
        return not self.is_empty()

    # Boolean operations

    def union(self, other: "IntervalUnion") -> "IntervalUnion":
        return IntervalUnion(self.pieces + other.pieces, self.has_one or other.has_one)

    def intersection(self, other: "IntervalUnion") -> "IntervalUnion":
        out = []
        i = j = 0
        p, q = self.pieces, other.pieces
        while i < len(p) and j < len(q):
            a = max(p[i][0], q[j][0])
            b = min(p[i][1], q[j][1])
            if a < b:
                out.append((a, b))
            if p[i][1] < q[j][1]:
                i += 1
            else:
                j += 1
        return IntervalUnion(tuple(out), self.has_one and other.has_one)

    def complement(self) -> "IntervalUnion":
        out = []
        cursor = Fraction(0)
        for a, b in self.pieces:
            if cursor < a:
                out.append((cursor, a))
            cursor = b
        if cursor < 1:
            out.append((cursor, Fraction(1)))
        return IntervalUnion(tuple(out), not self.has_one)

    def difference(self, other: "IntervalUnion") -> "IntervalUnion":
        return self.intersection(other.complement())

    def symmetric_difference(self, other: "IntervalUnion") -> "IntervalUnion":
        return self.difference(other).union(other.difference(self))

    def translate(self, shift) -> "IntervalUnion":
        """``{x + shift : x in A}`` intersected with [0, 1]."""
        pieces = tuple((a + shift, b + shift) for a, b in self.pieces)
        return IntervalUnion(pieces, self.contains(1 - shift) if 0 <= 1 - shift <= 1 else False)

    def shift_preimage(self, s) -> "IntervalUnion":
        """``{x in [0, 1] : x + s in A}``."""
        return self.translate(-s)

    __or__ = union
    __and__ = intersection
    __sub__ = difference
    __xor__ = symmetric_difference

    def __invert__(self):
        return self.complement()

    def __repr__(self):
        inner = " u ".join(f"[{a}, {b})" for a, b in self.pieces) or "{}"
        return f"IntervalUnion({inner}{' + {1}' if self.has_one else ''})"
