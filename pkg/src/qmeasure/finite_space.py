"""Finite q-measure spaces over the full power set of a labeled universe.

Subsets are plain ``int`` bitmasks: bit ``i`` set means point ``i`` belongs to
the subset. Tables store one value per mask. Rational inputs are kept exact by
scaling every value by a common denominator; float inputs use float64 and an
absolute tolerance of ``1e-9`` in every identity check.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Callable, Iterable, Sequence

import numpy as np

from ._numeric import (
    ABS_TOL,
    Number,
    common_denominator,
    int_array,
    max_abs,
    widen,
)
from .report import Report

MAX_POINTS = 24
EXHAUSTIVE_MAX_POINTS = 12
EXHAUSTIVE_MAX_CASES = 4**EXHAUSTIVE_MAX_POINTS
DEFAULT_SAMPLES = 1_000_000
DEFAULT_SEED = 20090710
_CHUNK = 1 << 20

FINITE_CONTINUITY_NOTE = (
    "continuity on monotone sequences holds trivially: a finite power set "
    "has no strictly increasing infinite chains"
)


class MeasureSpaceError(ValueError):
    """Invalid input to a constructor; ``witness`` names the offending subset(s)."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


# --------------------------------------------------------------------------
# universe and subsets


@dataclass(frozen=True)
class Universe:
    labels: tuple

    def __post_init__(self):
        labels = tuple(str(x) for x in self.labels)
        object.__setattr__(self, "labels", labels)
        if not 1 <= len(labels) <= MAX_POINTS:
            raise MeasureSpaceError(f"universe must have 1..{MAX_POINTS} points, got {len(labels)}")
        if any(not x for x in labels):
            raise MeasureSpaceError("labels must be nonempty")
        if len(set(labels)) != len(labels):
            raise MeasureSpaceError("labels must be distinct")

    @classmethod
    def of_size(cls, n: int, prefix: str = "x") -> "Universe":
        return cls(tuple(f"{prefix}{i + 1}" for i in range(n)))

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    @property
    def size(self) -> int:
        """Number of subsets."""
        return 1 << self.n

    def index(self, label: str) -> int:
        return self.labels.index(label)

    def mask(self, items: Iterable) -> int:
        """Mask from 0-based indices or labels."""
        m = 0
        for it in items:
            i = self.index(it) if isinstance(it, str) else int(it)
            if not 0 <= i < self.n:
                raise MeasureSpaceError(f"index {i} outside universe of size {self.n}")
            m |= 1 << i
        return m

    def names(self, mask: int) -> list:
        return [self.labels[i] for i in members(mask)]

    def complement(self, mask: int) -> int:
        return self.full & ~mask

    def check(self, mask: int) -> int:
        if not 0 <= mask <= self.full:
            raise MeasureSpaceError(f"subset {mask} not within universe of {self.n} points")
        return mask


def members(mask: int) -> list:
    """Sorted 0-based indices of the points in ``mask``."""
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def subset(*indices: int) -> int:
    m = 0
    for i in indices:
        m |= 1 << i
    return m


def _popcounts(n: int) -> np.ndarray:
    masks = np.arange(1 << n, dtype=np.int64)
    out = np.zeros(1 << n, dtype=np.int64)
    for i in range(n):
        out += (masks >> i) & 1
    return out


def _bits(n: int) -> list:
    masks = np.arange(1 << n, dtype=np.int64)
    return [(masks >> i) & 1 for i in range(n)]


# --------------------------------------------------------------------------
# tables


class QMeasureTable:
    """A set function on every subset of a finite universe.

    Construct with a sequence of ``2**n`` values indexed by mask. The table is
    exact when every value is rational. Values must satisfy ``mu(empty) = 0``
    and ``mu >= 0``; grade-2 additivity is *not* assumed, use
    :func:`grade2_check`.
    """

    __slots__ = ("universe", "num", "den", "exact")

    def __init__(self, universe: Universe, values: Sequence[Number]):
        values = list(values)
        if len(values) != universe.size:
            raise MeasureSpaceError(
                f"table needs {universe.size} values for {universe.n} points, got {len(values)}"
            )
        den = common_denominator(values)
        if den is None:
            num = np.asarray([float(v) for v in values], dtype=np.float64)
            den = 1
        else:
            num = int_array([int(Fraction(v) * den) for v in values])
        self._init(universe, num, den)

    @classmethod
    def _from_scaled(cls, universe: Universe, num: np.ndarray, den: int = 1) -> "QMeasureTable":
        obj = cls.__new__(cls)
        if num.dtype.kind in "iuO" and den != 1:
            g = math.gcd(den, *[int(x) for x in np.unique(num)]) if num.size <= 1 << 16 else 1
            if g > 1:
                num = num // g
                den //= g
        obj._init(universe, num, den)
        return obj

    def _init(self, universe, num, den):
        if num.shape != (universe.size,):
            raise MeasureSpaceError("table shape does not match universe")
        exact = num.dtype.kind in "iuO"
        if exact:
            if num[0] != 0:
                raise MeasureSpaceError("mu(empty set) must be 0", witness=[])
            neg = np.flatnonzero(num < 0)
        else:
            if abs(num[0]) > ABS_TOL:
                raise MeasureSpaceError("mu(empty set) must be 0", witness=[])
            neg = np.flatnonzero(num < -ABS_TOL)
        if neg.size:
            raise MeasureSpaceError(
                "q-measure values must be nonnegative", witness=members(int(neg[0]))
            )
        num = num.copy()
        num.flags.writeable = False
        self.universe = universe
        self.num = num
        self.den = den
        self.exact = exact

    @classmethod
    def from_function(cls, universe: Universe, fn: Callable[[int], Number]) -> "QMeasureTable":
        return cls(universe, [fn(m) for m in range(universe.size)])

    @property
    def n(self) -> int:
        return self.universe.n

    def __call__(self, mask: int) -> Number:
        return self.evaluate(mask)

    def evaluate(self, mask: int) -> Number:
        self.universe.check(mask)
        return self._scalar(self.num[mask])

    def _scalar(self, x) -> Number:
        if self.exact:
            return Fraction(int(x), self.den)
        return float(x)

    def values(self) -> list:
        return [self._scalar(x) for x in self.num]

    def floats(self) -> np.ndarray:
        if self.exact:
            return self.num.astype(np.float64) / self.den
        return self.num

    # comparisons on scaled arrays
    def _eq(self, lhs, rhs):
        if self.exact:
            return lhs == rhs
        return np.abs(lhs - rhs) <= ABS_TOL

    def _zero(self, x):
        if self.exact:
            return x == 0
        return np.abs(x) <= ABS_TOL

    def same_universe(self, other: "QMeasureTable") -> None:
        if self.universe != other.universe:
            raise MeasureSpaceError("universe mismatch")

    def __eq__(self, other):
        if not isinstance(other, QMeasureTable) or other.universe != self.universe:
            return NotImplemented
        if self.exact and other.exact:
            return bool(np.all(self.num * other.den == other.num * self.den))
        return bool(np.all(np.abs(self.floats() - other.floats()) <= ABS_TOL))

    __hash__ = None

    def __repr__(self):
        mode = "exact" if self.exact else "float"
        return f"QMeasureTable(n={self.n}, {mode})"


def evaluate(mu: QMeasureTable, mask: int) -> Number:
    return mu.evaluate(mask)


@dataclass(frozen=True)
class FiniteMeasure:
    """An additive set function given by point weights (signed allowed)."""

    universe: Universe
    weights: tuple

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(self.weights))
        if len(self.weights) != self.universe.n:
            raise MeasureSpaceError("one weight per point required")

    @property
    def nonnegative(self) -> bool:
        return all(w >= 0 for w in self.weights)

    def __call__(self, mask: int) -> Number:
        return sum((self.weights[i] for i in members(mask)), Fraction(0) if self.exact else 0.0)

    @property
    def exact(self) -> bool:
        return all(isinstance(w, Rational) for w in self.weights)

    def table(self) -> QMeasureTable:
        """The measure itself as a (grade-1) table; requires nonnegative weights."""
        if not self.nonnegative:
            raise MeasureSpaceError("negative weight")
        num, den = _subset_sums(self.weights, self.universe.n)
        return QMeasureTable._from_scaled(self.universe, num, den)


def _scale(values: Sequence) -> tuple[np.ndarray, int]:
    den = common_denominator(values)
    if den is None:
        return np.asarray([float(v) for v in values], dtype=np.float64), 1
    return int_array([int(Fraction(v) * den) for v in values]), den


def _subset_sums(weights: Sequence, n: int) -> tuple[np.ndarray, int]:
    w, den = _scale(weights)
    if w.dtype.kind == "f":
        out = np.zeros(1 << n)
    else:
        bound = n * max_abs(w)
        out = widen(np.zeros(1 << n, dtype=np.int64), bound)
        w = widen(w, bound)
    for i, bit in enumerate(_bits(n)):
        out = out + w[i] * bit
    return out, den


def _square(num: np.ndarray) -> np.ndarray:
    if num.dtype.kind == "f":
        return num * num
    return widen(num, max_abs(num) ** 2) ** 2


# --------------------------------------------------------------------------
# constructors


def from_measure_squared(nu: FiniteMeasure) -> QMeasureTable:
    """``mu(A) = nu(A)**2`` for a nonnegative measure ``nu``."""
    if not nu.nonnegative:
        raise MeasureSpaceError("negative weight")
    return _squared_sum(nu.universe, nu.weights)


def from_signed_measure_squared(nu: FiniteMeasure) -> QMeasureTable:
    """``mu(A) = nu(A)**2`` for a signed measure; still a q-measure."""
    return _squared_sum(nu.universe, nu.weights)


def _squared_sum(universe, weights):
    num, den = _subset_sums(weights, universe.n)
    return QMeasureTable._from_scaled(universe, _square(num), den * den)


def from_complex_amplitude(universe: Universe, amplitudes: Sequence[complex] | None = None,
                           *, real: Sequence | None = None, imag: Sequence | None = None) -> QMeasureTable:
    """``mu(A) = |nu(A)|**2`` for a complex amplitude measure.

    Pass Python complex numbers, or ``real``/``imag`` component sequences
    (rational components keep the table exact).
    """
    if amplitudes is not None:
        real = [complex(a).real for a in amplitudes]
        imag = [complex(a).imag for a in amplitudes]
    if real is None or imag is None:
        raise MeasureSpaceError("amplitudes or real/imag components required")
    if len(real) != universe.n or len(imag) != universe.n:
        raise MeasureSpaceError("one amplitude per point required")
    den = common_denominator(list(real) + list(imag))
    if den is None:
        re, _ = _subset_sums([float(x) for x in real], universe.n)
        im, _ = _subset_sums([float(x) for x in imag], universe.n)
        return QMeasureTable._from_scaled(universe, re * re + im * im, 1)
    re, _ = _subset_sums([Fraction(x) * den for x in real], universe.n)
    im, _ = _subset_sums([Fraction(x) * den for x in imag], universe.n)
    return QMeasureTable._from_scaled(universe, _square(re) + _square(im), den * den)


def destructive_pairs_universe(m: int, n: int) -> Universe:
    labels = [f"x{i + 1}" for i in range(m)] + [f"y{i + 1}" for i in range(m)]
    labels += [f"z{i + 1}" for i in range(n)]
    if len(labels) > MAX_POINTS:
        raise MeasureSpaceError(f"2m+n = {len(labels)} exceeds {MAX_POINTS} points")
    return Universe(tuple(labels))


def from_destructive_pairs(m: int, n: int) -> QMeasureTable:
    """``mu(A) = |A| - 2 * #{i : x_i, y_i in A}`` on ``x1..xm, y1..ym, z1..zn``."""
    if m < 0 or n < 0 or 2 * m + n == 0:
        raise MeasureSpaceError("need m, n >= 0 and at least one point")
    universe = destructive_pairs_universe(m, n)
    size = universe.n
    masks = np.arange(1 << size, dtype=np.int64)
    values = _popcounts(size)
    for i in range(m):
        both = ((masks >> i) & 1) & ((masks >> (m + i)) & 1)
        values -= 2 * both
    return QMeasureTable._from_scaled(universe, values, 1)


@dataclass(frozen=True)
class PairMeasureMatrix:
    """Atoms ``entries[i][j]`` of a signed measure on ``X x X``."""

    universe: Universe
    entries: tuple

    def __post_init__(self):
        rows = tuple(tuple(r) for r in self.entries)
        object.__setattr__(self, "entries", rows)
        n = self.universe.n
        if len(rows) != n or any(len(r) != n for r in rows):
            raise MeasureSpaceError(f"pair matrix must be {n}x{n}")

    @property
    def exact(self) -> bool:
        return all(isinstance(x, Rational) for r in self.entries for x in r)

    def symmetry_witness(self):
        n = self.universe.n
        for i in range(n):
            for j in range(i + 1, n):
                a, b = self.entries[i][j], self.entries[j][i]
                if (a != b) if self.exact else abs(a - b) > ABS_TOL:
                    return (i, j)
        return None

    def diagonal_values(self) -> tuple[np.ndarray, int]:
        """Scaled ``sum_{i,j in A} entries[i][j]`` for every mask ``A``."""
        n = self.universe.n
        flat = [x for r in self.entries for x in r]
        lam, den = _scale(flat)
        lam = lam.reshape(n, n)
        bits = _bits(n)
        if lam.dtype.kind == "f":
            out = np.zeros(1 << n)
        else:
            bound = n * n * max_abs(lam)
            out = widen(np.zeros(1 << n, dtype=np.int64), bound)
            lam = widen(lam, bound)
        for i in range(n):
            out = out + lam[i, i] * bits[i]
            for j in range(i + 1, n):
                out = out + (lam[i, j] + lam[j, i]) * (bits[i] & bits[j])
        return out, den

    def check(self) -> Report:
        sym = self.symmetry_witness()
        if sym is not None:
            return Report("pair_matrix", False, {"asymmetric_entry": list(sym)},
                          {"symmetric": False})
        num, _ = self.diagonal_values()
        neg = np.flatnonzero(num < 0) if num.dtype.kind != "f" else np.flatnonzero(num < -ABS_TOL)
        if neg.size:
            return Report("pair_matrix", False, {"negative_subset": members(int(neg[0]))},
                          {"symmetric": True, "diagonally_positive": False})
        return Report("pair_matrix", True, None, {"symmetric": True, "diagonally_positive": True})

    def marginal(self) -> FiniteMeasure:
        """The marginal signed measure, weights ``sum_j entries[i][j]``."""
        return FiniteMeasure(self.universe, tuple(sum(r) for r in self.entries))


def from_pair_matrix(lam: PairMeasureMatrix) -> QMeasureTable:
    """``mu(A) = lambda(A x A)``."""
    sym = lam.symmetry_witness()
    if sym is not None:
        raise MeasureSpaceError(f"pair matrix not symmetric at {sym}", witness=list(sym))
    num, den = lam.diagonal_values()
    bad = np.flatnonzero(num < 0) if num.dtype.kind != "f" else np.flatnonzero(num < -ABS_TOL)
    if bad.size:
        raise MeasureSpaceError("pair matrix not diagonally positive", witness=members(int(bad[0])))
    if num.dtype.kind == "f":
        num = np.where(num < 0, 0.0, num)
    return QMeasureTable._from_scaled(lam.universe, num, den)


def recover_pair_matrix(mu: QMeasureTable, *, verify: bool = True) -> PairMeasureMatrix:
    """The unique symmetric pair matrix with ``mu(A) = lambda(A x A)``, by polarization."""
    if verify:
        rep = grade2_check(mu)
        if not rep.passed:
            raise MeasureSpaceError("table is not grade-2 additive", witness=rep.witness)
    n = mu.n
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            if i == j:
                row.append(mu(1 << i))
            else:
                row.append((mu((1 << i) | (1 << j)) - mu(1 << i) - mu(1 << j)) / 2)
        rows.append(tuple(row))
    return PairMeasureMatrix(mu.universe, tuple(rows))


@dataclass(frozen=True)
class DecoherenceMatrix:
    """``D({x_i}, {x_j}) = real[i][j] + 1j * imag[i][j]``.

    Keeping the components separate lets rational entries stay exact.
    """

    universe: Universe
    real: tuple
    imag: tuple

    def __post_init__(self):
        n = self.universe.n
        for name in ("real", "imag"):
            rows = tuple(tuple(r) for r in getattr(self, name))
            if len(rows) != n or any(len(r) != n for r in rows):
                raise MeasureSpaceError(f"decoherence matrix must be {n}x{n}")
            object.__setattr__(self, name, rows)

    @classmethod
    def from_complex(cls, universe: Universe, matrix) -> "DecoherenceMatrix":
        m = np.asarray(matrix, dtype=complex)
        return cls(universe, tuple(map(tuple, m.real.tolist())), tuple(map(tuple, m.imag.tolist())))

    @property
    def exact(self) -> bool:
        return all(isinstance(x, Rational) for m in (self.real, self.imag) for r in m for x in r)

    def value(self, a: int, b: int) -> complex:
        ia, ib = members(a), members(b)
        re = sum(self.real[i][j] for i in ia for j in ib)
        im = sum(self.imag[i][j] for i in ia for j in ib)
        return complex(re, im)


def _indicator_rows(n: int, masks: np.ndarray) -> np.ndarray:
    return ((masks[:, None] >> np.arange(n)[None, :]) & 1).astype(np.int64)


def decoherence_check(D: DecoherenceMatrix, *, seed: int = DEFAULT_SEED,
                      samples: int = DEFAULT_SAMPLES) -> Report:
    """Hermiticity on entries, then nonnegativity and Cauchy-Schwarz on subset pairs.

    Additivity in each slot is automatic for the matrix representation.
    """
    n = D.universe.n
    notes = ["additivity in each argument is automatic for a matrix of atoms"]
    details = {"additivity": True}
    exact = D.exact
    for i in range(n):
        for j in range(i, n):
            dr = D.real[i][j] - D.real[j][i]
            di = D.imag[i][j] + D.imag[j][i]
            ok = (dr == 0 and di == 0) if exact else (abs(dr) <= ABS_TOL and abs(di) <= ABS_TOL)
            if not ok:
                details["hermitian"] = False
                return Report("decoherence", False, {"condition": "hermitian", "entry": [i, j]},
                              details, notes)
    details["hermitian"] = True

    flat = [x for m in (D.real, D.imag) for r in m for x in r]
    scaled, den = _scale(flat)
    if scaled.dtype.kind == "f":
        R = scaled[: n * n].reshape(n, n)
        I = scaled[n * n:].reshape(n, n)
    else:
        R = scaled[: n * n].reshape(n, n).astype(object)
        I = scaled[n * n:].reshape(n, n).astype(object)
        bound = (n * n * max(max_abs(scaled), 1)) ** 2
        if bound < 2**62:
            R, I = R.astype(np.int64), I.astype(np.int64)

    all_masks = np.arange(1 << n, dtype=np.int64)
    chi = _indicator_rows(n, all_masks)
    if R.dtype == object:
        chi = chi.astype(object)
    diag = np.einsum("ai,ij,aj->a", chi, R, chi) if R.dtype != object else np.array(
        [chi[a] @ R @ chi[a] for a in range(len(all_masks))], dtype=object)
    neg = np.flatnonzero(diag < 0) if exact else np.flatnonzero(diag < -ABS_TOL)
    if neg.size:
        details["diagonal_nonnegative"] = False
        return Report("decoherence", False,
                      {"condition": "diagonal_nonnegative", "subset": members(int(neg[0]))},
                      details, notes)
    details["diagonal_nonnegative"] = True

    exhaustive = n <= EXHAUSTIVE_MAX_POINTS
    details["exhaustive"] = exhaustive
    if exhaustive:
        chunk = max(1, _CHUNK >> n)
        for start in range(0, 1 << n, chunk):
            rows = chi[start:start + chunk]
            re = rows @ R @ chi.T
            im = rows @ I @ chi.T
            lhs = re * re + im * im
            rhs = diag[start:start + chunk, None] * diag[None, :]
            bad = lhs > rhs if exact else lhs > rhs + ABS_TOL * np.maximum(1.0, np.abs(rhs))
            if np.any(bad):
                a, b = np.argwhere(bad)[0]
                details["cauchy_schwarz"] = False
                return Report("decoherence", False,
                              {"condition": "cauchy_schwarz", "A": members(start + int(a)),
                               "B": members(int(b))}, details, notes)
    else:
        rng = np.random.default_rng(seed)
        details["seed"] = seed
        details["samples"] = samples
        for start in range(0, samples, _CHUNK):
            k = min(_CHUNK, samples - start)
            a = rng.integers(0, 1 << n, size=k)
            b = rng.integers(0, 1 << n, size=k)
            ca, cb = _indicator_rows(n, a), _indicator_rows(n, b)
            Rf, If = R.astype(np.float64), I.astype(np.float64)
            re = np.einsum("ki,ij,kj->k", ca, Rf, cb)
            im = np.einsum("ki,ij,kj->k", ca, If, cb)
            d = diag.astype(np.float64)
            rhs = d[a] * d[b]
            bad = re * re + im * im > rhs + ABS_TOL * np.maximum(1.0, np.abs(rhs))
            if np.any(bad):
                k0 = int(np.flatnonzero(bad)[0])
                details["cauchy_schwarz"] = False
                return Report("decoherence", False,
                              {"condition": "cauchy_schwarz", "A": members(int(a[k0])),
                               "B": members(int(b[k0]))}, details, notes)
    details["cauchy_schwarz"] = True
    return Report("decoherence", True, None, details, notes)


def from_decoherence(D: DecoherenceMatrix) -> QMeasureTable:
    """``mu(A) = D(A, A)``; raises if ``D`` is not a decoherence functional."""
    rep = decoherence_check(D)
    if not rep.passed:
        raise MeasureSpaceError(f"not a decoherence functional: {rep.witness}", witness=rep.witness)
    lam = PairMeasureMatrix(D.universe, D.real)
    num, den = lam.diagonal_values()
    if num.dtype.kind == "f":
        num = np.where(num < 0, 0.0, num)
    return QMeasureTable._from_scaled(D.universe, num, den)


# --------------------------------------------------------------------------
# enumeration of disjoint families


def _digits_to_masks(digits: np.ndarray, k: int) -> list:
    """``digits[:, i]`` in ``0..k`` assigns point ``i`` to nothing or family member ``1..k``."""
    masks = [np.zeros(digits.shape[0], dtype=np.int64) for _ in range(k)]
    for i in range(digits.shape[1]):
        col = digits[:, i]
        for c in range(k):
            masks[c] |= (col == c + 1).astype(np.int64) << i
    return masks


def _code_digits(codes: np.ndarray, n: int, base: int) -> np.ndarray:
    # point 0 is the most significant digit, so code order is lexicographic in points
    digits = np.empty((codes.shape[0], n), dtype=np.int64)
    t = codes.copy()
    for i in range(n - 1, -1, -1):
        digits[:, i] = t % base
        t //= base
    return digits


def _scan_families(n: int, k: int, ok_fn, *, seed: int, samples: int,
                   exhaustive_limit: int = EXHAUSTIVE_MAX_CASES):
    """Evaluate ``ok_fn(masks)`` over ordered k-tuples of mutually disjoint subsets.

    Exhaustive when ``(k+1)**n <= exhaustive_limit``; otherwise a seeded
    uniform sample of assignments. Returns ``(passed, witness_masks, details)``.
    """
    base = k + 1
    total = base**n
    if total <= exhaustive_limit:
        # split the points into a high and a low half; family masks over the
        # two halves combine by OR, and row-major order keeps code order
        h = n // 2
        low_n = n - h
        high = _digits_to_masks(_code_digits(np.arange(base**h, dtype=np.int64), h, base), k)
        low = _digits_to_masks(_code_digits(np.arange(base**low_n, dtype=np.int64), low_n, base), k)
        low = [m << h for m in low]
        n_low = low[0].shape[0]
        rows = max(1, _CHUNK // n_low)
        checked = 0
        for start in range(0, high[0].shape[0], rows):
            masks = [(hm[start:start + rows, None] | lm[None, :]).ravel()
                     for hm, lm in zip(high, low)]
            ok = ok_fn(masks)
            if not np.all(ok):
                j = int(np.flatnonzero(~ok)[0])
                return False, [int(m[j]) for m in masks], {
                    "exhaustive": True, "cases": checked + j + 1}
            checked += masks[0].shape[0]
        return True, None, {"exhaustive": True, "cases": total}
    rng = np.random.default_rng(seed)
    checked = 0
    for start in range(0, samples, _CHUNK):
        size = min(_CHUNK, samples - start)
        digits = rng.integers(0, base, size=(size, n))
        masks = _digits_to_masks(digits, k)
        ok = ok_fn(masks)
        checked += size
        if not np.all(ok):
            j = int(np.flatnonzero(~ok)[0])
            return False, [int(m[j]) for m in masks], {
                "exhaustive": False, "cases": checked, "seed": seed}
    return True, None, {"exhaustive": False, "cases": checked, "seed": seed}


# --------------------------------------------------------------------------
# axiom and theorem checks


def grade2_check(mu: QMeasureTable, *, seed: int = DEFAULT_SEED,
                 samples: int = DEFAULT_SAMPLES) -> Report:
    """Grade-2 additivity over every mutually disjoint triple ``(A, B, C)``."""
    v = mu.num

    def ok(m):
        a, b, c = m
        lhs = v[a | b | c]
        rhs = v[a | b] + v[a | c] + v[b | c] - v[a] - v[b] - v[c]
        return mu._eq(lhs, rhs)

    passed, wit, details = _scan_families(mu.n, 3, ok, seed=seed, samples=samples)
    witness = None if wit is None else {k: members(m) for k, m in zip("ABC", wit)}
    return Report("grade2", passed, witness, details, [FINITE_CONTINUITY_NOTE])


def graden_check(mu: QMeasureTable, n_grade: int, *, seed: int = DEFAULT_SEED,
                 samples: int = DEFAULT_SAMPLES) -> Report:
    """Grade-n additivity in its alternating inclusion-exclusion form.

    For ``N = n_grade + 1`` mutually disjoint sets::

        mu(A_1 + ... + A_N) = sum_{k=1}^{N-1} (-1)**(N-1-k) sum_{|S|=k} mu(union_S A_i)
    """
    if n_grade < 1:
        raise ValueError("n_grade must be >= 1")
    v = mu.num
    N = n_grade + 1

    def ok(m):
        union = m[0]
        for x in m[1:]:
            union = union | x
        rhs = None
        for k in range(1, N):
            sign = 1 if (N - 1 - k) % 2 == 0 else -1
            for S in itertools.combinations(range(N), k):
                u = m[S[0]]
                for s in S[1:]:
                    u = u | m[s]
                term = v[u] if sign > 0 else -v[u]
                rhs = term if rhs is None else rhs + term
        return mu._eq(v[union], rhs)

    passed, wit, details = _scan_families(mu.n, N, ok, seed=seed, samples=samples)
    witness = None if wit is None else [members(m) for m in wit]
    details["grade"] = n_grade
    return Report(f"grade{n_grade}", passed, witness, details)


def theorem21_check(mu: QMeasureTable, *, seed: int = DEFAULT_SEED,
                    samples: int = DEFAULT_SAMPLES, grade2: Report | None = None) -> Report:
    """The union formula with symmetric-difference correction, over all pairs.

    ``mu(A|B) = mu(A) + mu(B) - mu(A&B) + mu(A^B) - mu(A-B) - mu(B-A)``.
    The report also records whether the verdict agrees with :func:`grade2_check`.
    """
    v = mu.num

    def ok(m):
        only_a, only_b, both = m
        a = only_a | both
        b = only_b | both
        lhs = v[a | b]
        rhs = v[a] + v[b] - v[both] + v[only_a | only_b] - v[only_a] - v[only_b]
        return mu._eq(lhs, rhs)

    passed, wit, details = _scan_families(mu.n, 3, ok, seed=seed, samples=samples)
    witness = None
    if wit is not None:
        witness = {"A": members(wit[0] | wit[2]), "B": members(wit[1] | wit[2])}
    if grade2 is None:
        grade2 = grade2_check(mu, seed=seed, samples=samples)
    details["grade2_verdict"] = grade2.passed
    details["verdicts_agree"] = grade2.passed == passed
    return Report("theorem21", passed, witness, details)


def disjoint_union_expand(mu: QMeasureTable, parts: Sequence[int]) -> Number:
    """``sum_{i<j} mu(A_i + A_j) - (k - 2) * sum_i mu(A_i)`` for k disjoint parts."""
    parts = [mu.universe.check(p) for p in parts]
    if len(parts) < 3:
        raise MeasureSpaceError("need at least three parts")
    seen = 0
    for p in parts:
        if seen & p:
            raise MeasureSpaceError("parts are not mutually disjoint", witness=members(seen & p))
        seen |= p
    k = len(parts)
    pair_sum = sum(mu(a | b) for a, b in itertools.combinations(parts, 2))
    return pair_sum - (k - 2) * sum(mu(a) for a in parts)


def is_compatible(mu: QMeasureTable, a: int, b: int) -> bool:
    """``A mu B``: ``mu(A|B) = mu(A) + mu(B) - mu(A&B)``."""
    mu.universe.check(a), mu.universe.check(b)
    v = mu.num
    return bool(mu._eq(v[a | b], v[a] + v[b] - v[a & b]))


def compatibility_forms(mu: QMeasureTable, a: int, b: int) -> tuple[bool, bool]:
    """Both characterizations of compatibility.

    The second, ``mu(A^B) = mu(A-B) + mu(B-A)``, agrees with the first on
    grade-2 additive tables.
    """
    v = mu.num
    sym = bool(mu._eq(v[a ^ b], v[a & ~b] + v[b & ~a]))
    return is_compatible(mu, a, b), sym


def _require_exhaustive(mu: QMeasureTable):
    if mu.n > EXHAUSTIVE_MAX_POINTS:
        raise MeasureSpaceError(
            f"exhaustive check limited to {EXHAUSTIVE_MAX_POINTS} points, got {mu.n}")


def _center_flags(mu: QMeasureTable) -> np.ndarray:
    _require_exhaustive(mu)
    v = mu.num
    size = mu.universe.size
    bs = np.arange(size, dtype=np.int64)
    flags = np.zeros(size, dtype=bool)
    for a in range(size):
        flags[a] = bool(np.all(mu._eq(v[a | bs], v[a] + v[bs] - v[a & bs])))
    return flags


def mu_center(mu: QMeasureTable) -> list:
    """Every subset compatible with all subsets, as sorted masks."""
    return [int(a) for a in np.flatnonzero(_center_flags(mu))]


def is_splitting(mu: QMeasureTable, a: int) -> bool:
    """``mu(B) = mu(B & A) + mu(B - A)`` for every ``B``."""
    _require_exhaustive(mu)
    mu.universe.check(a)
    v = mu.num
    bs = np.arange(mu.universe.size, dtype=np.int64)
    return bool(np.all(mu._eq(v[bs], v[bs & a] + v[bs & ~a])))


def splitting_sets(mu: QMeasureTable) -> list:
    return [a for a in range(mu.universe.size) if is_splitting(mu, a)]


def center_measure_check(mu: QMeasureTable, *, max_families: int = 200_000,
                         seed: int = DEFAULT_SEED) -> Report:
    """Additivity of ``mu`` on the center and the relativized sum formula.

    Families of up to three mutually disjoint center sets are enumerated in
    canonical order (``A1 <= A2 <= A3`` as masks, empty sets allowed); above
    ``max_families`` a seeded sample is used.
    """
    flags = _center_flags(mu)
    center = np.flatnonzero(flags).astype(np.int64)
    v = mu.num
    details = {"center_size": int(center.size)}

    # additivity on disjoint center pairs
    a, b = np.meshgrid(center, center, indexing="ij")
    a, b = a.ravel(), b.ravel()
    disjoint = (a & b) == 0
    a, b = a[disjoint], b[disjoint]
    ok = mu._eq(v[a | b], v[a] + v[b])
    if not np.all(ok):
        j = int(np.flatnonzero(~ok)[0])
        return Report("center_measure", False,
                      {"additivity": [members(int(a[j])), members(int(b[j]))]}, details)

    # canonical disjoint triples from the center
    n = mu.n
    codes_total = 4**n
    fam = []
    for start in range(0, codes_total, _CHUNK):
        codes = np.arange(start, min(codes_total, start + _CHUNK), dtype=np.int64)
        m1, m2, m3 = _digits_to_masks(_code_digits(codes, n, 4), 3)
        keep = flags[m1] & flags[m2] & flags[m3] & (m1 <= m2) & (m2 <= m3)
        fam.append(np.stack([m1[keep], m2[keep], m3[keep]], axis=1))
    families = np.concatenate(fam) if fam else np.zeros((0, 3), dtype=np.int64)
    details["families"] = int(families.shape[0])
    if families.shape[0] > max_families:
        rng = np.random.default_rng(seed)
        idx = np.sort(rng.choice(families.shape[0], size=max_families, replace=False))
        families = families[idx]
        details["sampled_families"] = max_families
        details["seed"] = seed
    f1, f2, f3 = families[:, 0], families[:, 1], families[:, 2]
    for bmask in range(mu.universe.size):
        p1, p2, p3 = f1 & bmask, f2 & bmask, f3 & bmask
        ok = mu._eq(v[p1 | p2 | p3], v[p1] + v[p2] + v[p3])
        if not np.all(ok):
            j = int(np.flatnonzero(~ok)[0])
            return Report("center_measure", False, {
                "B": members(bmask),
                "family": [members(int(f1[j])), members(int(f2[j])), members(int(f3[j]))]},
                details)
    return Report("center_measure", True, None, details)


@dataclass
class Regularity:
    regular: bool
    completely_regular: bool
    witnesses: dict

    def line(self) -> str:
        return (f"regular={str(self.regular).lower()} "
                f"completely_regular={str(self.completely_regular).lower()}")


def regularity_check(mu: QMeasureTable) -> Regularity:
    """Null-set conditions on every disjoint pair, plus heredity of null sets."""
    _require_exhaustive(mu)
    n = mu.n
    total = 3**n
    v = mu.num
    witnesses = {}
    for start in range(0, total, _CHUNK):
        codes = np.arange(start, min(total, start + _CHUNK), dtype=np.int64)
        a, b = _digits_to_masks(_code_digits(codes, n, 3), 2)
        za, zab = mu._zero(v[a]), mu._zero(v[a | b])
        checks = {
            # mu(A) = 0  =>  mu(A + B) = mu(B)
            "null_union": ~za | mu._eq(v[a | b], v[b]),
            # mu(A + B) = 0  =>  mu(A) = mu(B)
            "null_split": ~zab | mu._eq(v[a], v[b]),
            # mu(A + B) = 0  =>  mu(B) = 0, i.e. null sets are hereditary
            "hereditary": ~zab | mu._zero(v[b]),
        }
        for name, ok in checks.items():
            if name not in witnesses and not np.all(ok):
                j = int(np.flatnonzero(~ok)[0])
                witnesses[name] = {"A": members(int(a[j])), "B": members(int(b[j]))}
    regular = "null_union" not in witnesses and "null_split" not in witnesses
    return Regularity(regular, regular and "hereditary" not in witnesses, witnesses)


def theorem24_check(mu: QMeasureTable, total: Number) -> Report:
    """For each ``A``: center membership, ``A mu A'``, and ``mu(A) + mu(A') = total``.

    Passes when the three conditions agree for every subset.
    """
    flags = _center_flags(mu)
    full = mu.universe.full
    v = mu.num
    masks = np.arange(mu.universe.size, dtype=np.int64)
    comp = full & ~masks
    in_center = flags
    self_compat = mu._eq(v[full], v[masks] + v[comp] - v[masks & comp])
    if mu.exact:
        t = Fraction(total) * mu.den
        if t.denominator != 1:
            sums_ok = np.zeros(masks.shape, dtype=bool)
        else:
            sums_ok = (v[masks] + v[comp]) == int(t)
    else:
        sums_ok = np.abs((v[masks] + v[comp]) - float(total)) <= ABS_TOL
    agree = (in_center == self_compat) & (self_compat == sums_ok)
    details = {
        "total": str(total),
        "center_count": int(in_center.sum()),
        "self_compatible_count": int(self_compat.sum()),
        "sum_matches_count": int(sums_ok.sum()),
    }
    if not np.all(agree):
        j = int(np.flatnonzero(~agree)[0])
        return Report("theorem24", False, {
            "A": members(j), "center": bool(in_center[j]),
            "compatible_with_complement": bool(self_compat[j]), "sum_matches": bool(sums_ok[j])},
            details)
    return Report("theorem24", True, None, details)


# --------------------------------------------------------------------------
# the worked examples


def quantum_coin() -> QMeasureTable:
    """Two fair coin flips with ``mu = nu**2``; ``x1`` = HH, ``x2`` = HT, ``x3`` = TH, ``x4`` = TT."""
    u = Universe(("x1", "x2", "x3", "x4"))
    return from_measure_squared(FiniteMeasure(u, (Fraction(1, 4),) * 4))


def three_point_example() -> QMeasureTable:
    """``mu(empty) = mu({x1}) = 0`` and ``mu = 1`` on every other subset."""
    u = Universe(("x1", "x2", "x3"))
    return QMeasureTable(u, [0, 0] + [1] * 6)


def cube_table(n: int = 3) -> QMeasureTable:
    """``|A|**3``: nonnegative but not grade-2 additive."""
    u = Universe.of_size(n)
    return QMeasureTable._from_scaled(u, _popcounts(n) ** 3, 1)
