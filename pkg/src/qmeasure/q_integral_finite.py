"""The q-integral of functions on a finite q-measure space.

The integral of ``f`` is the area under its layer function
``lam -> mu({f > lam})`` minus the area under ``lam -> mu({f < -lam})``. For
simple functions both layer functions are step functions, so the integral
is a finite sum and stays exact on rational inputs.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Sequence

from ._numeric import Number, close
from .finite_space import (
    MeasureSpaceError,
    QMeasureTable,
    Universe,
    is_compatible,
    members,
    quantum_coin,
    three_point_example,
)
from .report import Report


@dataclass(frozen=True)
class FiniteFunction:
    universe: Universe
    values: tuple

    def __post_init__(self):
        vals = tuple(Fraction(v) if isinstance(v, Rational) else float(v) for v in self.values)
        if len(vals) != self.universe.n:
            raise MeasureSpaceError(f"function needs {self.universe.n} values, got {len(vals)}")
        object.__setattr__(self, "values", vals)

    @classmethod
    def indicator(cls, universe: Universe, mask: int, height: Number = 1) -> "FiniteFunction":
        return cls(universe, [height if mask >> i & 1 else 0 for i in range(universe.n)])

    @classmethod
    def constant(cls, universe: Universe, c: Number) -> "FiniteFunction":
        return cls(universe, [c] * universe.n)

    def __call__(self, i: int) -> Number:
        return self.values[i]

    def __add__(self, other):
        if isinstance(other, FiniteFunction):
            self._same(other)
            return FiniteFunction(self.universe, [a + b for a, b in zip(self.values, other.values)])
        return FiniteFunction(self.universe, [a + other for a in self.values])

    __radd__ = __add__

    def __neg__(self):
        return FiniteFunction(self.universe, [-a for a in self.values])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, c):
        if isinstance(c, FiniteFunction):
            self._same(c)
            return FiniteFunction(self.universe, [a * b for a, b in zip(self.values, c.values)])
        return FiniteFunction(self.universe, [c * a for a in self.values])

    __rmul__ = __mul__

    def _same(self, other):
        if other.universe != self.universe:
            raise MeasureSpaceError("universe mismatch")

    def restrict(self, mask: int) -> "FiniteFunction":
        """``f * chi_A``."""
        zero = 0
        return FiniteFunction(self.universe, [v if mask >> i & 1 else zero
                                              for i, v in enumerate(self.values)])

    @property
    def positive_part(self) -> "FiniteFunction":
        return FiniteFunction(self.universe, [max(v, 0) for v in self.values])

    @property
    def negative_part(self) -> "FiniteFunction":
        return FiniteFunction(self.universe, [-min(v, 0) for v in self.values])

    @property
    def support(self) -> int:
        return sum(1 << i for i, v in enumerate(self.values) if v != 0)

    def superlevel(self, lam: Number) -> int:
        """Mask of ``{x : f(x) > lam}``."""
        return sum(1 << i for i, v in enumerate(self.values) if v > lam)

    def sublevel(self, lam: Number) -> int:
        """Mask of ``{x : f(x) < lam}``."""
        return sum(1 << i for i, v in enumerate(self.values) if v < lam)

    def level_sets(self) -> list:
        """``(c, {f == c})`` for each distinct value, ascending."""
        return [(c, sum(1 << i for i, v in enumerate(self.values) if v == c))
                for c in sorted(set(self.values))]

    def is_nonnegative(self) -> bool:
        return all(v >= 0 for v in self.values)


@dataclass(frozen=True)
class LayerFunction:
    """Right-continuous step function ``lam -> mu({f > lam})`` on ``[0, inf)``.

    ``plateaus[i]`` is the value on ``[breakpoints[i], breakpoints[i+1])``;
    the function is 0 from the last breakpoint on.
    """

    breakpoints: tuple
    plateaus: tuple

    def __call__(self, lam: Number) -> Number:
        if lam < 0:
            raise ValueError("layer functions live on [0, inf)")
        for i in range(len(self.plateaus)):
            if self.breakpoints[i] <= lam < self.breakpoints[i + 1]:
                return self.plateaus[i]
        return 0

    def integral(self) -> Number:
        return sum((p * (self.breakpoints[i + 1] - self.breakpoints[i])
                    for i, p in enumerate(self.plateaus)), Fraction(0))


def _check_universe(mu: QMeasureTable, *fs: FiniteFunction):
    for f in fs:
        if f.universe != mu.universe:
            raise MeasureSpaceError("universe mismatch between measure and function")


def layer_function(mu: QMeasureTable, f: FiniteFunction) -> LayerFunction:
    """Layer function of the positive part of ``f``."""
    _check_universe(mu, f)
    levels = sorted({v for v in f.values if v > 0})
    breakpoints = (Fraction(0) if mu.exact else 0.0, *levels)
    plateaus = tuple(mu(f.superlevel(a)) for a in breakpoints[:-1])
    return LayerFunction(breakpoints, plateaus)


def q_integral(mu: QMeasureTable, f: FiniteFunction) -> Number:
    """``int_0^inf mu(f > lam) dlam - int_0^inf mu(f < -lam) dlam``, summed exactly."""
    _check_universe(mu, f)
    return layer_function(mu, f).integral() - layer_function(mu, f.negative_part).integral()


def q_integral_closed_form(mu: QMeasureTable, f: FiniteFunction) -> Number:
    """Telescoped level-set formula for ``f = sum_k a_k chi_{A_k}``, ``0 < a_1 < ... < a_n``.

    Coefficient of ``a_k``::

        sum_{j>k} mu(A_k + A_j) - (n-k-1) mu(A_k) - sum_{j>k} mu(A_j)

    Uses only pairwise unions, so it agrees with :func:`q_integral` exactly
    when ``mu`` is grade-2 additive.
    """
    _check_universe(mu, f)
    if not f.is_nonnegative():
        raise MeasureSpaceError("closed form needs a nonnegative function")
    levels = [(c, m) for c, m in f.level_sets() if c > 0]
    n = len(levels)
    total = Fraction(0)
    for k, (a_k, A_k) in enumerate(levels):
        later = levels[k + 1:]
        coeff = (sum(mu(A_k | A_j) for _, A_j in later)
                 - (n - k - 2) * mu(A_k)
                 - sum(mu(A_j) for _, A_j in later))
        total += a_k * coeff
    return total


def naive_integral(mu: QMeasureTable, f: FiniteFunction) -> Number:
    """``sum_i c_i mu({f = c_i})`` over the distinct values ``c_i``."""
    _check_universe(mu, f)
    return sum((c * mu(m) for c, m in f.level_sets() if c != 0), Fraction(0))


def restricted_integral(mu: QMeasureTable, f: FiniteFunction, mask: int) -> Number:
    """``int_A f dmu = int f chi_A dmu``."""
    mu.universe.check(mask)
    return q_integral(mu, f.restrict(mask))


def disjoint_sum_expand(mu: QMeasureTable, fs: Sequence[FiniteFunction]) -> Number:
    """``sum_{i<j} int(f_i + f_j) - (n - 2) sum_i int f_i`` for disjointly supported ``f_i``."""
    fs = list(fs)
    _check_universe(mu, *fs)
    if len(fs) < 2:
        raise ValueError("need at least two functions")
    seen = 0
    for f in fs:
        if seen & f.support:
            raise MeasureSpaceError("supports are not mutually disjoint",
                                    witness=members(seen & f.support))
        seen |= f.support
    n = len(fs)
    pairs = sum((q_integral(mu, a + b) for a, b in itertools.combinations(fs, 2)), Fraction(0))
    return pairs - (n - 2) * sum((q_integral(mu, f) for f in fs), Fraction(0))


def theorem44_check(mu: QMeasureTable, *fs: FiniteFunction) -> Report:
    """Grade-2 additivity of the integral for disjointly supported functions (2 to 5 of them)."""
    if not 2 <= len(fs) <= 5:
        raise ValueError("theorem44_check takes 2 to 5 functions")
    rhs = disjoint_sum_expand(mu, fs)
    total = fs[0]
    for f in fs[1:]:
        total = total + f
    lhs = q_integral(mu, total)
    passed = close(lhs, rhs)
    return Report("theorem44", passed, None if passed else {"lhs": lhs, "rhs": rhs},
                  {"lhs": lhs, "rhs": rhs})


def grade2_integral_counterexample() -> Report:
    """Overlapping indicators on the quantum coin break the integral's grade-2 identity.

    ``A = {x1,x2}``, ``B = {x2,x3}``, ``C = {x3,x4}``; the report passes when
    the two sides come out as 5/4 and 3/2.
    """
    mu = quantum_coin()
    u = mu.universe
    f, g, h = (FiniteFunction.indicator(u, u.mask(s))
               for s in (["x1", "x2"], ["x2", "x3"], ["x3", "x4"]))
    lhs = q_integral(mu, f + g + h)
    rhs = (q_integral(mu, f + g) + q_integral(mu, f + h) + q_integral(mu, g + h)
           - q_integral(mu, f) - q_integral(mu, g) - q_integral(mu, h))
    expected = (Fraction(5, 4), Fraction(3, 2))
    return Report("grade2_integral_gap", (lhs, rhs) == expected, None,
                  {"lhs": lhs, "rhs": rhs, "expected_lhs": expected[0],
                   "expected_rhs": expected[1], "sides_equal": lhs == rhs})


def lemma43_check(mu: QMeasureTable, a: int, b: int) -> Report:
    """Additivity of the integral on ``chi_A + chi_B`` holds exactly when ``A mu B``."""
    u = mu.universe
    fa, fb = FiniteFunction.indicator(u, a), FiniteFunction.indicator(u, b)
    integral = q_integral(mu, fa + fb)
    split = q_integral(mu, fa) + q_integral(mu, fb)
    union_plus_meet = mu(a | b) + mu(a & b)
    additive = close(integral, split)
    compatible = is_compatible(mu, a, b)
    identity = close(integral, union_plus_meet)
    return Report("lemma43", identity and additive == compatible, None, {
        "integral_of_sum": integral, "sum_of_integrals": split,
        "union_plus_intersection": union_plus_meet, "additive": additive,
        "compatible": compatible})


def naive_sequence_function(universe: Universe, n: int) -> FiniteFunction:
    """``chi_{x1,x2} + (1 - 1/n) chi_{x3}``."""
    return FiniteFunction(universe, [1, 1, 1 - Fraction(1, n)])


def convergence_failure_demo(n_max: int = 100) -> Report:
    """The naive integral loses the limit of an increasing sequence; the q-integral keeps it."""
    mu = three_point_example()
    u = mu.universe
    one = FiniteFunction.constant(u, 1)
    naive = [naive_integral(mu, naive_sequence_function(u, n)) for n in range(1, n_max + 1)]
    q = [q_integral(mu, naive_sequence_function(u, n)) for n in range(1, n_max + 1)]
    naive_one = naive_integral(mu, one)
    q_one = q_integral(mu, one)
    formula_ok = all(v == 2 - Fraction(1, n) for n, v in enumerate(naive, start=1))
    # the sequence is increasing; both limits follow from the closed forms
    details = {
        "naive": naive, "naive_limit": Fraction(2), "naive_of_limit": naive_one,
        "q_integral": q, "q_limit": q[-1], "q_of_limit": q_one,
    }
    passed = formula_ok and naive_one == 1 and all(v == q_one for v in q)
    return Report("naive_convergence_failure", passed, None, details)


def mu_dominates(mu: QMeasureTable, f: FiniteFunction, g: FiniteFunction) -> Report:
    """Whether ``mu({f > lam}) <= mu({g > lam})`` for every real ``lam``.

    Both sides are step functions that only change at values of ``f`` or
    ``g``, so checking those values and one point below them is complete.
    """
    _check_universe(mu, f, g)
    vals = sorted(set(f.values) | set(g.values))
    for lam in [vals[0] - 1, *vals]:
        lhs, rhs = mu(f.superlevel(lam)), mu(g.superlevel(lam))
        if lhs > rhs and not close(lhs, rhs):
            return Report("mu_domination", False, {"lambda": lam, "f_side": lhs, "g_side": rhs})
    return Report("mu_domination", True)
