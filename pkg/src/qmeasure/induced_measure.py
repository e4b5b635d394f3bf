"""Set functions ``A -> int_A f dmu`` induced by a density on a finite q-measure space."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .finite_space import (
    FiniteMeasure,
    MeasureSpaceError,
    QMeasureTable,
    grade2_check,
    members,
    regularity_check,
    three_point_example,
)
from .q_integral_finite import FiniteFunction, restricted_integral
from .report import Report

# on a finite space the integrable bound on mu({f > lam} & A) is max f times max mu
DOMINATION_NOTE = "boundedness hypothesis holds automatically on a finite space"


@dataclass(frozen=True)
class InducedQMeasure:
    base: QMeasureTable
    density: FiniteFunction
    table: QMeasureTable
    grade2: Report

    def __call__(self, mask: int):
        return self.table(mask)


def induce(mu: QMeasureTable, f: FiniteFunction) -> InducedQMeasure:
    """``mu_1(A) = int_A f dmu`` for every subset, with its grade-2 verdict recorded."""
    if f.universe != mu.universe:
        raise MeasureSpaceError("universe mismatch between measure and density")
    if not f.is_nonnegative():
        bad = next(i for i, v in enumerate(f.values) if v < 0)
        raise MeasureSpaceError("density must be nonnegative", witness=[bad])
    values = [restricted_integral(mu, f, a) for a in range(mu.universe.size)]
    table = QMeasureTable(mu.universe, values)
    return InducedQMeasure(mu, f, table, grade2_check(table))


def absolutely_continuous(nu, mu: QMeasureTable):
    """First ``A`` with ``mu(A) = 0`` but ``nu(A) != 0``, or ``None``."""
    for a in range(mu.universe.size):
        if mu(a) == 0 and nu(a) != 0:
            return a
    return None


def theorem53_check(mu: QMeasureTable, f: FiniteFunction) -> Report:
    """Inheritance by ``mu_1``: q-measure, regularity, complete regularity, ``mu_1 << mu``."""
    mu1 = induce(mu, f)
    base = regularity_check(mu)
    ind = regularity_check(mu1.table)
    parts = {"a": mu1.grade2.passed}
    parts["b"] = ind.regular if base.regular else True
    parts["c"] = ind.completely_regular if base.completely_regular else True
    witness = None
    if base.completely_regular:
        bad = absolutely_continuous(mu1, mu)
        parts["d"] = bad is None
        if bad is not None:
            witness = {"A": members(bad)}
    else:
        parts["d"] = True
    passed = all(parts.values())
    if not passed and witness is None:
        witness = {"failed_parts": [k for k, v in parts.items() if not v]}
    return Report("theorem53", passed, witness, {
        "parts": parts, "base_regularity": base.line(), "induced_regularity": ind.line(),
        "grade2_witness": mu1.grade2.witness}, [DOMINATION_NOTE])


def _matches(mu: QMeasureTable, f: FiniteFunction, nu: FiniteMeasure, order) -> bool:
    return all(restricted_integral(mu, f, a) == nu(a) for a in order)


def radon_nikodym_counterexample(steps: int = 31, step=Fraction(1, 10)) -> Report:
    """No density represents the additive ``nu = (0, 1, 1)`` against the three-point table.

    The exact argument: the singleton equations force ``f(x2) = f(x3) = 1``,
    and then ``int_{x2,x3} f dmu = mu({x2,x3}) = 1`` while ``nu({x2,x3}) = 2``.
    The grid search over ``{0, 0.1, ..., 3}**3`` only illustrates this.
    """
    mu = three_point_example()
    u = mu.universe
    nu = FiniteMeasure(u, (Fraction(0), Fraction(1), Fraction(1)))
    ac = absolutely_continuous(nu, mu)
    x2, x3 = u.mask(["x2"]), u.mask(["x3"])
    pair = x2 | x3
    # int_{x} f dmu = f(x) mu({x}) on a singleton
    forced = {"x2": nu(x2) / mu(x2), "x3": nu(x3) / mu(x3)}
    f = FiniteFunction(u, [0, forced["x2"], forced["x3"]])
    integral = restricted_integral(mu, f, pair)
    contradiction = integral != nu(pair)

    # singletons first: most candidates fail there
    order = sorted(range(1, u.size), key=lambda a: (len(members(a)), a))
    grid = [k * step for k in range(steps)]
    found = [c for c in itertools.product(grid, repeat=3)
             if _matches(mu, FiniteFunction(u, c), nu, order)]
    passed = ac is None and forced == {"x2": 1, "x3": 1} and integral == 1 and contradiction \
        and not found
    return Report("radon_nikodym", passed, None, {
        "nu_abs_continuous": ac is None,
        "forced_density": forced,
        "nu_pair": nu(pair), "integral_pair": integral,
        "contradiction": contradiction,
        "grid_size": len(grid) ** 3, "grid_representers": len(found),
    }, ["exact argument is authoritative; grid search is illustrative"])
