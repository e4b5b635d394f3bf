"""Random tables, functions and pair matrices shared by the test modules."""

import itertools
import random
from fractions import Fraction

from hypothesis import strategies as st

from qmeasure import FiniteFunction, PairMeasureMatrix, QMeasureTable, Universe
from qmeasure.finite_space import members

SEED = 20090710


def rational(rng, lo=-3, hi=3, den=4):
    return Fraction(rng.randint(lo * den, hi * den), den)


def random_pair_matrix(rng, n, terms=2):
    """Sum of rank-one ``v v^T`` plus a nonnegative diagonal: symmetric and PSD."""
    lam = [[Fraction(0)] * n for _ in range(n)]
    for _ in range(terms):
        v = [rational(rng) for _ in range(n)]
        for i in range(n):
            for j in range(n):
                lam[i][j] += v[i] * v[j]
    for i in range(n):
        lam[i][i] += Fraction(rng.randint(0, 4), 4)
    return PairMeasureMatrix(Universe.of_size(n), tuple(map(tuple, lam)))


def brute_pair_table(lam):
    """``mu(A) = sum_{i, j in A} lambda_ij`` without any vectorization."""
    n = lam.universe.n
    vals = []
    for a in range(1 << n):
        idx = members(a)
        vals.append(sum((lam.entries[i][j] for i in idx for j in idx), Fraction(0)))
    return QMeasureTable(lam.universe, vals)


def random_qtable(rng, n):
    from qmeasure import from_pair_matrix
    return from_pair_matrix(random_pair_matrix(rng, n))


def random_function(rng, universe, lo=-3, hi=3, nonnegative=False):
    return FiniteFunction(universe, [rational(rng, 0 if nonnegative else lo, hi)
                                     for _ in range(universe.n)])


def disjoint_families(n, k):
    """Every ordered k-tuple of mutually disjoint subsets of n points."""
    for code in itertools.product(range(k + 1), repeat=n):
        fam = [0] * k
        for i, c in enumerate(code):
            if c:
                fam[c - 1] |= 1 << i
        yield fam


def brute_grade2(mu):
    for a, b, c in disjoint_families(mu.n, 3):
        lhs = mu(a | b | c)
        rhs = mu(a | b) + mu(a | c) + mu(b | c) - mu(a) - mu(b) - mu(c)
        if lhs != rhs:
            return False
    return True


def layer_cake(mu, f):
    """Independent q-integral oracle: sorted distinct values and telescoped level sets."""
    vals = sorted(set(f.values))
    total = Fraction(0)
    prev = Fraction(0)
    for c in [v for v in vals if v > 0]:
        total += (c - prev) * mu(sum(1 << i for i, v in enumerate(f.values) if v >= c))
        prev = c
    prev = Fraction(0)
    for c in sorted((-v for v in vals if v < 0)):
        total -= (c - prev) * mu(sum(1 << i for i, v in enumerate(f.values) if -v >= c))
        prev = c
    return total


@st.composite
def pair_matrices(draw, min_n=2, max_n=6):
    n = draw(st.integers(min_n, max_n))
    seed = draw(st.integers(0, 2**32 - 1))
    return random_pair_matrix(random.Random(seed), n)


@st.composite
def qtables(draw, min_n=2, max_n=6):
    from qmeasure import from_pair_matrix
    return from_pair_matrix(draw(pair_matrices(min_n, max_n)))


fractions = st.fractions(min_value=-4, max_value=4, max_denominator=8)
