"""Symmetric bilinear forms, quadratic forms and the quantum form of a pair matrix.

Vectors are plain sequences of numbers. Forms built from rational matrices
evaluate exactly on rational vectors. Black-box quadratic forms can only be
tested on probe sets; reports say "passed on probe set" and nothing stronger.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Callable, Optional, Sequence

import numpy as np

from .finite_space import DEFAULT_SEED, FiniteMeasure, PairMeasureMatrix
from .report import Report

Vector = Sequence

PROBE_TOL = 1e-8
POLARIZATION_TOL = 1e-9


class FormError(ValueError):
    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


def _check_dim(*vs, dim=None):
    lens = {len(v) for v in vs}
    if dim is not None:
        lens.add(dim)
    if len(lens) > 1:
        raise FormError(f"dimension mismatch: {sorted(lens)}")


def _add(u, v):
    return [a + b for a, b in zip(u, v)]


def _sub(u, v):
    return [a - b for a, b in zip(u, v)]


def _scale(c, v):
    return [c * a for a in v]


@dataclass(frozen=True)
class BilinearForm:
    """``B(u, v) = u^T M v`` for a symmetric matrix ``M``."""

    matrix: tuple

    def __post_init__(self):
        rows = tuple(tuple(r) for r in self.matrix)
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise FormError("matrix must be square")
        for i, j in itertools.combinations(range(n), 2):
            a, b = rows[i][j], rows[j][i]
            exact = isinstance(a, Rational) and isinstance(b, Rational)
            if (a != b) if exact else abs(a - b) > POLARIZATION_TOL:
                raise FormError(f"matrix not symmetric at ({i}, {j})", witness=(i, j))
        object.__setattr__(self, "matrix", rows)

    @property
    def dim(self) -> int:
        return len(self.matrix)

    def __call__(self, u: Vector, v: Vector):
        _check_dim(u, v, dim=self.dim)
        return sum(u[i] * self.matrix[i][j] * v[j]
                   for i in range(self.dim) for j in range(self.dim))

    def quadratic(self) -> "QuadraticForm":
        return QuadraticForm(lambda v: eval_Q(self, v), self.dim, bilinear=self)


@dataclass(frozen=True)
class QuadraticForm:
    """A map from ``dim``-vectors to reals.

    ``bilinear`` is set when the form is known to come from a
    :class:`BilinearForm`; otherwise ``evaluator`` is a black box.
    """

    evaluator: Callable[[Vector], float]
    dim: int
    bilinear: Optional[BilinearForm] = None

    def __call__(self, v: Vector):
        _check_dim(v, dim=self.dim)
        return self.evaluator(list(v))


def eval_Q(B: BilinearForm, v: Vector):
    """``Q(v) = B(v, v)``."""
    return B(v, v)


def polarize(Q: QuadraticForm, u: Vector, v: Vector):
    """``B(u, v) = (Q(u+v) - Q(u) - Q(v)) / 2``.

    The second polarization identity ``(Q(u+v) - Q(u-v)) / 4`` is computed as
    well and must agree within ``1e-9`` (exactly, for rational values);
    otherwise ``Q`` is not quadratic and :class:`FormError` is raised.
    """
    _check_dim(u, v, dim=Q.dim)
    s = Q(_add(u, v))
    half = _div(s - Q(u) - Q(v), 2)
    quarter = _div(s - Q(_sub(u, v)), 4)
    if not _agree(half, quarter, POLARIZATION_TOL, relative=True):
        raise FormError("polarization identities disagree; Q is not quadratic",
                        witness=(list(u), list(v)))
    return half


def _div(x, k):
    if isinstance(x, Rational):
        return Fraction(x) / k
    return x / k


def _agree(a, b, tol, relative=False):
    if isinstance(a, Rational) and isinstance(b, Rational):
        return a == b
    scale = max(1.0, abs(float(a)), abs(float(b))) if relative else 1.0
    return abs(float(a) - float(b)) <= tol * scale


def _basis(dim: int, one=1):
    return [[one if i == j else 0 * one for j in range(dim)] for i in range(dim)]


def probe_vectors(dim: int, count: int, seed: int = DEFAULT_SEED) -> list:
    rng = np.random.default_rng(seed)
    return [list(row) for row in rng.uniform(-1.0, 1.0, size=(count, dim)).tolist()]


def probe_pairs(dim: int, count: int = 1000, seed: int = DEFAULT_SEED) -> list:
    """Basis pairs ``(e_i, e_j)`` for all ``i, j`` followed by seeded random pairs."""
    basis = _basis(dim)
    pairs = [(basis[i], basis[j]) for i in range(dim) for j in range(dim)]
    vs = probe_vectors(dim, 2 * count, seed)
    pairs += [(vs[2 * k], vs[2 * k + 1]) for k in range(count)]
    return pairs


def parallelogram_check(Q: QuadraticForm, *, count: int = 1000, seed: int = DEFAULT_SEED,
                        tol: float = PROBE_TOL) -> Report:
    """``Q(u+v) + Q(u-v) = 2(Q(u) + Q(v))`` on the probe set (relative tolerance)."""
    for u, v in probe_pairs(Q.dim, count, seed):
        lhs = Q(_add(u, v)) + Q(_sub(u, v))
        rhs = 2 * (Q(u) + Q(v))
        if not _agree(lhs, rhs, tol, relative=True):
            return Report("parallelogram", False, {"u": u, "v": v},
                          {"lhs": float(lhs), "rhs": float(rhs), "seed": seed})
    return Report("parallelogram", True, None, {"seed": seed, "pairs": Q.dim**2 + count},
                  ["passed on probe set"])


def probe_triples(dim: int, count: int = 1000, seed: int = DEFAULT_SEED) -> list:
    basis = _basis(dim)
    triples = [(basis[i], basis[j], basis[k])
               for i in range(dim) for j in range(dim) for k in range(dim)]
    vs = probe_vectors(dim, 3 * count, seed + 1)
    triples += [(vs[3 * k], vs[3 * k + 1], vs[3 * k + 2]) for k in range(count)]
    return triples


def grade2_form_check(Q: QuadraticForm, *, count: int = 1000, seed: int = DEFAULT_SEED,
                      tol: float = PROBE_TOL) -> Report:
    """Evenness plus ``Q(u+v+w) = Q(u+v) + Q(u+w) + Q(v+w) - Q(u) - Q(v) - Q(w)``.

    The verdict of :func:`parallelogram_check` on the same probe seed is
    recorded alongside; the two must agree for any continuous ``Q``.
    """
    witness = None
    for v in _basis(Q.dim) + probe_vectors(Q.dim, count, seed):
        if not _agree(Q(v), Q(_scale(-1, v)), tol, relative=True):
            witness = {"odd_at": v}
            break
    if witness is None:
        for u, v, w in probe_triples(Q.dim, count, seed):
            lhs = Q(_add(_add(u, v), w))
            rhs = Q(_add(u, v)) + Q(_add(u, w)) + Q(_add(v, w)) - Q(u) - Q(v) - Q(w)
            if not _agree(lhs, rhs, tol, relative=True):
                witness = {"u": u, "v": v, "w": w}
                break
    par = parallelogram_check(Q, count=count, seed=seed, tol=tol)
    passed = witness is None
    details = {"seed": seed, "parallelogram_verdict": par.passed,
               "verdicts_agree": par.passed == passed}
    return Report("grade2_form", passed, witness, details,
                  ["passed on probe set"] if passed else [])


def from_quadratic(Q: QuadraticForm, dim: Optional[int] = None, *, seed: int = DEFAULT_SEED,
                   probes: int = 100) -> BilinearForm:
    """Recover the symmetric bilinear form whose quadratic form is ``Q``.

    ``matrix[i][j] = polarize(Q, e_i, e_j)``; the result is then compared to
    ``Q`` on ``probes`` seeded random vectors (tolerance 1e-8, relative).
    """
    dim = Q.dim if dim is None else dim
    if dim != Q.dim:
        raise FormError("dimension mismatch")
    par = parallelogram_check(Q, seed=seed)
    if not par.passed:
        raise FormError("parallelogram law fails", witness=par.witness)
    basis = _basis(dim)
    rows = [[polarize(Q, basis[i], basis[j]) for j in range(dim)] for i in range(dim)]
    B = BilinearForm(tuple(tuple(r) for r in rows))
    for v in probe_vectors(dim, probes, seed + 2):
        if not _agree(eval_Q(B, v), Q(v), PROBE_TOL, relative=True):
            raise FormError("reconstructed form does not reproduce Q", witness=v)
    return B


def graden_form_expand(Q: QuadraticForm, vs: Sequence[Vector], *, tol: float = PROBE_TOL):
    """``sum_{i<j} Q(v_i + v_j) - (n-2) sum_i Q(v_i)`` for ``n >= 3`` vectors.

    Raises :class:`FormError` when the value differs from ``Q(sum v_i)``. For
    four vectors the grade-3 alternating expansion is checked too.
    """
    vs = [list(v) for v in vs]
    if len(vs) < 3:
        raise FormError("need at least three vectors")
    _check_dim(*vs, dim=Q.dim)
    n = len(vs)
    total = vs[0]
    for v in vs[1:]:
        total = _add(total, v)
    pair_sum = sum(Q(_add(a, b)) for a, b in itertools.combinations(vs, 2))
    single_sum = sum(Q(v) for v in vs)
    rhs = pair_sum - (n - 2) * single_sum
    target = Q(total)
    if not _agree(rhs, target, tol, relative=True):
        raise FormError("expansion does not match Q(sum)", witness=vs)
    if n == 4:
        triple_sum = sum(Q(_add(_add(a, b), c)) for a, b, c in itertools.combinations(vs, 3))
        grade3 = triple_sum - pair_sum + single_sum
        if not _agree(grade3, target, tol, relative=True):
            raise FormError("grade-3 expansion does not match Q(sum)", witness=vs)
    return rhs


def quantum_form(lam: PairMeasureMatrix, f: Vector):
    """``Q_q(f) = sum_{i,j} lambda_ij f_i f_j``."""
    n = lam.universe.n
    _check_dim(f, dim=n)
    return sum(lam.entries[i][j] * f[i] * f[j] for i in range(n) for j in range(n))


def quantum_bilinear(lam: PairMeasureMatrix) -> BilinearForm:
    return BilinearForm(lam.entries)


def indicator(n: int, mask: int) -> list:
    return [1 if mask >> i & 1 else 0 for i in range(n)]


def theorem36_check(nu: FiniteMeasure, f: Vector, *, tol: float = 1e-12) -> Report:
    """For an ordinary measure the quantum form equals the integral of ``f**2``.

    The pair matrix of a measure is diagonal: ``lambda(A x B) = nu(A & B)``.
    """
    if not nu.nonnegative:
        raise FormError("measure must be nonnegative")
    n = nu.universe.n
    _check_dim(f, dim=n)
    zero = Fraction(0) if nu.exact else 0.0
    diag = tuple(tuple(nu.weights[i] if i == j else zero for j in range(n)) for i in range(n))
    q = quantum_form(PairMeasureMatrix(nu.universe, diag), f)
    integral = sum(f[i] * f[i] * nu.weights[i] for i in range(n))
    passed = _agree(q, integral, tol)
    return Report("theorem36", passed, None if passed else {"f": list(f)},
                  {"quantum_form": q, "integral_f_squared": integral})
