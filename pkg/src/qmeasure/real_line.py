"""q-integration on [0, 1].

The integrand is a :class:`PiecewiseMonotone` function, so every superlevel
set is a finite union of intervals computed from inverse oracles. The layer
function ``lam -> mu({f > lam})`` is smooth between the images of piece
endpoints (and of the measure's own critical points), so the lambda axis is
split there and each part is integrated by adaptive Simpson.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from typing import Callable, Optional, Sequence

import numpy as np

from .intervals import IntervalUnion
from .report import Report

INVERSE_TOL = 1e-12
BISECTION_TOL = 1e-13
DEFAULT_TOL = 1e-8
DEFAULT_BUDGET = 1_000_000
MAX_DEPTH = 60


class QuadratureError(RuntimeError):
    pass


class NegativeMeasureError(ValueError):
    """A q-measure came out negative on some set: the measure is not valid there."""


# --------------------------------------------------------------------------
# measures


@dataclass(frozen=True)
class RealQMeasure:
    """A set function on interval unions of [0, 1].

    ``kind`` is ``"lebesgue"`` (the ordinary measure), ``"q_lebesgue"``
    (``nu(A)**2``) or ``"destructive"`` (``nu(A) - 2 nu(A & (A - s))``, where
    ``A - s = {x : x + s in A}``).
    """

    kind: str
    shift: object = Fraction(3, 4)

    def __post_init__(self):
        if self.kind not in ("lebesgue", "q_lebesgue", "destructive"):
            raise ValueError(f"unknown measure kind {self.kind!r}")
        if self.kind == "destructive" and not 0 < self.shift < 1:
            raise ValueError("shift must lie in (0, 1)")

    @classmethod
    def lebesgue(cls) -> "RealQMeasure":
        return cls("lebesgue")

    @classmethod
    def q_lebesgue(cls) -> "RealQMeasure":
        return cls("q_lebesgue")

    @classmethod
    def destructive(cls, s=Fraction(3, 4)) -> "RealQMeasure":
        return cls("destructive", s)

    @property
    def name(self) -> str:
        if self.kind == "destructive":
            return f"destructive:{self.shift}"
        return self.kind.replace("_", "")

    def __call__(self, A: IntervalUnion):
        return measure(self, A)

    def critical_points(self) -> list:
        """Points of [0, 1] where the layer function can kink for this measure."""
        if self.kind == "destructive":
            return [self.shift, 1 - self.shift]
        return []


def measure(mu: RealQMeasure, A: IntervalUnion):
    nu = A.lebesgue()
    if mu.kind == "lebesgue":
        return nu
    if mu.kind == "q_lebesgue":
        return nu * nu
    overlap = A.intersection(A.shift_preimage(mu.shift)).lebesgue()
    value = nu - 2 * overlap
    if value < 0:
        if isinstance(value, Rational) or value < -1e-12:
            raise NegativeMeasureError(f"destructive measure negative ({value}) on {A}")
        value = 0.0
    return value


# --------------------------------------------------------------------------
# integrands


@dataclass(frozen=True)
class Piece:
    lo: object
    hi: object
    direction: str  # "increasing", "decreasing" or "constant"
    fn: Callable
    inverse: Optional[Callable] = None

    def __post_init__(self):
        if self.direction not in ("increasing", "decreasing", "constant"):
            raise ValueError(f"bad direction {self.direction!r}")
        if not self.lo < self.hi:
            raise ValueError("empty piece")

    def inv(self, lam):
        if self.inverse is not None:
            return self.inverse(lam)
        return _bisect(self, lam)


def _bisect(piece: Piece, lam):
    lo, hi = float(piece.lo), float(piece.hi)
    inc = piece.direction == "increasing"
    while hi - lo > BISECTION_TOL:
        mid = 0.5 * (lo + hi)
        if (piece.fn(mid) > lam) == inc:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class PiecewiseMonotone:
    """Pieces on consecutive intervals partitioning ``[0, 1]``."""

    pieces: tuple
    label: str = field(default="f", compare=False)

    def __post_init__(self):
        pieces = tuple(sorted(self.pieces, key=lambda p: p.lo))
        if not pieces or pieces[0].lo != 0 or pieces[-1].hi != 1:
            raise ValueError("pieces must cover [0, 1]")
        for p, q in zip(pieces, pieces[1:]):
            if p.hi != q.lo:
                raise ValueError("pieces must be contiguous")
        object.__setattr__(self, "pieces", pieces)

    def piece_at(self, x) -> Piece:
        for p in self.pieces:
            if p.lo <= x < p.hi:
                return p
        return self.pieces[-1]

    def __call__(self, x):
        return self.piece_at(x).fn(x)

    def is_monotone(self) -> bool:
        """Globally monotone (constant pieces allowed) in one direction."""
        dirs = {p.direction for p in self.pieces} - {"constant"}
        if len(dirs) > 1:
            return False
        if not dirs:
            dirs = {"increasing"}
        inc = dirs == {"increasing"}
        for p, q in zip(self.pieces, self.pieces[1:]):
            left, right = p.fn(p.hi), q.fn(q.lo)
            if (left > right) if inc else (left < right):
                return False
        return True

    def scaled(self, c) -> "PiecewiseMonotone":
        """``c * f``."""
        if c == 0:
            return constant(0)
        flip = {"increasing": "decreasing", "decreasing": "increasing", "constant": "constant"}
        out = []
        for p in self.pieces:
            inv = None
            if p.inverse is not None:
                inv = (lambda g: lambda lam: g(lam / c))(p.inverse)
            out.append(Piece(p.lo, p.hi, p.direction if c > 0 else flip[p.direction],
                             (lambda g: lambda x: c * g(x))(p.fn), inv))
        return PiecewiseMonotone(tuple(out), f"{c}*({self.label})")

    def shifted(self, c) -> "PiecewiseMonotone":
        """``f + c``."""
        out = []
        for p in self.pieces:
            inv = None
            if p.inverse is not None:
                inv = (lambda g: lambda lam: g(lam - c))(p.inverse)
            out.append(Piece(p.lo, p.hi, p.direction, (lambda g: lambda x: g(x) + c)(p.fn), inv))
        return PiecewiseMonotone(tuple(out), f"({self.label})+{c}")


def constant(c) -> PiecewiseMonotone:
    return PiecewiseMonotone((Piece(Fraction(0), Fraction(1), "constant", lambda x: c),),
                             f"const:{c}")


def linear(slope=1, intercept=0) -> PiecewiseMonotone:
    """``slope * x + intercept``; rational coefficients keep superlevel sets exact."""
    if slope == 0:
        return constant(intercept)
    return PiecewiseMonotone((Piece(
        Fraction(0), Fraction(1), "increasing" if slope > 0 else "decreasing",
        lambda x: slope * x + intercept, lambda lam: (lam - intercept) / slope),),
        f"{slope}*x+{intercept}")


def identity() -> PiecewiseMonotone:
    f = linear(Fraction(1), Fraction(0))
    return PiecewiseMonotone(f.pieces, "x")


def monomial(n: int) -> PiecewiseMonotone:
    if n < 0:
        raise ValueError("exponent must be >= 0")
    if n == 0:
        f = constant(1)
        return PiecewiseMonotone(f.pieces, "x^0")
    if n == 1:
        return identity()
    return PiecewiseMonotone((Piece(Fraction(0), Fraction(1), "increasing",
                                    lambda x: x**n, lambda lam: lam ** (1.0 / n)),), f"x^{n}")


def exponential() -> PiecewiseMonotone:
    return PiecewiseMonotone((Piece(Fraction(0), Fraction(1), "increasing",
                                    lambda x: math.exp(x), math.log),), "exp")


def square_plus_identity() -> PiecewiseMonotone:
    """``x**2 + x`` with inverse ``(sqrt(1 + 4 lam) - 1) / 2``."""
    return PiecewiseMonotone((Piece(Fraction(0), Fraction(1), "increasing",
                                    lambda x: x * x + x,
                                    lambda lam: -0.5 + 0.5 * math.sqrt(1 + 4 * lam)),), "x^2+x")


def step(a, b, height) -> PiecewiseMonotone:
    """``height * chi_[a, b)`` as three constant pieces (empty ones dropped)."""
    pieces = []
    for lo, hi, v in ((Fraction(0), a, 0), (a, b, height), (b, Fraction(1), 0)):
        if lo < hi:
            pieces.append(Piece(lo, hi, "constant", (lambda c: lambda x: c)(v)))
    return PiecewiseMonotone(tuple(pieces), f"indicator:{a},{b}:{height}")


def from_callable(fn: Callable, breakpoints: Sequence = (), label: str = "f") -> PiecewiseMonotone:
    """Pieces between ``breakpoints``; direction from endpoint values, inverse by bisection."""
    cuts = [Fraction(0), *sorted(breakpoints), Fraction(1)]
    pieces = []
    for lo, hi in zip(cuts, cuts[1:]):
        a, b = fn(lo), fn(hi)
        d = "increasing" if b > a else "decreasing" if b < a else "constant"
        pieces.append(Piece(lo, hi, d, fn))
    return PiecewiseMonotone(tuple(pieces), label)


# --------------------------------------------------------------------------
# superlevel sets


def _checked_inverse(p: Piece, lam):
    c = p.inv(lam)
    err = abs(p.fn(c) - lam)
    if err > INVERSE_TOL * max(1.0, abs(float(lam))):
        # bisection is only accurate in x; accept when the piece is steep
        if p.inverse is not None:
            raise ValueError(f"inverse oracle off by {err} at lambda={lam}")
    return min(max(c, p.lo), p.hi)


def _level_set(f: PiecewiseMonotone, lam, above: bool, closed: bool) -> list:
    """Pieces of ``{f > lam}`` (``above``) or ``{f < lam}``; ``closed`` uses >= / <=."""

    def holds(v):
        if above:
            return v >= lam if closed else v > lam
        return v <= lam if closed else v < lam

    out = []
    for p in f.pieces:
        if p.direction == "constant":
            if holds(p.fn(p.lo)):
                out.append((p.lo, p.hi))
            continue
        lo_in, hi_in = holds(p.fn(p.lo)), holds(p.fn(p.hi))
        if lo_in and hi_in:
            out.append((p.lo, p.hi))
        elif lo_in:
            out.append((p.lo, _checked_inverse(p, lam)))
        elif hi_in:
            out.append((_checked_inverse(p, lam), p.hi))
        # neither endpoint: monotone piece never crosses lam
    return out


def superlevel_set(f: PiecewiseMonotone, lam, domain: Optional[IntervalUnion] = None,
                   *, closed: bool = False) -> IntervalUnion:
    """``{x in domain : f(x) > lam}`` (``>=`` when ``closed``)."""
    s = IntervalUnion(tuple(_level_set(f, lam, True, closed)),
                      (f(1) >= lam) if closed else (f(1) > lam))
    return s if domain is None else s.intersection(domain)


def sublevel_set(f: PiecewiseMonotone, lam, domain: Optional[IntervalUnion] = None,
                 *, closed: bool = False) -> IntervalUnion:
    """``{x in domain : f(x) < lam}`` (``<=`` when ``closed``)."""
    s = IntervalUnion(tuple(_level_set(f, lam, False, closed)),
                      (f(1) <= lam) if closed else (f(1) < lam))
    return s if domain is None else s.intersection(domain)


# --------------------------------------------------------------------------
# quadrature


@dataclass
class QuadResult:
    value: float
    error_estimate: float
    evaluations: int
    subintervals: int = 0


class _Counter:
    def __init__(self, budget):
        self.n = 0
        self.budget = budget

    def tick(self):
        self.n += 1
        if self.n > self.budget:
            raise QuadratureError(f"evaluation budget of {self.budget} exhausted")


def adaptive_simpson(g: Callable[[float], float], a: float, b: float, tol: float,
                     counter: _Counter, ga: Optional[float] = None,
                     gb: Optional[float] = None) -> tuple:
    """Adaptive Simpson with Richardson correction; returns ``(value, error_estimate)``.

    ``ga``/``gb`` override the endpoint values (one-sided limits at jumps).
    """
    if ga is None:
        counter.tick()
        ga = g(a)
    if gb is None:
        counter.tick()
        gb = g(b)
    m = 0.5 * (a + b)
    counter.tick()
    gm = g(m)
    whole = (b - a) / 6.0 * (ga + 4 * gm + gb)
    # layer functions have algebraic singularities where f' vanishes; a floor
    # on the local tolerance keeps the bisection depth finite there
    floor = tol * 2.0**-24
    total = 0.0
    err = 0.0
    stack = [(a, b, ga, gm, gb, whole, tol, 0)]
    while stack:
        a, b, ga, gm, gb, whole, eps, depth = stack.pop()
        m = 0.5 * (a + b)
        lm, rm = 0.5 * (a + m), 0.5 * (m + b)
        counter.tick()
        glm = g(lm)
        counter.tick()
        grm = g(rm)
        left = (m - a) / 6.0 * (ga + 4 * glm + gm)
        right = (b - m) / 6.0 * (gm + 4 * grm + gb)
        delta = left + right - whole
        if abs(delta) <= 15 * eps or depth >= MAX_DEPTH:
            if depth >= MAX_DEPTH and abs(delta) > 15 * eps:
                raise QuadratureError(f"no convergence on [{a}, {b}]")
            total += left + right + delta / 15.0
            err += abs(delta) / 15.0
        else:
            half = max(eps / 2, floor)
            stack.append((m, b, gm, grm, gb, right, half, depth + 1))
            stack.append((a, m, ga, glm, gm, left, half, depth + 1))
    return total, err


def _domain_components(f: PiecewiseMonotone, domain: IntervalUnion) -> list:
    """``(piece, lo, hi)`` for each nonempty piece-domain overlap."""
    out = []
    for p in f.pieces:
        for a, b in domain.pieces:
            lo, hi = max(a, p.lo), min(b, p.hi)
            if lo < hi:
                out.append((p, lo, hi))
    return out


def _lambda_breakpoints(mu: RealQMeasure, f: PiecewiseMonotone, domain: IntervalUnion,
                        sign: int) -> tuple:
    comps = _domain_components(f, domain)
    xs_extra = list(mu.critical_points())
    if mu.kind == "destructive":
        for a, b in domain.pieces:
            xs_extra += [a + mu.shift, b + mu.shift, a - mu.shift, b - mu.shift]
    lams = []
    for p, lo, hi in comps:
        lams += [sign * p.fn(lo), sign * p.fn(hi)]
        for x in xs_extra:
            if lo < x < hi:
                lams.append(sign * p.fn(x))
    top = max(lams) if lams else 0
    inner = sorted({lam for lam in lams if 0 < lam < top})
    return top, inner


def _layer(mu, f, domain, sign, closed):
    if sign > 0:
        return lambda lam: measure(mu, superlevel_set(f, lam, domain, closed=closed))
    return lambda lam: measure(mu, sublevel_set(f, -lam, domain, closed=closed))


def _integrate_part(mu, f, domain, sign, tol, counter) -> tuple:
    top, inner = _lambda_breakpoints(mu, f, domain, sign)
    if top <= 0:
        return 0.0, 0.0, 0
    cuts = [0, *inner, top]
    open_g = _layer(mu, f, domain, sign, closed=False)
    closed_g = _layer(mu, f, domain, sign, closed=True)
    g = lambda lam: float(open_g(lam))
    value = err = 0.0
    k = len(cuts) - 1
    for a, b in zip(cuts, cuts[1:]):
        # right-continuous layer function: the right endpoint needs the left limit
        counter.tick()
        gb = float(closed_g(b))
        v, e = adaptive_simpson(g, float(a), float(b), tol / k, counter, gb=gb)
        value += v
        err += e
    return value, err, k


def q_integral_real(mu: RealQMeasure, f: PiecewiseMonotone,
                    domain: Optional[IntervalUnion] = None, tol: float = DEFAULT_TOL,
                    budget: int = DEFAULT_BUDGET) -> QuadResult:
    """q-integral of ``f * chi_domain`` by quadrature of its layer functions.

    The positive and negative parts are integrated separately and each gets
    half the tolerance.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    domain = IntervalUnion.full() if domain is None else domain
    counter = _Counter(budget)
    pos, e1, k1 = _integrate_part(mu, f, domain, +1, tol / 2, counter)
    neg, e2, k2 = _integrate_part(mu, f, domain, -1, tol / 2, counter)
    err = e1 + e2
    if err > tol:
        raise QuadratureError(f"error estimate {err} exceeds tolerance {tol}")
    return QuadResult(pos - neg, err, counter.n, k1 + k2)


def q_integral_piecewise_exact(mu: RealQMeasure, f: PiecewiseMonotone,
                               domain: Optional[IntervalUnion] = None):
    """Exact layer integral when the layer function is a polynomial of degree <= 3 between breakpoints.

    One Simpson panel per breakpoint interval, evaluated in the arithmetic of
    ``f`` and its inverses (``Fraction`` for :func:`linear` integrands). A
    two-panel evaluation must reproduce each panel exactly, otherwise
    ``ValueError`` is raised.
    """
    domain = IntervalUnion.full() if domain is None else domain
    total = Fraction(0)
    for sign in (+1, -1):
        top, inner = _lambda_breakpoints(mu, f, domain, sign)
        if top <= 0:
            continue
        cuts = [Fraction(0), *inner, top]
        g = _layer(mu, f, domain, sign, closed=False)
        gc = _layer(mu, f, domain, sign, closed=True)
        part = Fraction(0)
        for a, b in zip(cuts, cuts[1:]):
            m = (a + b) / 2
            ga, gm, gb = g(a), g(m), gc(b)
            one = (b - a) / 6 * (ga + 4 * gm + gb)
            gl, gr = g((a + m) / 2), g((m + b) / 2)
            two = (m - a) / 6 * (ga + 4 * gl + gm) + (b - m) / 6 * (gm + 4 * gr + gb)
            if one != two:
                raise ValueError(f"layer function is not cubic on [{a}, {b}]")
            part += one
        total += sign * part
    return total


# --------------------------------------------------------------------------
# closed forms and checks


def monomial_integral_closed(n: int, y):
    """q-Lebesgue integral of ``x**n`` over ``[0, y]``: ``2 y**(n+2) / ((n+1)(n+2))``."""
    if n < 0:
        raise ValueError("n must be >= 0")
    num = 2 * y ** (n + 2)
    den = (n + 1) * (n + 2)
    return Fraction(num) / den if isinstance(y, Rational) else num / den


def exp_integral_closed(y) -> float:
    """q-Lebesgue integral of ``exp`` over ``[0, y]``: ``2 (e**y - y - 1)``."""
    y = float(y)
    return 2.0 * (math.expm1(y) - y)


def surprise_additivity_check(y, tol: float = 1e-6, quad_tol: float = 1e-10) -> Report:
    """The q-Lebesgue integral of ``x**2 + x`` on ``[0, y]`` splits as ``y**4/6 + y**3/3``."""
    mu = RealQMeasure.q_lebesgue()
    dom = IntervalUnion.closed(Fraction(0), y)
    res = q_integral_real(mu, square_plus_identity(), dom, quad_tol)
    expected = float(y) ** 4 / 6 + float(y) ** 3 / 3
    err = abs(res.value - expected)
    return Report("surprise_additivity", err <= tol, None if err <= tol else {"y": y},
                  {"y": float(y), "quadrature": res.value, "closed_form": expected,
                   "abs_error": err})


def ftc_second_difference(f: PiecewiseMonotone, y, h: float = 1e-2,
                          quad_tol: float = 1e-10) -> float:
    """``(F(y+h) - 2F(y) + F(y-h)) / (2 h**2)`` with ``F(t)`` the q-Lebesgue integral over ``[0, t]``."""
    mu = RealQMeasure.q_lebesgue()
    F = [q_integral_real(mu, f, IntervalUnion.closed(0.0, float(y) + k * h), quad_tol).value
         for k in (-1, 0, 1)]
    return 0.5 * (F[2] - 2 * F[1] + F[0]) / (h * h)


def quantum_ftc_check(f: PiecewiseMonotone, grid: Sequence, h: float = 1e-2,
                      tol: float = 5e-3, quad_tol: float = 1e-10) -> Report:
    """Half the second difference of ``y -> int_[0,y] f dmu`` against ``f(y)``, q-Lebesgue.

    Refuses non-monotone ``f``; grid points must lie in ``(2h, 1 - 2h)``.
    """
    if not f.is_monotone():
        raise ValueError("quantum FTC check needs a monotone integrand")
    errors = []
    for y in grid:
        if not 2 * h < y < 1 - 2 * h:
            raise ValueError(f"grid point {y} outside (2h, 1 - 2h)")
        errors.append(abs(ftc_second_difference(f, y, h, quad_tol) - float(f(y))))
    worst = max(errors) if errors else 0.0
    passed = worst <= tol
    return Report("quantum_ftc", passed,
                  None if passed else {"y": list(grid)[int(np.argmax(errors))]},
                  {"function": f.label, "h": h, "max_error": worst,
                   "errors": dict(zip([float(y) for y in grid], errors))})


def pointwise_le_ae(f: PiecewiseMonotone, g: PiecewiseMonotone, samples: int = 4096) -> Report:
    """Whether ``f <= g`` off a Lebesgue-null set, probed at cell midpoints.

    Cells are cut at every piece endpoint of ``f`` and ``g`` and refined
    uniformly, so a positive-length violation on some cell is always seen.
    """
    cuts = sorted({float(x) for p in f.pieces + g.pieces for x in (p.lo, p.hi)}
                  | set(np.linspace(0.0, 1.0, samples + 1).tolist()))
    for a, b in zip(cuts, cuts[1:]):
        x = 0.5 * (a + b)
        if f(x) > g(x):
            return Report("pointwise_ae", False, {"x": x, "f": f(x), "g": g(x)})
    return Report("pointwise_ae", True)


def _value_breakpoints(f: PiecewiseMonotone) -> list:
    return [v for p in f.pieces for v in (p.fn(p.lo), p.fn(p.hi))]


def real_mu_dominates(mu: RealQMeasure, f: PiecewiseMonotone, g: PiecewiseMonotone,
                      lam_grid: Optional[Sequence] = None, points: int = 64) -> Report:
    """``mu({f > lam}) <= mu({g > lam})`` on a lambda grid plus breakpoint midpoints."""
    bps = sorted({float(v) for v in _value_breakpoints(f) + _value_breakpoints(g)})
    top = max(bps + [0.0])
    grid = set(bps)
    grid |= {0.5 * (a + b) for a, b in zip(bps, bps[1:])}
    grid.add(min(bps + [0.0]) - 1.0)
    if lam_grid is None:
        grid |= set(np.linspace(0.0, top, points).tolist())
    else:
        grid |= {float(x) for x in lam_grid}
    for lam in sorted(grid):
        lhs = measure(mu, superlevel_set(f, lam))
        rhs = measure(mu, superlevel_set(g, lam))
        if lhs > rhs + 1e-12:
            return Report("mu_domination", False,
                          {"lambda": lam, "f_side": float(lhs), "g_side": float(rhs)},
                          {"grid_points": len(grid)})
    return Report("mu_domination", True, None, {"grid_points": len(grid)})


def mu_domination_check(mu, f, g, lam_grid=None) -> Report:
    """Domination for either a finite table with finite functions or a real measure."""
    from .finite_space import QMeasureTable
    from .q_integral_finite import mu_dominates

    if isinstance(mu, QMeasureTable):
        return mu_dominates(mu, f, g)
    return real_mu_dominates(mu, f, g, lam_grid)


def ramp_sequence(i: int) -> PiecewiseMonotone:
    """``(1 - 1/i) x``."""
    return linear(1 - Fraction(1, i), Fraction(0))


def monotone_convergence_demo(mu: RealQMeasure,
                              sequence: Callable[[int], PiecewiseMonotone] = ramp_sequence,
                              limit: Optional[PiecewiseMonotone] = None,
                              dominator: Optional[PiecewiseMonotone] = None,
                              i_max: int = 1000, tol: float = 1e-6,
                              quad_tol: float = 1e-10, check_grid: int = 65) -> Report:
    """Integrals of an increasing sequence against the integral of its limit.

    Checks pointwise monotonicity on ``check_grid`` points and domination of
    every term by ``dominator``; a failed precondition fails the report.
    The report passes when the gap at ``i_max`` is within ``tol``.
    """
    limit = identity() if limit is None else limit
    dominator = limit if dominator is None else dominator
    xs = np.linspace(0.0, 1.0, check_grid).tolist()
    integrals = []
    prev = None
    for i in range(1, i_max + 1):
        fi = sequence(i)
        vals = [fi(x) for x in xs]
        if prev is not None and any(a > b + 1e-15 for a, b in zip(prev, vals)):
            return Report("monotone_convergence", False, {"not_increasing_at": i})
        prev = vals
        dom = real_mu_dominates(mu, fi, dominator, points=16)
        if not dom.passed:
            return Report("monotone_convergence", False,
                          {"domination_fails_at": i, **dom.witness})
        integrals.append(q_integral_real(mu, fi, tol=quad_tol).value)
    target = q_integral_real(mu, limit, tol=quad_tol).value
    gap = abs(integrals[-1] - target)
    return Report("monotone_convergence", gap <= tol, None if gap <= tol else {"gap": gap},
                  {"integrals": integrals, "limit_integral": target, "gap": gap,
                   "i_max": i_max, "tol": tol})
