"""Command-line interface.

Exit codes: 0 success, 1 a check failed, 2 bad input or unknown name,
3 quadrature tolerance not reached.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from pathlib import Path

from ._numeric import parse_number, to_output
from .finite_space import (
    DEFAULT_SEED,
    DecoherenceMatrix,
    MeasureSpaceError,
    center_measure_check,
    decoherence_check,
    grade2_check,
    mu_center,
    members,
    quantum_coin,
    regularity_check,
    splitting_sets,
    theorem21_check,
    theorem24_check,
)
from .induced_measure import radon_nikodym_counterexample
from .intervals import IntervalUnion
from .q_integral_finite import (
    FiniteFunction,
    convergence_failure_demo,
    grade2_integral_counterexample,
    naive_integral,
    q_integral,
)
from .real_line import (
    NegativeMeasureError,
    Piece,
    PiecewiseMonotone,
    QuadratureError,
    RealQMeasure,
    constant,
    exp_integral_closed,
    exponential,
    ftc_second_difference,
    identity,
    linear,
    monomial,
    monomial_integral_closed,
    q_integral_piecewise_exact,
    q_integral_real,
    quantum_ftc_check,
    square_plus_identity,
    step,
)
from .serialization import (
    DocumentError,
    function_from_doc,
    load_json,
    matrix_from_doc,
    table_from_doc,
)

EXIT_OK, EXIT_CHECK, EXIT_INPUT, EXIT_TOL = 0, 1, 2, 3

SUITES = ("grade2", "theorem21", "regularity", "center", "theorem24", "decoherence", "all")
DEMOS = ("quantum-coin", "naive-failure", "grade2-integral-gap", "radon-nikodym", "ftc",
         "surprise-additivity", "destructive-pairs")


class UsageError(ValueError):
    pass


# --------------------------------------------------------------------------
# mini-languages


def _num(text):
    try:
        return parse_number(text)
    except (TypeError, ValueError):
        raise UsageError(f"not a number: {text!r}") from None


def parse_measure(name: str) -> RealQMeasure:
    """``qlebesgue``, ``lebesgue`` or ``destructive:s``."""
    if name == "qlebesgue":
        return RealQMeasure.q_lebesgue()
    if name == "lebesgue":
        return RealQMeasure.lebesgue()
    if name.startswith("destructive"):
        _, _, s = name.partition(":")
        try:
            return RealQMeasure.destructive(_num(s) if s else Fraction(3, 4))
        except ValueError as e:
            raise UsageError(str(e)) from None
    raise UsageError(f"unknown measure {name!r}")


def parse_function(text: str) -> PiecewiseMonotone:
    """Integrands on [0, 1]: ``x``, ``x^n``, ``exp``, ``x^2+x``, ``linear:m,c``,
    ``const:c``, ``indicator:a,b:height`` and ``piecewise:<json>``.

    The piecewise form is a list of ``{"from": a, "to": b, "expr": e}``
    where ``e`` is any single-piece form above.
    """
    text = text.strip()
    if text == "x":
        return identity()
    if text == "exp":
        return exponential()
    if text == "x^2+x":
        return square_plus_identity()
    if text.startswith("x^"):
        try:
            n = int(text[2:])
        except ValueError:
            raise UsageError(f"bad exponent in {text!r}") from None
        if n < 0:
            raise UsageError("exponent must be >= 0")
        return monomial(n)
    head, _, rest = text.partition(":")
    if head == "const" and rest:
        return constant(_num(rest))
    if head == "linear" and rest:
        parts = rest.split(",")
        if len(parts) != 2:
            raise UsageError("linear needs slope,intercept")
        return linear(_num(parts[0]), _num(parts[1]))
    if head == "indicator" and rest:
        bounds, _, height = rest.partition(":")
        ab = bounds.split(",")
        if len(ab) != 2 or not height:
            raise UsageError("indicator needs a,b:height")
        a, b = _num(ab[0]), _num(ab[1])
        if not 0 <= a < b <= 1:
            raise UsageError("indicator needs 0 <= a < b <= 1")
        return step(a, b, _num(height))
    if head == "piecewise" and rest:
        return _parse_piecewise(rest)
    raise UsageError(f"unknown function {text!r}")


def _parse_piecewise(text: str) -> PiecewiseMonotone:
    try:
        items = json.loads(text)
    except json.JSONDecodeError as e:
        raise UsageError(f"bad piecewise JSON: {e}") from None
    if not isinstance(items, list) or not items:
        raise UsageError("piecewise form must be a nonempty list")
    pieces = []
    for item in items:
        if not isinstance(item, dict) or not {"from", "to", "expr"} <= set(item):
            raise UsageError(f"bad piece {item!r}")
        sub = parse_function(str(item["expr"]))
        if len(sub.pieces) != 1:
            raise UsageError(f"piece expression {item['expr']!r} is itself piecewise")
        p = sub.pieces[0]
        try:
            pieces.append(Piece(_num(item["from"]), _num(item["to"]), p.direction, p.fn, p.inverse))
        except ValueError as e:
            raise UsageError(str(e)) from None
    try:
        return PiecewiseMonotone(tuple(pieces), "piecewise")
    except ValueError as e:
        raise UsageError(str(e)) from None


def parse_domain(text: str | None) -> IntervalUnion:
    if text is None:
        return IntervalUnion.full()
    parts = text.split(",")
    if len(parts) != 2:
        raise UsageError("domain must be a,b")
    a, b = _num(parts[0]), _num(parts[1])
    if not 0 <= a <= b <= 1:
        raise UsageError("domain must satisfy 0 <= a <= b <= 1")
    return IntervalUnion.closed(a, b)


def _list(text: str | None, default) -> list:
    if text is None:
        return list(default)
    return [_num(t) for t in text.split(",") if t.strip()]


def _int_range(text: str | None, default) -> list:
    """``0..6``, ``1,3,5`` or empty."""
    if text is None:
        return list(default)
    text = text.strip()
    if not text:
        return []
    if ".." in text:
        lo, _, hi = text.partition("..")
        try:
            return list(range(int(lo), int(hi) + 1))
        except ValueError:
            raise UsageError(f"bad range {text!r}") from None
    try:
        return [int(t) for t in text.split(",")]
    except ValueError:
        raise UsageError(f"bad integer list {text!r}") from None


# --------------------------------------------------------------------------
# output


def _plain(x):
    """JSON-safe form: rationals and floats become strings."""
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if isinstance(x, (int, Fraction, float)):
        return to_output(x)
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    return str(x)


class Output:
    def __init__(self, path: str | None):
        self.path = path
        self.buf = io.StringIO()

    def write(self, text: str):
        self.buf.write(text)

    def close(self):
        data = self.buf.getvalue()
        if self.path:
            Path(self.path).write_text(data, newline="\n")
        else:
            sys.stdout.write(data)


def _emit_record(out: Output, record: dict, fmt: str):
    if fmt == "json":
        out.write(json.dumps(_plain(record), indent=2) + "\n")
    elif fmt == "csv":
        _emit_csv(out, list(record), [record])
    else:
        for k, v in _plain(record).items():
            out.write(f"{k}: {v if not isinstance(v, (dict, list)) else json.dumps(v)}\n")


def _emit_csv(out: Output, header: list, rows: list):
    w = csv.writer(out.buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_plain(r[h]) for h in header])


# --------------------------------------------------------------------------
# commands


def cmd_integrate(args, out: Output) -> int:
    if args.tol <= 0:
        raise UsageError("--tol must be positive")
    if args.function is None:
        raise UsageError("integrate needs --function")
    if args.input:
        return _integrate_finite(args, out)
    mu = parse_measure(args.measure or "qlebesgue")
    f = parse_function(args.function)
    dom = parse_domain(args.domain)
    try:
        res = q_integral_real(mu, f, dom, tol=args.tol)
    except QuadratureError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_TOL
    except NegativeMeasureError as e:
        raise UsageError(str(e)) from None
    record = {"value": res.value, "error_estimate": res.error_estimate,
              "evaluations": str(res.evaluations), "measure": mu.name,
              "function": args.function}
    _emit_record(out, record, args.format)
    return EXIT_OK


def _integrate_finite(args, out: Output) -> int:
    mu = _load_table(args.input)
    text = args.function
    try:
        doc = load_json(text) if not text.lstrip().startswith("{") else json.loads(text)
        f = function_from_doc(doc, mu.universe)
    except json.JSONDecodeError as e:
        raise UsageError(f"bad function JSON: {e}") from None
    record = {"value": q_integral(mu, f), "naive": naive_integral(mu, f),
              "error_estimate": Fraction(0) if mu.exact else 0.0, "evaluations": "0",
              "measure": args.input, "function": text}
    _emit_record(out, record, args.format)
    return EXIT_OK


def _load_table(path):
    doc = load_json(path)
    if not isinstance(doc, dict):
        raise DocumentError("top level must be an object")
    return table_from_doc(doc)


def _run_suite(name: str, doc: dict, seed: int) -> list:
    """``(line, passed, record)`` triples."""
    if name == "decoherence":
        if "matrix" not in doc:
            raise UsageError("decoherence suite needs a matrix document")
        D = matrix_from_doc(doc)
        if not isinstance(D, DecoherenceMatrix):
            D = DecoherenceMatrix(D.universe, D.entries,
                                  tuple((Fraction(0),) * D.universe.n for _ in D.entries))
        r = decoherence_check(D, seed=seed)
        return [(r.line(), r.passed, r.to_dict())]
    mu = table_from_doc(doc)
    if name == "grade2":
        r = grade2_check(mu, seed=seed)
    elif name == "theorem21":
        r = theorem21_check(mu, seed=seed)
    elif name == "regularity":
        reg = regularity_check(mu)
        rec = {"name": "regularity", "regular": reg.regular,
               "completely_regular": reg.completely_regular, "witnesses": reg.witnesses}
        # informational: there is no pass/fail verdict
        return [(f"regularity: {reg.line()}", True, rec)]
    elif name == "center":
        r = center_measure_check(mu, seed=seed)
        centre = [members(a) for a in mu_center(mu)]
        r.details["center"] = centre
        r.details["splitting_sets_match"] = mu_center(mu) == splitting_sets(mu)
        return [(r.line() + f" center={centre}", r.passed, r.to_dict())]
    elif name == "theorem24":
        r = theorem24_check(mu, mu(mu.universe.full))
    elif name == "all":
        out = []
        for s in ("grade2", "theorem21", "regularity", "center", "theorem24"):
            out += _run_suite(s, doc, seed)
        return out
    else:
        raise UsageError(f"unknown suite {name!r}")
    return [(r.line(), r.passed, r.to_dict())]


def cmd_check(args, out: Output) -> int:
    if not args.input:
        raise UsageError("check needs --input")
    doc = load_json(args.input)
    if not isinstance(doc, dict):
        raise DocumentError("top level must be an object")
    results = _run_suite(args.suite, doc, args.seed)
    if args.format == "json":
        out.write(json.dumps(_plain([rec for _, _, rec in results]), indent=2) + "\n")
    else:
        for line, _, _ in results:
            out.write(line + "\n")
    return EXIT_OK if all(p for _, p, _ in results) else EXIT_CHECK


def _row(quantity, computed, expected, expect_equal=True, tol=None):
    if tol is None:
        equal = computed == expected
    else:
        equal = abs(float(computed) - float(expected)) <= tol
    if expect_equal:
        verdict = "match" if equal else "mismatch"
    else:
        verdict = "mismatch-as-expected" if not equal else "unexpected-match"
    return {"quantity": quantity, "computed": computed, "expected": expected,
            "verdict": verdict}


def _demo_rows(name: str) -> list:
    if name == "quantum-coin":
        mu = quantum_coin()
        u = mu.universe
        heads = FiniteFunction(u, [2, 1, 1, 0])
        return [_row("mu({x1,x2,x3})", mu(u.mask(["x1", "x2", "x3"])), Fraction(9, 16)),
                _row("integral of heads count", q_integral(mu, heads), Fraction(5, 8)),
                _row("naive integral of heads count", naive_integral(mu, heads), Fraction(3, 8))]
    if name == "naive-failure":
        r = convergence_failure_demo(100)
        d = r.details
        return [_row("naive integral n=1", d["naive"][0], Fraction(1)),
                _row("naive integral n=2", d["naive"][1], Fraction(3, 2)),
                _row("naive integral n=100", d["naive"][-1], Fraction(199, 100)),
                _row("limit of naive integrals vs naive integral of limit",
                     d["naive_limit"], d["naive_of_limit"], expect_equal=False),
                _row("naive integral of the constant 1", d["naive_of_limit"], Fraction(1)),
                _row("q-integral n=100", d["q_integral"][-1], Fraction(1)),
                _row("q-integral of the constant 1", d["q_of_limit"], Fraction(1))]
    if name == "grade2-integral-gap":
        d = grade2_integral_counterexample().details
        return [_row("integral of chi_A+chi_B+chi_C", d["lhs"], Fraction(5, 4)),
                _row("six-term right side", d["rhs"], Fraction(3, 2)),
                _row("left side vs right side", d["lhs"], d["rhs"], expect_equal=False)]
    if name == "radon-nikodym":
        d = radon_nikodym_counterexample().details
        return [_row("forced f(x2)", d["forced_density"]["x2"], Fraction(1)),
                _row("forced f(x3)", d["forced_density"]["x3"], Fraction(1)),
                _row("nu({x2,x3})", d["nu_pair"], Fraction(2)),
                _row("integral of f over {x2,x3}", d["integral_pair"], Fraction(1)),
                _row("nu({x2,x3}) vs integral", d["nu_pair"], d["integral_pair"],
                     expect_equal=False),
                _row("nu absolutely continuous", d["nu_abs_continuous"], True),
                _row("grid representers", d["grid_representers"], 0)]
    if name == "ftc":
        rows = []
        for label, f in (("x", identity()), ("x^2", monomial(2)), ("exp", exponential())):
            r = quantum_ftc_check(f, [0.2, 0.4, 0.6, 0.8])
            rows.append(_row(f"max |F''/2 - f| for f={label} (tolerance 5e-3)",
                             r.details["max_error"], 0.0, tol=5e-3))
        return rows
    if name == "surprise-additivity":
        mu = RealQMeasure.q_lebesgue()
        rows = []
        for y in (Fraction(1, 2), Fraction(1)):
            v = q_integral_real(mu, square_plus_identity(), IntervalUnion.closed(0, y), 1e-10)
            rows.append(_row(f"integral of x^2+x over [0,{y}]", v.value, y**4 / 6 + y**3 / 3,
                             tol=1e-6))
            split = (q_integral_real(mu, monomial(2), IntervalUnion.closed(0, y), 1e-10).value
                     + q_integral_real(mu, identity(), IntervalUnion.closed(0, y), 1e-10).value)
            rows.append(_row(f"sum of integrals of x^2 and x over [0,{y}]", split,
                             y**4 / 6 + y**3 / 3, tol=1e-6))
        return rows
    if name == "destructive-pairs":
        mu = RealQMeasure.destructive()
        q = Fraction(1, 4)
        return [_row("mu([0,1])", mu(IntervalUnion.full()), Fraction(1, 2)),
                _row("mu([0,1/4] u [3/4,1])",
                     mu(IntervalUnion.from_intervals([(0, q), (1 - q, 1)], True)), Fraction(0)),
                _row("mu([0,1/4])", mu(IntervalUnion.closed(0, q)), Fraction(1, 4)),
                _row("integral of x, quadrature", q_integral_real(mu, identity()).value,
                     Fraction(7, 16), tol=1e-6),
                _row("integral of x, exact layer formula",
                     q_integral_piecewise_exact(mu, identity()), Fraction(7, 16))]
    raise UsageError(f"unknown demo {name!r}; choose from {', '.join(DEMOS)}")


def cmd_demo(args, out: Output) -> int:
    rows = _demo_rows(args.name)
    if args.format == "json":
        out.write(json.dumps(_plain({"demo": args.name, "rows": rows}), indent=2) + "\n")
    elif args.format == "csv":
        _emit_csv(out, ["quantity", "computed", "expected", "verdict"], rows)
    else:
        for r in rows:
            out.write(f"{r['quantity']}: {_plain(r['computed'])} vs expected "
                      f"{_plain(r['expected'])}: {r['verdict']}\n")
    ok = all(r["verdict"] in ("match", "mismatch-as-expected") for r in rows)
    return EXIT_OK if ok else EXIT_CHECK


def cmd_table(args, out: Output) -> int:
    if args.tol <= 0:
        raise UsageError("--tol must be positive")
    mu = RealQMeasure.q_lebesgue()
    if args.sweep == "monomial":
        header = ["n", "y", "computed", "closed_form", "abs_error"]
        rows = []
        for n in _int_range(args.n, range(7)):
            if n < 0:
                raise UsageError("n must be >= 0")
            for y in _list(args.y, [Fraction(1)]):
                if not 0 < y <= 1:
                    raise UsageError("y must lie in (0, 1]")
                v = q_integral_real(mu, monomial(n), IntervalUnion.closed(0, y), args.tol).value
                c = monomial_integral_closed(n, y)
                rows.append({"n": n, "y": y, "computed": v, "closed_form": c,
                             "abs_error": abs(v - float(c))})
    elif args.sweep == "exp":
        header = ["y", "computed", "closed_form", "abs_error"]
        rows = []
        for y in _list(args.y, [Fraction(1, 2), Fraction(1)]):
            v = q_integral_real(mu, exponential(), IntervalUnion.closed(0, y), args.tol).value
            c = exp_integral_closed(y)
            rows.append({"y": y, "computed": v, "closed_form": c, "abs_error": abs(v - c)})
    elif args.sweep == "ftc":
        header = ["function", "h", "y", "computed", "closed_form", "abs_error"]
        rows = []
        label = args.function or "x^2"
        f = parse_function(label)
        if not f.is_monotone():
            raise UsageError("FTC sweep needs a monotone function")
        for h in _list(args.h, [0.1, 0.01, 0.001]):
            for y in _list(args.y, [0.5]):
                if not 2 * h < y < 1 - 2 * h:
                    raise UsageError(f"y={y} outside (2h, 1-2h) for h={h}")
                v = ftc_second_difference(f, y, float(h), args.tol)
                c = float(f(y))
                rows.append({"function": label, "h": float(h), "y": float(y), "computed": v,
                             "closed_form": c, "abs_error": abs(v - c)})
    else:
        raise UsageError(f"unknown sweep {args.sweep!r}")
    if args.format == "json":
        out.write(json.dumps(_plain(rows), indent=2) + "\n")
    else:
        _emit_csv(out, header, rows)
    return EXIT_OK


# --------------------------------------------------------------------------
# entry point


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qmeasure", description="q-measures and the q-integral")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "text"), default=None)
    common.add_argument("--output", help="write here instead of stdout")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--tol", type=float, default=1e-8)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("integrate", parents=[common], help="q-integral of one function")
    s.add_argument("--measure", help="qlebesgue, lebesgue or destructive:s")
    s.add_argument("--function", help="function expression, or a JSON values document with --input")
    s.add_argument("--domain", help="a,b (default 0,1)")
    s.add_argument("--input", help="finite table JSON; integrates a finite function instead")
    s.set_defaults(run=cmd_integrate, default_format="json")

    s = sub.add_parser("check", parents=[common], help="run a verification suite on a table")
    s.add_argument("--input", help="table or matrix JSON")
    s.add_argument("--suite", default="grade2", help=", ".join(SUITES))
    s.set_defaults(run=cmd_check, default_format="text")

    s = sub.add_parser("demo", parents=[common], help="reproduce a worked example")
    s.add_argument("name", help=", ".join(DEMOS))
    s.set_defaults(run=cmd_demo, default_format="text")

    s = sub.add_parser("table", parents=[common], help="CSV sweeps against closed forms")
    s.add_argument("sweep", help="monomial, exp or ftc")
    s.add_argument("--n", help="exponents, e.g. 0..6 (monomial)")
    s.add_argument("--y", help="comma-separated upper limits")
    s.add_argument("--h", help="comma-separated step sizes (ftc)")
    s.add_argument("--function", help="integrand for the ftc sweep (default x^2)")
    s.set_defaults(run=cmd_table, default_format="csv")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.format is None:
        args.format = args.default_format
    out = Output(args.output)
    try:
        code = args.run(args, out)
    except (UsageError, DocumentError, MeasureSpaceError, NegativeMeasureError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except QuadratureError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_TOL
    out.close()
    return code


if __name__ == "__main__":
    sys.exit(main())
