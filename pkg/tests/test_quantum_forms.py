import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from builders import SEED, pair_matrices, random_pair_matrix
from qmeasure import FiniteMeasure, Universe, from_pair_matrix
from qmeasure.quantum_forms import (
    BilinearForm,
    FormError,
    QuadraticForm,
    eval_Q,
    from_quadratic,
    grade2_form_check,
    graden_form_expand,
    indicator,
    parallelogram_check,
    polarize,
    quantum_bilinear,
    quantum_form,
    theorem36_check,
)

F = Fraction


def euclid(dim):
    return BilinearForm(tuple(tuple(1 if i == j else 0 for j in range(dim)) for i in range(dim)))


def test_identity_form():
    Q = euclid(2).quadratic()
    assert Q([3, 4]) == 25
    assert polarize(Q, [1, 0], [0, 1]) == 0


def test_asymmetric_matrix_rejected():
    with pytest.raises(FormError) as e:
        BilinearForm(((1, 2), (3, 1)))
    assert e.value.witness == (0, 1)


def test_dimension_mismatch():
    with pytest.raises(FormError):
        euclid(2)([1, 2, 3], [1, 2])


@given(pair_matrices(max_n=5), st.data())
def test_polarization_recovers_bilinear_exactly(lam, data):
    B = quantum_bilinear(lam)
    Q = B.quadratic()
    n = B.dim
    vec = st.lists(st.fractions(-3, 3, max_denominator=5), min_size=n, max_size=n)
    u, v = data.draw(vec), data.draw(vec)
    assert polarize(Q, u, v) == B(u, v)


def test_polarization_dual_forms_on_floats():
    rng = random.Random(SEED)
    lam = random_pair_matrix(rng, 4)
    M = tuple(tuple(float(x) for x in r) for r in lam.entries)
    Q = BilinearForm(M).quadratic()
    for _ in range(200):
        u = [rng.uniform(-1, 1) for _ in range(4)]
        v = [rng.uniform(-1, 1) for _ in range(4)]
        s = Q([a + b for a, b in zip(u, v)])
        half = (s - Q(u) - Q(v)) / 2
        quarter = (s - Q([a - b for a, b in zip(u, v)])) / 4
        assert abs(half - quarter) <= 1e-9
        assert abs(polarize(Q, u, v) - BilinearForm(M)(u, v)) <= 1e-9


def test_polarize_rejects_non_quadratic():
    quartic = QuadraticForm(lambda v: sum(x**4 for x in v), 2)
    with pytest.raises(FormError):
        polarize(quartic, [1, 0], [1, 1])


def test_parallelogram_and_grade2_verdicts_agree():
    good = euclid(3).quadratic()
    r = grade2_form_check(good)
    assert r.passed and r.details["verdicts_agree"]
    assert r.notes == ["passed on probe set"]
    quartic = QuadraticForm(lambda v: sum(x**4 for x in v), 3)
    r = grade2_form_check(quartic)
    assert not r.passed and r.details["verdicts_agree"]
    odd = QuadraticForm(lambda v: sum(v), 2)
    r = grade2_form_check(odd)
    assert "odd_at" in r.witness
    assert not parallelogram_check(odd).passed


def test_from_quadratic_recovers_matrix():
    lam = random_pair_matrix(random.Random(SEED), 4)
    Q = quantum_bilinear(lam).quadratic()
    black_box = QuadraticForm(Q.evaluator, 4)
    B = from_quadratic(black_box)
    assert B.matrix == lam.entries


def test_from_quadratic_refuses_non_quadratic():
    with pytest.raises(FormError):
        from_quadratic(QuadraticForm(lambda v: abs(v[0]) ** 3 + v[1] ** 2, 2))


def test_graden_expansion():
    Q = euclid(3).quadratic()
    vs = [[1, 0, 0], [0, 2, 0], [1, 1, 1], [F(1, 2), 0, -1]]
    total = [sum(c) for c in zip(*vs)]
    assert graden_form_expand(Q, vs) == Q(total)
    with pytest.raises(FormError):
        graden_form_expand(Q, vs[:2])
    quartic = QuadraticForm(lambda v: sum(x**4 for x in v), 3)
    with pytest.raises(FormError):
        graden_form_expand(quartic, vs)


@pytest.mark.parametrize("n", range(1, 11))
def test_quantum_form_of_indicator_is_mu(n):
    lam = random_pair_matrix(random.Random(SEED + n), n)
    mu = from_pair_matrix(lam)
    for a in range(1 << n):
        assert quantum_form(lam, indicator(n, a)) == mu(a)


def test_form_of_product_measure_is_integral_of_square():
    rng = random.Random(SEED)
    for _ in range(50):
        n = rng.randint(1, 6)
        nu = FiniteMeasure(Universe.of_size(n), tuple(rng.uniform(0, 2) for _ in range(n)))
        f = [rng.uniform(-2, 2) for _ in range(n)]
        r = theorem36_check(nu, f)
        assert r.passed
        assert abs(r.details["quantum_form"] - r.details["integral_f_squared"]) <= 1e-12


def test_form_of_product_measure_rejects_signed_measure():
    with pytest.raises(FormError):
        theorem36_check(FiniteMeasure(Universe.of_size(2), (1, -1)), [1, 1])


def test_eval_q_matches_call():
    B = euclid(2)
    assert eval_Q(B, [1, 2]) == B.quadratic()([1, 2]) == 5
