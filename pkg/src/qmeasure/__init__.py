"""Finite and real-line q-measures and the q-integral."""

from .finite_space import (
    DecoherenceMatrix,
    FiniteMeasure,
    MeasureSpaceError,
    PairMeasureMatrix,
    QMeasureTable,
    Universe,
    center_measure_check,
    compatibility_forms,
    cube_table,
    decoherence_check,
    disjoint_union_expand,
    from_complex_amplitude,
    from_decoherence,
    from_destructive_pairs,
    from_measure_squared,
    from_pair_matrix,
    from_signed_measure_squared,
    grade2_check,
    graden_check,
    is_compatible,
    is_splitting,
    mu_center,
    quantum_coin,
    recover_pair_matrix,
    regularity_check,
    splitting_sets,
    theorem21_check,
    theorem24_check,
    three_point_example,
)
from .induced_measure import InducedQMeasure, induce, radon_nikodym_counterexample, theorem53_check
from .intervals import IntervalUnion
from .q_integral_finite import (
    FiniteFunction,
    naive_integral,
    q_integral,
    q_integral_closed_form,
    restricted_integral,
)
from .real_line import (
    PiecewiseMonotone,
    QuadratureError,
    RealQMeasure,
    monomial_integral_closed,
    exp_integral_closed,
    q_integral_piecewise_exact,
    q_integral_real,
    quantum_ftc_check,
    superlevel_set,
)
from .report import Report
