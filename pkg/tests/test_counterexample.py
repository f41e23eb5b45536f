import math
from fractions import Fraction

import pytest

from walshlab.counterexample import (
    ALTERNATING,
    BlockParameter,
    ConstraintSet,
    InapplicableBound,
    block_sum_s4,
    build_counterexample,
    delta_set,
    delta_tilde_set,
    expectation_vanishes,
    expected_llogl,
    growth_csv_rows,
    growth_run,
    growth_value,
    octave_ratio,
    orlicz_lower_bound,
    power_decomposition,
    rational_sweep,
    s4_table,
    sample_octave,
    stated_s4,
)
from walshlab.dyadic import ConjugateParameter
from walshlab.kernels import conjugate_fejer_mean, dirichlet
from walshlab.lebesgue import TOLEDO_SUP
from walshlab.martingale import Q_LINEAR, Q_LLOGL, Q_SQRTLOG, YoungFunction, llogl_functional
from walshlab.spectral import EXACT, FLOAT


def test_alternating_pattern_is_one_third():
    assert ALTERNATING.t.to_fraction() == Fraction(1, 3)
    assert [ALTERNATING.q(i) for i in (1, 2, 3)] == [1, 3, 5]
    assert BlockParameter(2, 3, 1).t.bits(12) == [0, 0, 1, 1, 1, 0, 1, 1, 1, 0, 1, 1]
    with pytest.raises(ValueError):
        BlockParameter(0, 1, 1)
    with pytest.raises(ValueError):
        BlockParameter(1, 1, 0)


def test_block_bits_follow_definition():
    for pat in (ALTERNATING, BlockParameter(0, 2, 1), BlockParameter(3, 2, 3)):
        blocks = [(pat.q(i), pat.p(i)) for i in range(1, 6)]
        for j in range(blocks[-1][1]):
            inside = any(q <= j <= p for q, p in blocks)
            assert pat.t[j] == int(inside)


@pytest.mark.parametrize("pattern", [ALTERNATING, BlockParameter(0, 2, 1), BlockParameter(2, 3, 2)])
def test_measures(pattern):
    for A in range(1, 4):
        assert delta_set(A, pattern).measure == Fraction(1, 4**A)
        assert delta_tilde_set(A, pattern).measure == Fraction(1, 4**A)
        d = delta_set(A, pattern)
        assert d.mask().mean() == float(d.measure)
    total = sum(4**i * delta_tilde_set(i, pattern).measure for i in range(1, 6))
    assert total == 5


def test_constraint_set_validation():
    with pytest.raises(ValueError):
        ConstraintSet(3, (0,), (0,))
    with pytest.raises(ValueError):
        ConstraintSet(3, (3,))
    assert ConstraintSet(4, (0, 2)).mask().sum() == 4


def test_test_function():
    ce = build_counterexample(1)
    assert ce.delta.measure == Fraction(1, 4)
    assert sorted(set(ce.f.values())) == [0, 4]
    assert ce.f.values().count(4) * 4 == ce.f.size
    for A in range(1, 6):
        ce = build_counterexample(A, backend=FLOAT if A > 3 else EXACT)
        assert ce.f.mean() == 1
        assert llogl_functional(ce.f) == pytest.approx(expected_llogl(A))
    # alternating pattern: f_A is the block kernel D_{4^A}
    assert build_counterexample(3).f == dirichlet(64, 6)
    with pytest.raises(ValueError):
        build_counterexample(9, backend=EXACT)


def test_expectations_vanish_beyond_block():
    for A in (1, 2, 3):
        assert expectation_vanishes(A)
    assert expectation_vanishes(2, BlockParameter(1, 2, 1))


def test_truncation_values_on_shells():
    # measured value -2(4^i - 1)/3 once m passes the last block
    for A in (1, 2, 3):
        for row in s4_table(A):
            assert row["constant"]
            if row["m"] >= ALTERNATING.p(A) + 2 or row["i"] < A:
                assert row["value"] == Fraction(-2 * (4 ** row["i"] - 1), 3)


def test_s4_termwise_sum():
    for i in range(1, 8):
        assert block_sum_s4(i) == Fraction(-(4**i - 1), 3)
        assert stated_s4(i) == Fraction(-(4**i - 4), 3)


def test_power_decomposition():
    for A in (1, 2, 3):
        ce = build_counterexample(A)
        K = 2 * ALTERNATING.p(A) + 1
        f = ce.f.lift(K)
        F = power_decomposition(f, K, ce.t)
        assert F[0] + F[1] + F[2] == conjugate_fejer_mean(f, 1 << K, ce.t, literal_beta0=True)
        bound = 3 * TOLEDO_SUP * f.l1()
        assert F[1].l1() <= bound and F[2].l1() <= bound


def test_growth_small():
    rows = growth_run(4)
    ys = [r.yA for r in rows]
    assert all(b > a for a, b in zip(ys, ys[1:]))
    assert [r.depth for r in rows] == [3, 7, 11, 15]
    for r in rows[:3]:
        assert r.shadow_rel_err <= 1e-9 and r.kernel_l1_exact is not None
    y_exact, n, depth = growth_value(2, backend=EXACT)
    assert (n, depth) == (128, 7) and y_exact == Fraction(99, 32)
    csv_rows = growth_csv_rows(rows)
    assert csv_rows[1][4] == "4101/1024" and csv_rows[3][3] == f"{rows[3].yA:.12g}"


def test_orlicz_bound_gate():
    assert orlicz_lower_bound(3, Q_LLOGL, 6.0) == pytest.approx(6 / (1 + math.log(65)))
    assert orlicz_lower_bound(3, Q_SQRTLOG, 6.0) == pytest.approx(6 / (1 + math.sqrt(math.log(65))))
    assert orlicz_lower_bound(2, Q_LINEAR, 4.0) == 2.0
    half = YoungFunction("u/2", lambda u: u / 2)
    with pytest.raises(InapplicableBound):
        orlicz_lower_bound(2, half, 1.0)


def test_sample_octave():
    assert sample_octave(3, 64, 0) == list(range(8, 16))
    s = sample_octave(12, 64, 5)
    assert len(s) == 64 == len(set(s)) and s == sorted(s) and s == sample_octave(12, 64, 5)
    assert all(4096 <= n < 8192 for n in s)


def test_rational_sweep_small():
    t0 = ConjugateParameter()
    rows = rational_sweep(t0, 2, 8, 16, seed=1, keep_exact=True)
    assert all(v <= TOLEDO_SUP for r in rows for v in r.values_exact)
    rows38 = rational_sweep(ConjugateParameter.from_fraction(Fraction(3, 8)), 2, 9, 16, seed=1)
    assert octave_ratio(rows38, (2, 4), (7, 9)) < 2
    third = ConjugateParameter.from_fraction(Fraction(1, 3))
    f = rational_sweep(third, 3, 3, 4, backend=FLOAT)[0]
    e = rational_sweep(third, 3, 3, 4, backend=EXACT)[0]
    assert f.max_l1 == pytest.approx(float(e.max_exact), rel=1e-12)
