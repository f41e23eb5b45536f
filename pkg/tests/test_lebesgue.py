import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import parameters
from walshlab.dyadic import ConjugateParameter, alpha, msb, variation
from walshlab.kernels import conjugate_dirichlet, fejer_kernel
from walshlab.lebesgue import (
    TOLEDO_SUP,
    check_bounds,
    exhaustive_pairs,
    fejer_norms,
    lebesgue_bruteforce,
    lebesgue_classical,
    lebesgue_exact,
    lebesgue_parts,
    random_pairs,
    scan,
    toledo_scan,
)

T0 = ConjugateParameter()
T14 = ConjugateParameter.from_fraction(Fraction(1, 4))


def test_examples():
    b = lebesgue_exact(5, T0)
    assert (b.J1, b.J2, b.J3, b.total) == (Fraction(3, 4), Fraction(3, 8), Fraction(5, 8), Fraction(7, 4))
    assert lebesgue_exact(1, ConjugateParameter.from_fraction(Fraction(5, 7))).total == 1
    assert lebesgue_exact(1, T0).J2 == Fraction(1, 2) == lebesgue_exact(1, T0).J3
    assert lebesgue_exact(2, T14).total == 1
    assert lebesgue_exact(3, T0).total == Fraction(3, 2)
    assert lebesgue_bruteforce(5, T0) == Fraction(7, 4)
    for k in range(12):
        assert lebesgue_bruteforce(1 << k, T0) == 1


@given(st.integers(1, 1 << 12), parameters())
def test_closed_formula_matches_bruteforce(n, t):
    assert lebesgue_exact(n, t).total == lebesgue_bruteforce(n, t)
    assert lebesgue_exact(n, t).total == conjugate_dirichlet(n, t).lift(msb(n) + 1).l1()


@given(st.integers(1, 1 << 14), parameters())
def test_scaled_constant_is_integer(n, t):
    j1, j2, j3, N = lebesgue_parts(n, t)
    assert (lebesgue_exact(n, t).total * (1 << (N + 1))).denominator == 1
    assert j2 + j3 <= 2 << (N + 1)


def test_bitlist_input_matches_parameter():
    rng = random.Random(0)
    for _ in range(200):
        n = rng.randrange(1, 1 << 12)
        bits = [rng.randint(0, 1) for _ in range(msb(n) + 2)]
        assert lebesgue_exact(n, bits).total == lebesgue_exact(n, ConjugateParameter(tuple(bits))).total


def test_classical_reduction():
    for n in range(1, 1 << 11):
        N = msb(n)
        assert lebesgue_exact(n).total == lebesgue_classical(n)
        assert lebesgue_classical(n) == 1 + sum(Fraction(alpha(n, i), 1 << (i + 1)) for i in range(N))


def test_bound_report_examples():
    r = check_bounds(3, T0)
    assert r.mtk_ok and r.L0 == Fraction(3, 2)
    r = check_bounds(5, T0)
    assert Fraction(5, 3) <= r.L0 < 4 and r.mtk_ok and r.sws_ok
    r = check_bounds(2, T14)
    assert r.m == 1 and r.V_m == 2 and r.L == 1 and r.upper_margin >= 5


def test_bound_report_margins():
    r = check_bounds(341, T0)
    assert r.lower_margin(2, "ts") >= 0
    assert r.lower_margin(2, "alt") < 0  # pairing V(n) with |T(n,m)| fails here


def test_exhaustive_small_scan():
    records, summary = scan(1, 5)
    assert summary.count == sum(1 << (2 * N + 1) for N in range(1, 6))
    assert summary.upper_violations == 0
    assert summary.lower_violations[("ts", Fraction(2))] == 0
    assert summary.upper1_violations == summary.j23_violations == 0
    keys = [(r.n, r.t_bits) for r in records]
    assert keys == sorted(keys)


def test_scan_determinism_and_workers():
    a, sa = scan(3, 9, "random", 300, seed=7)
    b, sb = scan(3, 9, "random", 300, seed=7, workers=2)
    assert a == b and sa.lines() == sb.lines()


def test_pair_generators():
    assert len(list(exhaustive_pairs(3))) == 8 * 16
    with pytest.raises(ValueError):
        next(exhaustive_pairs(11))
    assert list(random_pairs(2, 6, 20, 1)) == list(random_pairs(2, 6, 20, 1))
    assert all(t[0] == 0 for _, t in random_pairs(2, 6, 50, 3))


def test_fejer_norms_incremental_matches_kernels():
    norms = fejer_norms(300)
    for n in range(1, 301):
        assert norms[n - 1] == fejer_kernel(n).l1()
    assert norms[1] == Fraction(1, 2)


def test_toledo_small():
    best, arg, over = toledo_scan(1 << 10)
    assert best <= TOLEDO_SUP and over == 0 and best > Fraction(11, 10)
    with pytest.raises(ValueError):
        toledo_scan((1 << 14) + 1)


def test_classical_brackets_small():
    for n in range(1, 1 << 10):
        L = lebesgue_classical(n)
        V = variation(n)
        assert Fraction(V + 1, 3) <= L < V
        assert Fraction(V, 8) <= L <= V
