import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import cylinder_functions, seeded_function
from walshlab.kernels import dirichlet
from walshlab.martingale import conditional_expectation
from walshlab.spectral import (
    EXACT,
    FLOAT,
    CylinderFunction,
    Spectrum,
    depth_cap,
    dyadic_convolve,
    dyadic_convolve_direct,
    fwht_forward,
    fwht_inverse,
    hadamard,
    rademacher,
    walsh,
    walsh_sequence,
    walsh_vector,
)


def test_rademacher_examples():
    assert rademacher(0, 0) == 1
    assert rademacher(0, 1) == -1
    assert rademacher(2, 4) == -1
    with pytest.raises(ValueError):
        rademacher(3, 0, depth=3)


def test_walsh_examples():
    assert all(walsh(0, c) == 1 for c in range(16))
    assert walsh(1, 1) == -1
    assert walsh(5, 5) == 1
    with pytest.raises(ValueError):
        walsh(8, 0, depth=3)


def test_walsh_is_product_of_rademachers():
    d = 5
    for m in range(1 << d):
        for c in range(1 << d):
            prod = 1
            for k in range(d):
                if (m >> k) & 1:
                    prod *= rademacher(k, c, d)
            assert walsh(m, c, d) == prod
        assert list(walsh_vector(m, d)) == [walsh(m, c, d) for c in range(1 << d)]


def test_fwht_constant_and_point_mass():
    d = 5
    s = fwht_forward(CylinderFunction.constant(d, 1))
    assert s.coeffs == [1] + [0] * ((1 << d) - 1)
    delta = CylinderFunction.indicator(d, [0], scale=1 << d)
    assert fwht_forward(delta).coeffs == [1] * (1 << d)
    assert delta == dirichlet(1 << d, d)


def test_fwht_roundtrip_depth10():
    rng = random.Random(3)
    f = CylinderFunction(10, np.array([rng.randint(-1000, 1000) for _ in range(1024)]), 1)
    assert fwht_inverse(fwht_forward(f)) == f


@given(cylinder_functions())
def test_fwht_roundtrip_random(f):
    assert fwht_inverse(fwht_forward(f)) == f


def test_fwht_matches_definition():
    rng = random.Random(5)
    f = seeded_function(rng, 4)
    s = fwht_forward(f)
    for j in range(16):
        direct = sum(f[c] * walsh(j, c) for c in range(16)) / 16
        assert s[j] == direct


def test_inverse_of_basis_and_prefix():
    d = 4
    for m in range(1 << d):
        coeffs = np.zeros(1 << d, dtype=np.int64)
        coeffs[m] = 1
        f = fwht_inverse(Spectrum(d, coeffs))
        assert list(f.num) == list(walsh_vector(m, d))
    for n in range(1 << d):
        coeffs = (np.arange(1 << d) < n).astype(np.int64)
        assert fwht_inverse(Spectrum(d, coeffs)) == dirichlet(n, d)
    assert fwht_inverse(Spectrum.zeros(d)) == CylinderFunction.zeros(d)


@given(cylinder_functions(max_depth=6))
def test_parseval_exact(f):
    s = fwht_forward(f)
    assert (f * f).mean() == sum(c * c for c in s.coeffs)


def test_parseval_float():
    rng = np.random.default_rng(0)
    f = CylinderFunction(12, rng.normal(size=4096), 1, FLOAT)
    s = fwht_forward(f)
    assert np.isclose(np.mean(f.num**2), np.sum(s.num**2), rtol=1e-12)


def test_convolution_theorem_and_direct():
    rng = random.Random(11)
    for d in (1, 3, 6):
        f, g = seeded_function(rng, d), seeded_function(rng, d)
        h = dyadic_convolve(f, g)
        assert h == dyadic_convolve_direct(f, g)
        fh, gh, hh = fwht_forward(f), fwht_forward(g), fwht_forward(h)
        assert all(hh[j] == fh[j] * gh[j] for j in range(1 << d))


def test_convolution_with_block_kernel_is_expectation():
    rng = random.Random(2)
    f = seeded_function(rng, 7)
    for k in range(8):
        assert dyadic_convolve(f, dirichlet(1 << k, 7)) == conditional_expectation(f, k)
    assert dyadic_convolve(f, CylinderFunction.indicator(7, [0], 1 << 7)) == f


def test_lifting_preserves_norms():
    rng = random.Random(4)
    f = seeded_function(rng, 5)
    g = f.lift(9)
    assert g.mean() == f.mean() and g.l1() == f.l1()
    assert g.restrict(5) == f
    with pytest.raises(ValueError):
        g.restrict(2)


def test_backends_agree():
    rng = random.Random(8)
    f = seeded_function(rng, 12)
    assert fwht_forward(f.to_float()).allclose(fwht_forward(f).to_float(), rtol=1e-12)


def test_large_values_promote_to_big_integers():
    f = CylinderFunction(3, np.array([1 << 61] * 8, dtype=np.int64), 1)
    s = fwht_forward(f)
    assert s[0] == 1 << 61 and s[1] == 0
    g = f * f
    assert g[0] == 1 << 122


def test_depth_caps(monkeypatch):
    assert depth_cap(EXACT) == 16 and depth_cap(FLOAT) == 24
    with pytest.raises(ValueError):
        fwht_forward(CylinderFunction.zeros(17))
    monkeypatch.setenv("WALSHLAB_MAX_DEPTH", "17")
    assert depth_cap(EXACT) == 17


def test_mixed_backends_rejected():
    f = CylinderFunction.constant(2, 1)
    with pytest.raises(ValueError):
        f + f.to_float()
    with pytest.raises(ValueError):
        f + CylinderFunction.constant(3, 1)


def test_from_values_fraction_entries():
    f = CylinderFunction.from_values(1, [Fraction(1, 3), Fraction(1, 6)])
    assert f.mean() == Fraction(1, 4)
    assert f.reduced().den == 6


def test_walsh_sequence_matches_direct():
    for d in (0, 1, 4, 7):
        seq = [w.copy() for w in walsh_sequence(1 << d, d)]
        assert all(np.array_equal(seq[m], walsh_vector(m, d)) for m in range(1 << d))
    with pytest.raises(ValueError):
        list(walsh_sequence(9, 3))
