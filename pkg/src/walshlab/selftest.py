"""Fast oracle-equivalence suite behind ``walshlab selftest``."""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Callable

import numpy as np

from walshlab.counterexample import build_counterexample, delta_set, expectation_vanishes, power_decomposition
from walshlab.dyadic import ConjugateParameter, variation, weighted_sum_S
from walshlab.kernels import (
    conjugate_dirichlet_values,
    conjugate_fejer_kernel,
    conjugate_fejer_mean,
    dirichlet,
)
from walshlab.lebesgue import TOLEDO_SUP, lebesgue_bruteforce, lebesgue_classical, lebesgue_exact, toledo_scan
from walshlab.martingale import (
    conjugate_transform,
    conjugate_truncation,
    conjugate_truncation_telescoped,
    fejer_decomposition,
    square_function_sq,
)
from walshlab.spectral import CylinderFunction, dyadic_convolve, dyadic_convolve_direct, fwht_forward, fwht_inverse

Check = tuple[str, bool, str]


def random_function(rng: random.Random, depth: int, lo: int = -8, hi: int = 8) -> CylinderFunction:
    return CylinderFunction.from_values(
        depth, [Fraction(rng.randint(lo, hi), rng.choice((1, 2, 3, 4))) for _ in range(1 << depth)])


def random_parameter(rng: random.Random, bits: int = 12) -> ConjugateParameter:
    pre = tuple(rng.randint(0, 1) for _ in range(rng.randint(0, bits)))
    per = tuple(rng.randint(0, 1) for _ in range(rng.randint(0, 4)))
    if per and all(per):
        per = per + (0,)
    return ConjugateParameter(pre, per)


def _count(pred: Callable[[], list[bool]]) -> tuple[bool, str]:
    res = pred()
    bad = res.count(False)
    return bad == 0, f"{len(res) - bad}/{len(res)}"


def run_selftest(seed: int = 0) -> list[Check]:
    rng = random.Random(seed)
    out: list[Check] = []

    def add(name: str, pred: Callable[[], list[bool]]) -> None:
        ok, detail = _count(pred)
        out.append((name, ok, detail))

    fs = [random_function(rng, 5) for _ in range(4)]
    ts = [random_parameter(rng) for _ in range(4)]
    add("fwht-roundtrip", lambda: [fwht_inverse(fwht_forward(f)) == f for f in fs])
    add("convolution-direct", lambda: [dyadic_convolve(f, g) == dyadic_convolve_direct(f, g)
                                       for f, g in zip(fs, fs[1:])])
    add("dirichlet-closed-vs-sum", lambda: [dirichlet(n, 7) == dirichlet(n, 7, method="sum") for n in range(1, 129)])
    add("conj-dirichlet-forms", lambda: [
        np.array_equal(conjugate_dirichlet_values(n, t, 8), conjugate_dirichlet_values(n, t, 8, form="blocks"))
        for t in ts for n in range(1, 129)])
    add("lebesgue-closed-vs-brute", lambda: [
        lebesgue_exact(n, t).total == lebesgue_bruteforce(n, t) for t in ts for n in range(1, 257)])
    add("lebesgue-t0-classical", lambda: [lebesgue_exact(n).total == lebesgue_classical(n) for n in range(1, 1025)])
    add("S-at-least-V/3", lambda: [3 * weighted_sum_S(n) >= variation(n) for n in range(1, 4097)])
    add("toledo-2^10", lambda: [toledo_scan(1 << 10)[0] <= TOLEDO_SUP])
    add("conj-fejer-spectral-vs-direct", lambda: [
        conjugate_fejer_mean(f, n, t) == conjugate_fejer_mean(f, n, t, method="direct")
        for f, t in zip(fs, ts) for n in range(1, 33)])
    add("conj-fejer-kernel-forms", lambda: [
        conjugate_fejer_kernel(n, t, 6) == conjugate_fejer_kernel(n, t, 6, method="sum")
        for t in ts for n in range(1, 65)])
    add("truncation-telescoped", lambda: [
        conjugate_truncation(f, m, t) == conjugate_truncation_telescoped(f, m, t)
        for f, t in zip(fs, ts) for m in range(0, 7)])
    add("fejer-decomposition-sum", lambda: [
        sum(fejer_decomposition(f, n, t)[1:], fejer_decomposition(f, n, t)[0])
        == conjugate_fejer_mean(f, n, t, literal_beta0=True)
        for f, t in zip(fs, ts) for n in range(1, 32)])
    add("square-function-invariance", lambda: [
        square_function_sq(conjugate_transform(f, t)) == square_function_sq(f) for f in fs for t in ts])
    add("counterexample-measure", lambda: [
        delta_set(A).measure == Fraction(1, 4**A) and build_counterexample(A).f.mean() == 1 for A in (1, 2, 3)])
    add("counterexample-vanishing", lambda: [expectation_vanishes(A) for A in (1, 2, 3)])

    def power_split() -> list[bool]:
        res = []
        for A in (1, 2):
            ce = build_counterexample(A)
            K = 2 * ce.pattern.p(A) + 1
            f = ce.f.lift(K)
            F = power_decomposition(f, K, ce.t)
            res.append(F[0] + F[1] + F[2] == conjugate_fejer_mean(f, 1 << K, ce.t, literal_beta0=True))
        return res

    add("counterexample-power-split", power_split)
    return out
