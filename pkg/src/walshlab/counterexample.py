"""Growth of conjugate Fejer means for a parameter with infinitely many one-blocks.

A block parameter has ``t_j = 1`` exactly on the blocks ``q_i <= j <= p_i``. The test
function ``f_A`` is ``4^A`` times the indicator of a set of measure ``4^-A`` built from
the first ``A`` blocks; ``y_A = E|sigma~_n f_A|`` with ``n = 2^(2 p_A + 1)`` grows like ``A``.
Rational parameters give bounded conjugate Fejer kernels, which the octave sweep measures.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from walshlab.dyadic import ConjugateParameter
from walshlab.kernels import conjugate_fejer_kernel, conjugate_fejer_mean, fejer_mean, min_depth
from walshlab.martingale import (
    Q_LLOGL,
    Q_SQRTLOG,
    YoungFunction,
    conjugate_truncation,
    expectations,
    llogl_functional,
)
from walshlab.spectral import EXACT, FLOAT, CylinderFunction, depth_cap


class InapplicableBound(ValueError):
    """Raised when a Young function does not yet dominate ``u`` at ``u = 4^A``."""


@dataclass(frozen=True)
class BlockParameter:
    """Evenly spaced one-blocks: ``q_i = offset + (i-1)(width+gap)``, ``p_i = q_i + width - 1``.

    The default ``offset=1, width=1, gap=1`` gives ``t = 0.0101..._2 = 1/3``.
    """

    offset: int = 1
    width: int = 1
    gap: int = 1

    def __post_init__(self) -> None:
        if self.width < 1 or self.gap < 1 or self.offset < 0:
            raise ValueError("need width >= 1, gap >= 1, offset >= 0")
        if self.width == 1 and self.offset == 0:
            raise ValueError("single-bit blocks need offset >= 1 (the companion position is q_1 - 1)")

    def q(self, i: int) -> int:
        return self.offset + (i - 1) * (self.width + self.gap)

    def p(self, i: int) -> int:
        return self.q(i) + self.width - 1

    def companion(self, i: int) -> int:
        """Second pinned position of block ``i``: ``q_i``, or ``q_i - 1`` when the block is one bit."""
        return self.q(i) if self.width > 1 else self.q(i) - 1

    @property
    def t(self) -> ConjugateParameter:
        return ConjugateParameter((0,) * self.offset, (1,) * self.width + (0,) * self.gap)


ALTERNATING = BlockParameter()


@dataclass(frozen=True)
class ConstraintSet:
    """Points whose listed coordinates are pinned; all other coordinates are free."""

    depth: int
    zeros: tuple[int, ...] = ()
    ones: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        pins = set(self.zeros) | set(self.ones)
        if set(self.zeros) & set(self.ones):
            raise ValueError("a coordinate cannot be pinned to both 0 and 1")
        if any(not 0 <= k < self.depth for k in pins):
            raise ValueError(f"pinned coordinate outside [0, {self.depth})")

    @property
    def constrained(self) -> int:
        return len(set(self.zeros) | set(self.ones))

    @property
    def measure(self) -> Fraction:
        return Fraction(1, 1 << self.constrained)

    def mask(self, depth: int | None = None) -> np.ndarray:
        """Boolean membership over all cylinders at ``depth`` (default: own depth)."""
        depth = self.depth if depth is None else depth
        if depth < self.depth:
            raise ValueError("mask depth below the set's depth")
        c = np.arange(1 << depth, dtype=np.int64)
        inside = np.ones(c.shape, dtype=bool)
        for k in self.zeros:
            inside &= ((c >> k) & 1) == 0
        for k in self.ones:
            inside &= ((c >> k) & 1) == 1
        return inside


def delta_set(A: int, pattern: BlockParameter = ALTERNATING) -> ConstraintSet:
    """``Delta_A``: both pinned positions of blocks ``1..A`` set to 0."""
    if A < 1:
        raise ValueError("A must be >= 1")
    zeros = sorted({pattern.companion(k) for k in range(1, A + 1)} | {pattern.p(k) for k in range(1, A + 1)})
    return ConstraintSet(pattern.p(A) + 1, tuple(zeros))


def delta_tilde_set(i: int, pattern: BlockParameter = ALTERNATING) -> ConstraintSet:
    """``Delta~_i``: blocks ``< i`` pinned to 0, companion of block ``i`` at 0, ``x_{p_i} = 1``."""
    if i < 1:
        raise ValueError("i must be >= 1")
    zeros = {pattern.companion(k) for k in range(1, i + 1)} | {pattern.p(k) for k in range(1, i)}
    return ConstraintSet(pattern.p(i) + 1, tuple(sorted(zeros)), (pattern.p(i),))


@dataclass
class Counterexample:
    A: int
    pattern: BlockParameter
    t: ConjugateParameter
    delta: ConstraintSet
    f: CylinderFunction

    @property
    def n(self) -> int:
        return 1 << (2 * self.pattern.p(self.A) + 1)

    @property
    def depth(self) -> int:
        return min_depth(self.n)


def build_counterexample(A: int, pattern: BlockParameter = ALTERNATING, backend: str = EXACT,
                         depth: int | None = None) -> Counterexample:
    """``f_A = 4^A 1_{Delta_A}`` at depth ``p_A + 1`` (or lifted to ``depth``)."""
    delta = delta_set(A, pattern)
    depth = delta.depth if depth is None else depth
    if depth > depth_cap(backend):
        raise ValueError(f"depth {depth} exceeds the {backend} cap {depth_cap(backend)}")
    num = delta.mask(depth).astype(np.int64) << (2 * A)
    f = CylinderFunction(depth, num, 1, EXACT)
    if backend != EXACT:
        f = f.to_float()
    return Counterexample(A, pattern, pattern.t, delta, f)


def stated_s4(i: int) -> Fraction:
    """Value claimed for ``E~_m f_A`` on ``Delta~_i`` once ``m`` passes the last block."""
    return Fraction(-(4**i - 4), 3)


def block_sum_s4(i: int) -> Fraction:
    """``sum_{k<=i} (2^(2k-2) - 2^(2k-1))``: the termwise sum before simplification."""
    return sum((Fraction(4 ** (k - 1) - 2 * 4 ** (k - 1)) for k in range(1, i + 1)), Fraction(0))


def s4_table(A: int, pattern: BlockParameter = ALTERNATING) -> list[dict]:
    """Values of ``E~_m f_A`` on each ``Delta~_i`` for ``m = p_A+1 .. 2p_A+1`` (exact).

    Each row records whether the function is constant on ``Delta~_i`` and the value.
    """
    ce = build_counterexample(A, pattern, EXACT)
    pA = pattern.p(A)
    depth = min(2 * pA + 1, depth_cap(EXACT))
    f = ce.f.lift(depth)
    rows = []
    for m in range(pA + 1, 2 * pA + 2):
        if m > depth + 1:
            break
        Em = conjugate_truncation(f, m, ce.t)
        for i in range(1, A + 1):
            vals = set(np.asarray(Em.num)[delta_tilde_set(i, pattern).mask(depth)].tolist())
            constant = len(vals) == 1
            value = Fraction(int(next(iter(vals))), Em.den) if constant else None
            rows.append({"A": A, "m": m, "i": i, "constant": constant, "value": value,
                         "stated": stated_s4(i), "matches": constant and value == stated_s4(i)})
    return rows


def expectation_vanishes(A: int, pattern: BlockParameter = ALTERNATING) -> bool:
    """``E_a f_A = 0`` on ``Delta~_i`` for every ``a > p_i`` (exact)."""
    ce = build_counterexample(A, pattern, EXACT)
    E = expectations(ce.f)
    for i in range(1, A + 1):
        inside = delta_tilde_set(i, pattern).mask(ce.f.depth)
        for a in range(pattern.p(i) + 1, ce.f.depth + 1):
            if np.any(np.asarray(E[a].num)[inside] != 0):
                return False
    return True


def power_decomposition(f: CylinderFunction, K: int, t: ConjugateParameter) -> list[CylinderFunction]:
    """``[F1, F2, F3]`` with ``F1 + F2 + F3 = sigma~_{2^K} f`` (literal ``beta_0``)."""
    if K > f.depth:
        raise ValueError(f"depth {f.depth} too small for n=2^{K}")
    n = 1 << K
    inv = Fraction(1, n) if f.exact else 1.0 / n
    E = expectations(f)
    sig = [fejer_mean(f, 1 << m).scale(1 << m) for m in range(K + 1)]
    F1 = F2 = F3 = CylinderFunction.zeros(f.depth, f.backend)
    for m in range(1, K + 1):
        r = t.sign(m)
        F1 = F1 + conjugate_truncation(f, m, t).scale(1 << (m - 1))
        F2 = F2 + (sig[m] - sig[m - 1]).scale(r)
        F3 = F3 - E[m - 1].scale(r << (m - 1))
    return [F.scale(inv) for F in (F1, F2, F3)]


@dataclass
class GrowthRow:
    A: int
    n: int
    depth: int
    yA: float
    kernel_l1: float
    kernel_l1_exact: Fraction | None
    llogl_fA: float
    orlicz_lb_Q1: float
    orlicz_lb_Q2: float
    shadow_rel_err: float | None = None


def orlicz_lower_bound(A: int, Q: YoungFunction, yA: float) -> float:
    """``y_A / (1 + Q(4^A) 4^-A)``: a lower bound on the ``Q(L) -> L_1`` operator norm."""
    u = float(4**A)
    q = float(Q(u))
    if q < u:
        raise InapplicableBound(f"{Q.name} at 4^{A} is below 4^{A}; bound needs a larger A")
    return yA / (1.0 + q / u)


def growth_value(A: int, pattern: BlockParameter = ALTERNATING, backend: str = FLOAT) -> tuple[float | Fraction, int, int]:
    """``(y_A, n, depth)`` with ``y_A = E|sigma~_n f_A|``, ``n = 2^(2 p_A + 1)``."""
    n = 1 << (2 * pattern.p(A) + 1)
    depth = min_depth(n)
    ce = build_counterexample(A, pattern, backend, depth)
    y = conjugate_fejer_mean(ce.f, n, ce.t, literal_beta0=True).l1()
    return y, n, depth


def growth_run(A_max: int, pattern: BlockParameter = ALTERNATING, shadow_max: int = 3,
               A_min: int = 1) -> list[GrowthRow]:
    """Float-backend table over ``A``; exact shadow runs for ``A <= shadow_max``."""
    rows = []
    for A in range(A_min, A_max + 1):
        y, n, depth = growth_value(A, pattern, FLOAT)
        if depth > depth_cap(FLOAT):
            raise ValueError(f"A={A} needs depth {depth} above the float cap")
        K = conjugate_fejer_kernel(n, pattern.t, depth, FLOAT)
        k_exact = None
        err = None
        if A <= shadow_max and depth <= depth_cap(EXACT):
            y_ex, _, _ = growth_value(A, pattern, EXACT)
            err = abs(y - float(y_ex)) / float(y_ex)
            k_exact = conjugate_fejer_kernel(n, pattern.t, depth, EXACT).l1()
        ce = build_counterexample(A, pattern, FLOAT)
        rows.append(GrowthRow(
            A=A, n=n, depth=depth, yA=float(y), kernel_l1=float(K.l1()), kernel_l1_exact=k_exact,
            llogl_fA=llogl_functional(ce.f),
            orlicz_lb_Q1=orlicz_lower_bound(A, Q_LLOGL, float(y)),
            orlicz_lb_Q2=orlicz_lower_bound(A, Q_SQRTLOG, float(y)),
            shadow_rel_err=err,
        ))
    return rows


def least_squares_slope(xs, ys) -> float:
    return float(np.polyfit(np.asarray(xs, float), np.asarray(ys, float), 1)[0])


GROWTH_COLUMNS = ("A", "n", "depth", "yA", "kernel_l1_num_or_float", "llogl_fA", "orlicz_lb_Q1", "orlicz_lb_Q2")


def _g(x: float) -> str:
    return f"{x:.12g}"


def growth_csv_rows(rows: list[GrowthRow]) -> list[list[str]]:
    out = []
    for r in rows:
        k = str(r.kernel_l1_exact) if r.kernel_l1_exact is not None else _g(r.kernel_l1)
        out.append([str(r.A), str(r.n), str(r.depth), _g(r.yA), k, _g(r.llogl_fA),
                    _g(r.orlicz_lb_Q1), _g(r.orlicz_lb_Q2)])
    return out


@dataclass
class OctaveRow:
    N: int
    count: int
    max_l1: float
    argmax: int
    max_exact: Fraction | None = None
    values_exact: list[Fraction] = field(default_factory=list)


def sample_octave(N: int, samples: int, seed: int) -> list[int]:
    """``samples`` distinct ``n`` in ``[2^N, 2^(N+1))``, or the whole octave if smaller; sorted."""
    lo, hi = 1 << N, 1 << (N + 1)
    if hi - lo <= samples:
        return list(range(lo, hi))
    rng = random.Random(f"{seed}:{N}")
    return sorted(rng.sample(range(lo, hi), samples))


def rational_sweep(t: ConjugateParameter, N_min: int, N_max: int, samples: int = 64, seed: int = 0,
                   backend: str = "auto", keep_exact: bool = False) -> list[OctaveRow]:
    """Per-octave maxima of ``||K~_n^(t)||_1`` over sampled ``n``.

    ``backend="auto"`` is exact where the kernel depth is within the exact cap.
    """
    rows = []
    for N in range(N_min, N_max + 1):
        best, arg, best_ex, exact_vals = -1.0, 0, None, []
        for n in sample_octave(N, samples, seed):
            depth = min_depth(n)
            use = backend if backend != "auto" else (EXACT if depth <= depth_cap(EXACT) else FLOAT)
            v = conjugate_fejer_kernel(n, t, depth, use).l1()
            if use == EXACT:
                if best_ex is None or v > best_ex:
                    best_ex = v
                if keep_exact:
                    exact_vals.append(v)
            fv = float(v)
            if fv > best:
                best, arg = fv, n
        rows.append(OctaveRow(N, len(sample_octave(N, samples, seed)), best, arg, best_ex, exact_vals))
    return rows


def octave_ratio(rows: list[OctaveRow], low: tuple[int, int], high: tuple[int, int]) -> float:
    """``max over high octaves / max over low octaves``."""
    lo = max(r.max_l1 for r in rows if low[0] <= r.N <= low[1])
    hi = max(r.max_l1 for r in rows if high[0] <= r.N <= high[1])
    return hi / lo


def expected_llogl(A: int) -> float:
    return 2 * A * math.log(2)
