"""Exact Lebesgue constants of (conjugate) Walsh-Dirichlet kernels and bound verification.

All arithmetic here is integer or ``Fraction``; ``L_n^(t) * 2^(|n|+1)`` is always an integer.
"""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Iterable, Iterator, Sequence

import numpy as np

from walshlab.dyadic import (
    ConjugateParameter,
    alpha,
    bit,
    modifier,
    msb,
    t_from_prefix,
    transition_set,
    transitions,
    variation,
)
from walshlab.kernels import conjugate_dirichlet_values, min_depth

BRUTEFORCE_MAX_LEVEL = 20
LOWER_CONSTANTS = (Fraction(1), Fraction(3, 2), Fraction(2))
TOLEDO_SUP = Fraction(17, 15)


def _V(m: int) -> int:
    return variation(m) if m else 0


@dataclass(frozen=True)
class LebesgueBreakdown:
    """``L_n^(t) = J1 + J2 + J3`` (levels below ``N``, the interval ``I_N \\ I_{N+1}``, and ``I_{N+1}``)."""

    J1: Fraction
    J2: Fraction
    J3: Fraction

    @property
    def total(self) -> Fraction:
        return self.J1 + self.J2 + self.J3


def _max_terms(n: int, m: int, N: int) -> list[int]:
    return [max(alpha(n, i), 2 * alpha(m, i)) for i in range(N)]


def lebesgue_parts(n: int, t: ConjugateParameter | Sequence[int]) -> tuple[int, int, int, int]:
    """Integer numerators of ``J1, J2, J3`` over the common denominator ``2^(N+1)``, and ``N``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    N = msb(n)
    if isinstance(t, ConjugateParameter):
        m, tN1 = modifier(t, N).m, t[N + 1]
    else:
        m = sum(t[i + 1] << i for i in range(N))
        tN1 = t[N + 1] if len(t) > N + 1 else 0
    j1 = sum(v << (N - i) for i, v in enumerate(_max_terms(n, m, N)))
    tail = 2 * tN1 * (n - (1 << N))
    j2 = abs((1 << (N + 1)) - n - 2 * m + tail)
    j3 = abs(n - 2 * m - tail)
    return j1, j2, j3, N


def lebesgue_exact(n: int, t: ConjugateParameter | Sequence[int] = ConjugateParameter()) -> LebesgueBreakdown:
    """Closed-form ``L_n^(t) = ||D~_n^(t)||_1`` split as ``J1 + J2 + J3``."""
    j1, j2, j3, N = lebesgue_parts(n, t)
    den = 1 << (N + 1)
    return LebesgueBreakdown(Fraction(j1, den), Fraction(j2, den), Fraction(j3, den))


def lebesgue_bruteforce(n: int, t: ConjugateParameter) -> Fraction:
    """``2^-(N+1) sum_c |D~_n^(t)(c)|`` over all depth-``(N+1)`` cylinders."""
    if n < 1:
        raise ValueError("n must be >= 1")
    N = msb(n)
    if N > BRUTEFORCE_MAX_LEVEL:
        raise ValueError(f"|n| = {N} exceeds the brute-force cap {BRUTEFORCE_MAX_LEVEL}")
    vals = conjugate_dirichlet_values(n, t, N + 1)
    return Fraction(int(np.abs(vals).sum()), 1 << (N + 1))


@lru_cache(maxsize=1 << 17)
def lebesgue_classical(n: int) -> Fraction:
    """``L_n = sum_{i<|n|} alpha_i(n) / 2^(i+1) + 1``."""
    N = msb(n)
    return sum((Fraction(alpha(n, i), 1 << (i + 1)) for i in range(N)), Fraction(1))


# -- bound verification ------------------------------------------------------------------


@dataclass(frozen=True)
class BoundReport:
    n: int
    N: int
    t_bits: str
    m: int
    V_n: int
    V_m: int
    T_nm: int
    T_mn: int
    L: Fraction
    L0: Fraction
    upper_margin: Fraction
    lower_slack: Fraction
    lower_slack_alt: Fraction
    upper1_ok: bool
    j23_ok: bool

    @property
    def upper_ok(self) -> bool:
        return self.upper_margin >= 0

    def lower_margin(self, C: Fraction | int, orientation: str = "ts") -> Fraction:
        """``L - (max(...) - C)``; nonnegative iff the lower bound with constant ``C`` holds."""
        slack = self.lower_slack if orientation == "ts" else self.lower_slack_alt
        return slack + Fraction(C)

    @property
    def mtk_ok(self) -> bool:
        return Fraction(self.V_n + 1, 3) <= self.L0 < self.V_n

    @property
    def sws_ok(self) -> bool:
        return Fraction(self.V_n, 8) <= self.L0 <= self.V_n


def check_bounds(n: int, t: ConjugateParameter | Sequence[int]) -> BoundReport:
    """Evaluate both sides of the two-sided estimate and the classical ``t = 0`` brackets.

    The lower bound is reported as a slack ``L - max(...)`` for two pairings:
    ``ts`` pairs ``V(n)`` with ``|T(m,n)|``, ``alt`` pairs it with ``|T(n,m)|``.
    """
    j1, j2, j3, N = lebesgue_parts(n, t)
    den = 1 << (N + 1)
    if isinstance(t, ConjugateParameter):
        bits = t.bits(N + 2)
    else:
        bits = list(t[: N + 2]) + [0] * max(0, N + 2 - len(t))
    m = sum(bits[i + 1] << i for i in range(N))
    L = Fraction(j1 + j2 + j3, den)
    L0 = lebesgue_classical(n)
    Vn, Vm = variation(n), _V(m)
    Tnm = transition_set(n, m, N)
    Tmn = transition_set(m, n, N)
    upper = 2 * Vm + len(Tnm) + 2
    lo_ts = max(Fraction(Vn, 3) + Fraction(len(Tmn), 2), Fraction(2 * Vm, 3) + Fraction(len(Tnm), 4))
    lo_alt = max(Fraction(Vn, 3) + Fraction(len(Tnm), 2), Fraction(2 * Vm, 3) + Fraction(len(Tnm), 4))
    return BoundReport(
        n=n, N=N, t_bits="".join(map(str, bits)), m=m, V_n=Vn, V_m=Vm,
        T_nm=len(Tnm), T_mn=len(Tmn), L=L, L0=L0,
        upper_margin=upper - L, lower_slack=L - lo_ts, lower_slack_alt=L - lo_alt,
        upper1_ok=_upper1_holds(n, m, N, Tnm), j23_ok=j2 + j3 <= 2 * den,
    )


def _upper1_holds(n: int, m: int, N: int, Tnm: Iterable[int]) -> bool:
    """``sum_{i<N} max_i / 2^(i+1) <= 2 sum_{i in A(m) u T(n,m), i<N} max_i / 2^(i+1)``."""
    terms = _max_terms(n, m, N)
    keep = (transitions(m) | frozenset(Tnm)) & frozenset(range(N))
    lhs = sum(v << (N - i) for i, v in enumerate(terms))
    rhs = 2 * sum(terms[i] << (N - i) for i in keep)
    return lhs <= rhs


# -- scans -----------------------------------------------------------------------------------


@dataclass
class ScanSummary:
    """Aggregates over a stream of ``BoundReport`` rows."""

    count: int = 0
    upper_violations: int = 0
    lower_violations: dict = field(default_factory=lambda: {(o, C): 0 for o in ("ts", "alt")
                                                            for C in LOWER_CONSTANTS})
    min_lower_slack: Fraction | None = None
    min_lower_slack_at: tuple | None = None
    min_lower_slack_alt: Fraction | None = None
    min_lower_slack_alt_at: tuple | None = None
    min_upper_margin: Fraction | None = None
    max_upper_ratio: Fraction | None = None
    upper1_violations: int = 0
    j23_violations: int = 0
    mtk_violations: int = 0
    sws_violations: int = 0

    def add(self, r: BoundReport) -> None:
        self.count += 1
        self.upper_violations += not r.upper_ok
        for (o, C) in self.lower_violations:
            self.lower_violations[(o, C)] += r.lower_margin(C, o) < 0
        key = (r.n, r.t_bits)
        if self.min_lower_slack is None or r.lower_slack < self.min_lower_slack:
            self.min_lower_slack, self.min_lower_slack_at = r.lower_slack, key
        if self.min_lower_slack_alt is None or r.lower_slack_alt < self.min_lower_slack_alt:
            self.min_lower_slack_alt, self.min_lower_slack_alt_at = r.lower_slack_alt, key
        if self.min_upper_margin is None or r.upper_margin < self.min_upper_margin:
            self.min_upper_margin = r.upper_margin
        ratio = r.L / (r.L + r.upper_margin)
        if self.max_upper_ratio is None or ratio > self.max_upper_ratio:
            self.max_upper_ratio = ratio
        self.upper1_violations += not r.upper1_ok
        self.j23_violations += not r.j23_ok
        self.mtk_violations += not r.mtk_ok
        self.sws_violations += not r.sws_ok

    @property
    def violations(self) -> int:
        """Violations of the asserted checks (upper bound, lower bound with C = 2, structure)."""
        return (self.upper_violations + self.lower_violations[("ts", Fraction(2))]
                + self.upper1_violations + self.j23_violations
                + self.mtk_violations + self.sws_violations)

    def lines(self) -> list[str]:
        out = [
            f"pairs={self.count}",
            f"upper_violations={self.upper_violations}",
            f"min_upper_margin={self.min_upper_margin}",
            f"max_L_over_upper={self.max_upper_ratio}",
            f"min_lower_slack_ts={self.min_lower_slack} at {self.min_lower_slack_at}",
            f"min_lower_slack_alt={self.min_lower_slack_alt} at {self.min_lower_slack_alt_at}",
        ]
        for (o, C), v in sorted(self.lower_violations.items()):
            out.append(f"lower_violations[{o},C={C}]={v}")
        out += [
            f"upper1_violations={self.upper1_violations}",
            f"j2_plus_j3_violations={self.j23_violations}",
            f"mtk_violations={self.mtk_violations}",
            f"sws_violations={self.sws_violations}",
        ]
        return out


def exhaustive_pairs(N: int) -> Iterator[tuple[int, tuple[int, ...]]]:
    """All ``n`` with ``|n| = N`` and all patterns of ``t_1..t_{N+1}`` (``t_0 = 0``)."""
    if N > 10:
        raise ValueError("exhaustive t-enumeration is limited to N <= 10")
    for n in range(1 << N, 1 << (N + 1)):
        for tb in product((0, 1), repeat=N + 1):
            yield n, (0, *tb)


def random_pairs(N_min: int, N_max: int, count: int, seed: int) -> Iterator[tuple[int, tuple[int, ...]]]:
    """Seeded sample: level uniform in ``[N_min, N_max]``, then ``n`` and ``t_1..t_{N+1}`` uniform."""
    rng = random.Random(seed)
    for _ in range(count):
        N = rng.randint(N_min, N_max)
        n = rng.randrange(1 << N, 1 << (N + 1))
        tb = rng.getrandbits(N + 1)
        yield n, (0, *((tb >> i) & 1 for i in range(N + 1)))


def _reports(pairs: Sequence[tuple[int, tuple[int, ...]]]) -> list[BoundReport]:
    return [check_bounds(n, tb) for n, tb in pairs]


def scan(exp_min: int, exp_max: int, sampling: str = "exhaustive", samples: int = 0,
         seed: int = 0, workers: int = 1) -> tuple[list[BoundReport], ScanSummary]:
    """Bound reports for ``|n|`` in ``[exp_min, exp_max]``, sorted by ``(n, t)``.

    ``sampling="exhaustive"`` enumerates every relevant ``t`` prefix; ``"random"`` draws
    ``samples`` seeded pairs. Output is independent of ``workers``.
    """
    if not 0 <= exp_min <= exp_max <= 20:
        raise ValueError("exponent range must satisfy 0 <= exp_min <= exp_max <= 20")
    if sampling == "exhaustive":
        pairs = [p for N in range(exp_min, exp_max + 1) for p in exhaustive_pairs(N)]
    elif sampling == "random":
        pairs = list(random_pairs(exp_min, exp_max, samples, seed))
    else:
        raise ValueError(f"unknown sampling {sampling!r}")
    if workers > 1:
        chunk = max(1, len(pairs) // (4 * workers))
        parts = [pairs[i:i + chunk] for i in range(0, len(pairs), chunk)]
        with ProcessPoolExecutor(workers) as ex:
            records = [r for part in ex.map(_reports, parts) for r in part]
    else:
        records = _reports(pairs)
    records.sort(key=lambda r: (r.n, r.t_bits))
    summary = ScanSummary()
    for r in records:
        summary.add(r)
    return records, summary


# -- Fejer kernel norms ------------------------------------------------------------------------


def fejer_norm_numerators(n_max: int) -> tuple[int, list[int]]:
    """``sum_c |n K_n(c)|`` at a common depth ``D`` for every ``n = 1..n_max``.

    ``||K_n||_1 = S_n / (n 2^D)``. Runs incrementally: ``D_{k+1} = D_k + w_k`` and
    ``w_{k+1} = w_k r_0 ... r_v`` where ``v`` is the number of trailing ones of ``k``.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    D = min_depth(n_max)
    c = np.arange(1 << D, dtype=np.int64)
    prefix = []
    acc = np.ones(1 << D, dtype=np.int64)
    for b in range(D + 1):
        if b < D:
            acc = acc * (1 - 2 * ((c >> b) & 1))
        prefix.append(acc.copy())
    w = np.ones(1 << D, dtype=np.int64)  # w_0
    Dk = np.zeros(1 << D, dtype=np.int64)  # D_0
    F = np.zeros(1 << D, dtype=np.int64)  # sum_{k<n} D_k
    sums = []
    for k in range(n_max):
        # F currently holds n K_n for n = k
        if k:
            sums.append(int(np.abs(F).sum()))
        F += Dk
        Dk += w
        v = ((k + 1) & ~k).bit_length() - 1  # flipped bits 0..v going k -> k+1
        w *= prefix[min(v, D)]
    sums.append(int(np.abs(F).sum()))
    return D, sums


def toledo_scan(n_max: int) -> tuple[Fraction, int, int]:
    """Exact ``max_{n <= n_max} ||K_n||_1``, its argmax, and the number of ``n`` exceeding 17/15."""
    if n_max > 1 << 14:
        raise ValueError("exact Fejer norm scan is limited to n_max <= 2^14")
    D, sums = fejer_norm_numerators(n_max)
    best, arg, over = Fraction(0), 1, 0
    for n, s in enumerate(sums, start=1):
        val = Fraction(s, n << D)
        if val > best:
            best, arg = val, n
        over += val > TOLEDO_SUP
    return best, arg, over


def fejer_norms(n_max: int) -> list[Fraction]:
    D, sums = fejer_norm_numerators(n_max)
    return [Fraction(s, n << D) for n, s in enumerate(sums, start=1)]
