"""Finite-depth dyadic martingales: conditional expectations, conjugate transforms,
maximal and square functions, Hardy and Orlicz functionals, and the decomposition of
conjugate Fejer means into six terms.

Martingale-level sign conventions are literal: level ``l`` carries ``r_l(rho(t)) = (-1)^(t_l)``,
including ``l = 0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from walshlab.dyadic import ConjugateParameter, msb
from walshlab.kernels import fejer_mean
from walshlab.spectral import EXACT, CylinderFunction, _I64_SAFE, _maxabs


def conditional_expectation(f: CylinderFunction, k: int) -> CylinderFunction:
    """``E_k f``: average over each depth-``k`` cylinder, returned at the depth of ``f``."""
    if not 0 <= k <= f.depth:
        raise ValueError(f"level {k} outside [0, {f.depth}]")
    shift = f.depth - k
    blocks = f.num.reshape(1 << shift, 1 << k)
    if f.exact:
        if blocks.dtype != object and _maxabs(blocks) << shift >= _I64_SAFE:
            blocks = blocks.astype(object)
        sums = blocks.sum(axis=0)
        return CylinderFunction(f.depth, np.tile(sums, 1 << shift), f.den << shift, EXACT)
    return CylinderFunction(f.depth, np.tile(blocks.mean(axis=0), 1 << shift), 1, f.backend)


def expectations(f: CylinderFunction) -> list[CylinderFunction]:
    """``[E_0 f, ..., E_d f]``."""
    return [conditional_expectation(f, k) for k in range(f.depth + 1)]


def martingale_differences(f: CylinderFunction) -> list[CylinderFunction]:
    """``d_n f = E_n f - E_{n-1} f`` for ``n = 0..d`` with ``E_{-1} f = 0``."""
    E = expectations(f)
    return [E[0]] + [E[n] - E[n - 1] for n in range(1, f.depth + 1)]


@dataclass
class DyadicMartingale:
    """Levels ``f^(0), ..., f^(d)`` with ``f^(k)`` measurable at depth ``k`` (stored at depth ``d``)."""

    levels: list[CylinderFunction]

    @property
    def depth(self) -> int:
        return len(self.levels) - 1

    @classmethod
    def from_function(cls, f: CylinderFunction) -> "DyadicMartingale":
        return cls(expectations(f))

    def is_martingale(self) -> bool:
        """Tower property ``E_k f^(l) = f^(k)`` for all ``k <= l``."""
        for l, fl in enumerate(self.levels):
            for k in range(l + 1):
                if conditional_expectation(fl, k) != self.levels[k]:
                    return False
        return True

    def differences(self) -> list[CylinderFunction]:
        lv = self.levels
        return [lv[0]] + [lv[n] - lv[n - 1] for n in range(1, len(lv))]

    def maximal(self) -> CylinderFunction:
        return _pointwise_max([abs(v) for v in self.levels])


def conjugate_transform(f: CylinderFunction, t: ConjugateParameter) -> CylinderFunction:
    """``f~^(t) = sum_{n=0}^{d} (-1)^(t_n) d_n f``."""
    parts = martingale_differences(f)
    out = CylinderFunction.zeros(f.depth, f.backend)
    for n, d in enumerate(parts):
        out = out + d if t.sign(n) > 0 else out - d
    return out


def conjugate_truncation(f: CylinderFunction, m: int, t: ConjugateParameter) -> CylinderFunction:
    """``E~_m^(t) f = sum_{l<m} (-1)^(t_l) (E_l f - E_{l-1} f)``."""
    if not 0 <= m <= f.depth + 1:
        raise ValueError(f"level {m} outside [0, {f.depth + 1}]")
    out = CylinderFunction.zeros(f.depth, f.backend)
    for l, d in enumerate(martingale_differences(f)[:m]):
        out = out + d if t.sign(l) > 0 else out - d
    return out


def conjugate_truncation_telescoped(f: CylinderFunction, m: int, t: ConjugateParameter) -> CylinderFunction:
    """Same operator written through the expectations only:
    ``(1 - 2 t_{m-1}) E_{m-1} f - 2 sum_{l<m-1} (t_l - t_{l+1}) E_l f``.
    """
    if m == 0:
        return CylinderFunction.zeros(f.depth, f.backend)
    if not 1 <= m <= f.depth + 1:
        raise ValueError(f"level {m} outside [1, {f.depth + 1}]")
    E = expectations(f)
    out = E[m - 1].scale(1 - 2 * t[m - 1])
    for l in range(m - 1):
        c = t[l] - t[l + 1]
        if c:
            out = out - E[l].scale(2 * c)
    return out


def fejer_decomposition(f: CylinderFunction, n: int, t: ConjugateParameter) -> list[CylinderFunction]:
    """``[J1 f, ..., J6 f]`` with ``sum = sigma~_n^(t) f`` (literal ``beta_0``), ``2^A <= n < 2^(A+1)``.

    J1: ``(1/n) sum_{m=1}^{A} 2^(m-1) E~_m f``
    J2: ``(1/n) sum_m r_m (2^m sigma_{2^m} f - 2^(m-1) sigma_{2^(m-1)} f)``
    J3: ``-(1/n) sum_m r_m 2^(m-1) E_{m-1} f``
    J4: ``((n - 2^A)/n) E~_{A+1} f``
    J5: ``(r_{A+1}/n) (n sigma_n f - 2^A sigma_{2^A} f)``
    J6: ``-(r_{A+1}/n) (n - 2^A) E_A f``
    """
    A = msb(n)
    if A + 1 > f.depth:
        raise ValueError(f"depth {f.depth} too small for n={n}; need {A + 1}")
    inv = Fraction(1, n) if f.exact else 1.0 / n
    E = expectations(f)
    zero = CylinderFunction.zeros(f.depth, f.backend)

    def sig(k: int) -> CylinderFunction:
        # k sigma_k f
        return fejer_mean(f, k).scale(k)

    sig_pow = [sig(1 << m) for m in range(A + 1)]
    J1, J2, J3 = zero, zero, zero
    for m in range(1, A + 1):
        r = t.sign(m)
        J1 = J1 + conjugate_truncation(f, m, t).scale(1 << (m - 1))
        J2 = J2 + (sig_pow[m] - sig_pow[m - 1]).scale(r)
        J3 = J3 - E[m - 1].scale(r << (m - 1))
    r = t.sign(A + 1)
    J4 = conjugate_truncation(f, A + 1, t).scale(n - (1 << A))
    J5 = (sig(n) - sig_pow[A]).scale(r)
    J6 = E[A].scale(-r * (n - (1 << A)))
    return [J.scale(inv) for J in (J1, J2, J3, J4, J5, J6)]


def _pointwise_max(fs: list[CylinderFunction]) -> CylinderFunction:
    first = fs[0]
    if not first.exact:
        return CylinderFunction(first.depth, np.max([g.num for g in fs], axis=0), 1, first.backend)
    den = 1
    for g in fs:
        den = den * g.den // math.gcd(den, g.den)
    cols = [g.num.astype(object) * (den // g.den) for g in fs]
    return CylinderFunction(first.depth, np.max(np.stack(cols), axis=0), den, EXACT)


def maximal_function(f: CylinderFunction | DyadicMartingale) -> CylinderFunction:
    """``f* = max_n |E_n f|`` over levels ``0..d``."""
    if isinstance(f, DyadicMartingale):
        return f.maximal()
    return _pointwise_max([abs(e) for e in expectations(f)])


def square_function_sq(f: CylinderFunction) -> CylinderFunction:
    """``sum_n |d_n f|^2``, exact on the exact backend."""
    out = CylinderFunction.zeros(f.depth, f.backend)
    for d in martingale_differences(f):
        out = out + d * d
    return out


def square_function(f: CylinderFunction) -> np.ndarray:
    return np.sqrt(square_function_sq(f).as_array())


def hp_quasinorm(f: CylinderFunction, p: float, via: str = "maximal") -> float:
    """``||f||_{H_p} = ||f*||_p``; ``via="square"`` uses the square function instead."""
    if p <= 0:
        raise ValueError("p must be positive")
    if via == "maximal":
        g = maximal_function(f).as_array()
    elif via == "square":
        g = square_function(f)
    else:
        raise ValueError(f"unknown variant {via!r}")
    return float(np.mean(np.abs(g) ** p) ** (1.0 / p))


def llogl_functional(f: CylinderFunction) -> float:
    """``E(|f| log+ |f|)`` with the natural logarithm."""
    a = np.abs(f.as_array())
    big = a > 1
    out = np.zeros_like(a)
    out[big] = a[big] * np.log(a[big])
    return float(out.mean())


@dataclass(frozen=True)
class YoungFunction:
    name: str
    fn: Callable[[np.ndarray], np.ndarray]

    def __call__(self, u):
        return self.fn(np.asarray(u, dtype=np.float64))


Q_LLOGL = YoungFunction("u*log(1+u)", lambda u: u * np.log1p(u))
Q_SQRTLOG = YoungFunction("u*sqrt(log(1+u))", lambda u: u * np.sqrt(np.log1p(u)))
# not a Young function (Q(u)/u does not vanish at 0); only for scaling sanity checks
Q_LINEAR = YoungFunction("u", lambda u: u)


def is_convex_on_grid(Q: YoungFunction, hi: float = 1e6, points: int = 4001) -> bool:
    """Second differences of ``Q`` are nonnegative on a geometric grid (up to rounding)."""
    u = np.geomspace(1e-6, hi, points)
    v = Q(u)
    # divided differences on a non-uniform grid
    s = np.diff(v) / np.diff(u)
    return bool(np.all(np.diff(s) >= -1e-9 * np.abs(s[1:])))


def luxemburg_norm(f: CylinderFunction, Q: YoungFunction, rtol: float = 1e-9) -> float:
    """``inf{k > 0 : E Q(|f|/k) <= 1}`` by bisection; returns the upper end of the final bracket."""
    a = np.abs(f.as_array())
    if not np.any(a):
        return 0.0

    def phi(k: float) -> float:
        return float(np.mean(Q(a / k)))

    hi = float(a.max())
    while phi(hi) > 1:
        hi *= 2
    lo = hi
    while phi(lo) <= 1:
        lo /= 2
    while hi - lo > rtol * hi:
        mid = 0.5 * (lo + hi)
        if phi(mid) <= 1:
            hi = mid
        else:
            lo = mid
    return hi
