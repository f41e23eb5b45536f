"""Dirichlet, conjugate Dirichlet, Fejer and conjugate Fejer kernels and their operators.

Every kernel has a closed-form (or spectral) construction and an independent
summation construction; operators on functions act through Walsh multipliers.

Convention for the zeroth frequency: the conjugate kernels use ``beta_0 = +1`` so that
``S~_n f = f * D~_n`` holds exactly (``t_0`` is inert). Operators accept
``literal_beta0=True`` to use ``beta_0 = (-1)^(t_0)`` instead.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from walshlab.dyadic import ConjugateParameter, bit, modifier, msb
from walshlab.spectral import (
    EXACT,
    FLOAT,
    CylinderFunction,
    Spectrum,
    _check_depth,
    fwht_forward,
    fwht_inverse,
    hadamard,
    walsh_sequence,
    walsh_vector,
)

KINDS = ("dirichlet", "conj-dirichlet", "fejer", "conj-fejer")


def min_depth(n: int) -> int:
    """Smallest depth at which every ``w_k``, ``k < n``, is resolved."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    return max(n - 1, 0).bit_length()


def _check_kernel_depth(n: int, depth: int) -> None:
    if depth < min_depth(n):
        raise ValueError(f"depth {depth} too small for n={n}; need at least {min_depth(n)}")


def _as_backend(num: np.ndarray, den: int, depth: int, backend: str) -> CylinderFunction:
    f = CylinderFunction(depth, num, den, EXACT)
    return f if backend == EXACT else f.to_float()


def _parity(mask: int, c: np.ndarray) -> np.ndarray:
    par = np.zeros(c.shape, dtype=np.int64)
    k = 0
    while mask:
        if mask & 1:
            par ^= (c >> k) & 1
        mask >>= 1
        k += 1
    return par


def dirichlet_values(n: int, depth: int) -> np.ndarray:
    """Integer values of ``D_n`` at every depth-``depth`` cylinder (closed form).

    On ``I_j \\ I_{j+1}``: ``D_n = w_n (sum_{k<j} n_k 2^k - n_j 2^j)``; at the origin ``D_n = n``.
    """
    _check_kernel_depth(n, depth)
    c = np.arange(1 << depth, dtype=np.int64)
    out = np.empty(1 << depth, dtype=np.int64)
    out[0] = n
    if depth == 0:
        return out
    cc = c[1:]
    low = cc & -cc
    j = np.log2(low).astype(np.int64)
    amp = (n & (low - 1)) - ((n >> j) & 1) * low
    sign = 1 - 2 * _parity(n, cc)
    out[1:] = sign * amp
    return out


@lru_cache(maxsize=256)
def _block(k: int, depth: int) -> np.ndarray:
    """``D_{2^k}`` at the given depth; cached read-only."""
    v = np.zeros(1 << depth, dtype=np.int64)
    v[:: 1 << k] = 1 << k
    v.setflags(write=False)
    return v


def dirichlet(n: int, depth: int | None = None, backend: str = EXACT,
              method: str = "closed") -> CylinderFunction:
    """``D_n = sum_{k<n} w_k``.

    ``method="closed"`` uses the per-interval formula, ``method="sum"`` adds Walsh
    functions one by one.
    """
    depth = min_depth(n) if depth is None else depth
    _check_kernel_depth(n, depth)
    if method == "closed":
        vals = dirichlet_values(n, depth)
    elif method == "sum":
        vals = np.zeros(1 << depth, dtype=np.int64)
        for w in walsh_sequence(n, depth):
            vals += w
    else:
        raise ValueError(f"unknown method {method!r}")
    return _as_backend(vals, 1, depth, backend)


def conjugate_dirichlet_values(n: int, t: ConjugateParameter, depth: int,
                               form: str = "subtracted") -> np.ndarray:
    """Integer values of ``D~_n^(t)``.

    ``subtracted``: ``D_n - 2 w_m D_m - 2 t_{N+1} (D_n - D_{2^N})``.
    ``blocks``: ``1 + sum_{i<N} (-1)^t_{i+1} (D_{2^{i+1}} - D_{2^i}) + (-1)^t_{N+1} (D_n - D_{2^N})``.
    """
    if n == 0:
        return np.zeros(1 << depth, dtype=np.int64)
    _check_kernel_depth(n, depth)
    N = msb(n)
    tN1 = t[N + 1]
    if form == "subtracted":
        m = modifier(t, N).m
        Dn = dirichlet_values(n, depth)
        Dm = dirichlet_values(m, depth)
        wm = walsh_vector(m, depth)
        return Dn - 2 * wm * Dm - 2 * tN1 * (Dn - _block(N, depth))
    if form == "blocks":
        out = np.ones(1 << depth, dtype=np.int64)
        for i in range(N):
            out += t.sign(i + 1) * (_block(i + 1, depth) - _block(i, depth))
        out += t.sign(N + 1) * (dirichlet_values(n, depth) - _block(N, depth))
        return out
    raise ValueError(f"unknown form {form!r}")


def conjugate_dirichlet(n: int, t: ConjugateParameter, depth: int | None = None,
                        backend: str = EXACT, form: str = "subtracted") -> CylinderFunction:
    """Conjugate Dirichlet kernel ``D~_n^(t)`` (``D~_0 = 0``)."""
    depth = min_depth(n) if depth is None else depth
    return _as_backend(conjugate_dirichlet_values(n, t, depth, form), 1, depth, backend)


def beta_vector(t: ConjugateParameter, size: int, literal_beta0: bool = False) -> np.ndarray:
    """``beta_j(t)`` for ``j < size`` as an int64 array of signs."""
    j = np.arange(size, dtype=np.int64)
    levels = np.zeros(size, dtype=np.int64)
    levels[1:] = np.floor(np.log2(j[1:])).astype(np.int64) + 1
    table = np.array([t.sign(b) for b in range(int(levels.max(initial=0)) + 1)], dtype=np.int64)
    out = table[levels]
    if size:
        out[0] = t.sign(0) if literal_beta0 else 1
    return out


def fejer_multiplier(n: int, size: int) -> np.ndarray:
    """Integer numerators ``max(n - 1 - j, 0)`` of the Fejer multiplier (denominator ``n``)."""
    j = np.arange(size, dtype=np.int64)
    return np.maximum(n - 1 - j, 0)


def _spectral_kernel(mult: np.ndarray, den: int, depth: int, backend: str) -> CylinderFunction:
    if backend == FLOAT:
        _check_depth(depth, FLOAT)
        vals = hadamard(mult.astype(np.float64), depth) / den
        return CylinderFunction(depth, vals, 1, FLOAT)
    _check_depth(depth, EXACT)
    return CylinderFunction(depth, hadamard(mult, depth), den, EXACT)


def fejer_kernel(n: int, depth: int | None = None, backend: str = EXACT,
                 method: str = "spectral") -> CylinderFunction:
    """``K_n = (1/n) sum_{k<n} D_k``; coefficient of ``w_j`` is ``(n-1-j)/n``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    depth = min_depth(n) if depth is None else depth
    _check_kernel_depth(n, depth)
    if method == "spectral":
        return _spectral_kernel(fejer_multiplier(n, 1 << depth), n, depth, backend)
    if method == "sum":
        acc = np.zeros(1 << depth, dtype=np.int64)
        for k in range(1, n):
            acc += dirichlet_values(k, depth)
        return _as_backend(acc, n, depth, backend)
    raise ValueError(f"unknown method {method!r}")


def conjugate_fejer_kernel(n: int, t: ConjugateParameter, depth: int | None = None,
                           backend: str = EXACT, method: str = "spectral",
                           literal_beta0: bool = False) -> CylinderFunction:
    """``(1/n) sum_{k<n} D~_k^(t)``; coefficient of ``w_j`` is ``beta_j(t)(n-1-j)/n``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    depth = min_depth(n) if depth is None else depth
    _check_kernel_depth(n, depth)
    if method == "spectral":
        size = 1 << depth
        mult = fejer_multiplier(n, size) * beta_vector(t, size, literal_beta0)
        return _spectral_kernel(mult, n, depth, backend)
    if method == "sum":
        acc = np.zeros(1 << depth, dtype=np.int64)
        for k in range(1, n):
            acc += conjugate_dirichlet_values(k, t, depth)
        if literal_beta0 and t[0]:
            acc -= 2 * (n - 1)  # flips the DC term of every D~_k, k >= 1
        return _as_backend(acc, n, depth, backend)
    raise ValueError(f"unknown method {method!r}")


@dataclass(frozen=True)
class KernelSpec:
    kind: str
    n: int
    t: ConjugateParameter = ConjugateParameter()
    depth: int | None = None

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}")
        if self.depth is not None:
            _check_kernel_depth(self.n, self.depth)

    def build(self, backend: str = EXACT) -> CylinderFunction:
        if self.kind == "dirichlet":
            return dirichlet(self.n, self.depth, backend)
        if self.kind == "conj-dirichlet":
            return conjugate_dirichlet(self.n, self.t, self.depth, backend)
        if self.kind == "fejer":
            return fejer_kernel(self.n, self.depth, backend)
        return conjugate_fejer_kernel(self.n, self.t, self.depth, backend)


# -- operators on functions --------------------------------------------------------------


def _apply_multiplier(f: CylinderFunction, mult: np.ndarray, den: int = 1) -> CylinderFunction:
    s = fwht_forward(f)
    if f.exact:
        m = Spectrum(f.depth, mult, den, EXACT)
    else:
        m = Spectrum(f.depth, mult.astype(np.float64) / den, 1, FLOAT)
    prod = s * m
    return fwht_inverse(Spectrum(prod.depth, prod.num, prod.den, prod.backend))


def _check_count(M: int, f: CylinderFunction) -> None:
    if not 0 <= M <= f.size:
        raise ValueError(f"count {M} outside [0, 2^{f.depth}]")


def partial_sum(f: CylinderFunction, M: int) -> CylinderFunction:
    """``S_M f = sum_{i<M} f^(i) w_i``."""
    _check_count(M, f)
    mult = (np.arange(f.size) < M).astype(np.int64)
    return _apply_multiplier(f, mult)


def conjugate_partial_sum(f: CylinderFunction, n: int, t: ConjugateParameter,
                          literal_beta0: bool = False) -> CylinderFunction:
    """``S~_n^(t) f = sum_{k<n} beta_k(t) f^(k) w_k``."""
    _check_count(n, f)
    mult = (np.arange(f.size) < n).astype(np.int64) * beta_vector(t, f.size, literal_beta0)
    return _apply_multiplier(f, mult)


def fejer_mean(f: CylinderFunction, n: int) -> CylinderFunction:
    """``sigma_n f = (1/n) sum_{k<n} S_k f``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    _check_count(n, f)
    return _apply_multiplier(f, fejer_multiplier(n, f.size), n)


def conjugate_fejer_mean(f: CylinderFunction, n: int, t: ConjugateParameter,
                         method: str = "spectral", literal_beta0: bool = False) -> CylinderFunction:
    """``sigma~_n^(t) f = (1/n) sum_{k<n} S~_k^(t) f``.

    ``spectral``: one multiplier pass. ``direct``: average of the conjugate partial
    sums. ``kernel``: convolution with the conjugate Fejer kernel.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    _check_count(n, f)
    if method == "spectral":
        mult = fejer_multiplier(n, f.size) * beta_vector(t, f.size, literal_beta0)
        return _apply_multiplier(f, mult, n)
    if method == "direct":
        acc = CylinderFunction.zeros(f.depth, f.backend)
        for k in range(1, n):
            acc = acc + conjugate_partial_sum(f, k, t, literal_beta0)
        return acc.scale(Fraction(1, n)) if f.exact else acc.scale(1.0 / n)
    if method == "kernel":
        from walshlab.spectral import dyadic_convolve

        K = conjugate_fejer_kernel(n, t, min_depth(n), f.backend, literal_beta0=literal_beta0)
        return dyadic_convolve(f, K.lift(f.depth))
    raise ValueError(f"unknown method {method!r}")


def dirichlet_bit_formula(n: int, depth: int) -> np.ndarray:
    """``D_n = w_n sum_k n_k (D_{2^{k+1}} - D_{2^k})``, an alternative closed form.

    Needs ``depth >= |n| + 1`` so that ``D_{2^{|n|+1}}`` is resolved.
    """
    if n == 0:
        return np.zeros(1 << depth, dtype=np.int64)
    if depth < msb(n) + 1:
        raise ValueError(f"depth {depth} too small; need {msb(n) + 1}")
    acc = np.zeros(1 << depth, dtype=np.int64)
    for k in range(msb(n) + 1):
        if bit(n, k):
            acc += _block(k + 1, depth) - _block(k, depth)
    return walsh_vector(n, depth) * acc
