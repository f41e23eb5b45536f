"""Walsh-Paley functions and the fast Walsh-Hadamard transform on depth-d truncations of G.

A function on the depth-``d`` group is a vector of ``2^d`` values; entry ``c`` is the
cylinder ``I_d(x_0, ..., x_{d-1})`` with ``c = sum_k x_k 2^k``. With that indexing the
natural-order Hadamard matrix is exactly the Walsh-Paley system,
``w_j(c) = (-1)^popcount(j & c)``.

Exact values are integer numerators over one shared positive denominator. Numerators
live in an int64 array while their magnitude allows it and are promoted to Python
ints (object arrays) otherwise, so no exact computation can overflow.
"""

from __future__ import annotations

import math
import os
from fractions import Fraction
from typing import Iterable, Iterator, Union

import numpy as np

EXACT = "exact"
FLOAT = "float"

EXACT_DEPTH_CAP = 16
FLOAT_DEPTH_CAP = 24

_I64_SAFE = 1 << 62

Scalar = Union[int, Fraction, float]


def depth_cap(backend: str) -> int:
    """Depth cap for ``backend``; ``WALSHLAB_MAX_DEPTH`` overrides both caps."""
    env = os.environ.get("WALSHLAB_MAX_DEPTH")
    if env:
        return int(env)
    return EXACT_DEPTH_CAP if backend == EXACT else FLOAT_DEPTH_CAP


def _check_depth(depth: int, backend: str) -> None:
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    cap = depth_cap(backend)
    if depth > cap:
        raise ValueError(f"depth {depth} exceeds the {backend} backend cap {cap}")


# -- integer array helpers ----------------------------------------------------------


def _maxabs(a: np.ndarray) -> int:
    if a.size == 0:
        return 0
    if a.dtype == object:
        return max(abs(int(v)) for v in a.flat)
    return int(np.abs(a).max())


def _to_ints(values: Iterable[int] | np.ndarray) -> np.ndarray:
    a = np.asarray(values)
    if a.dtype == object or a.dtype.kind not in "iu":
        a = np.array([int(v) for v in np.asarray(values, dtype=object).flat], dtype=object)
    return _demote(a)


def _demote(a: np.ndarray) -> np.ndarray:
    """int64 when every entry is comfortably inside the int64 range."""
    if a.dtype == object:
        if _maxabs(a) < _I64_SAFE:
            return a.astype(np.int64)
        return a
    return a.astype(np.int64, copy=False)


def _promote(a: np.ndarray) -> np.ndarray:
    return a if a.dtype == object else a.astype(object)


def _int_binop(a: np.ndarray, b: np.ndarray | int, op: str) -> np.ndarray:
    bound_a = _maxabs(a)
    bound_b = abs(int(b)) if not isinstance(b, np.ndarray) else _maxabs(b)
    if op == "mul":
        safe = bound_a * bound_b < _I64_SAFE
    else:
        safe = bound_a + bound_b < _I64_SAFE
    if safe and a.dtype != object and (not isinstance(b, np.ndarray) or b.dtype != object):
        x, y = a, b
    else:
        x = _promote(a)
        y = _promote(b) if isinstance(b, np.ndarray) else int(b)
    if op == "add":
        r = x + y
    elif op == "sub":
        r = x - y
    else:
        r = x * y
    return _demote(r) if r.dtype == object else r


def _butterflies(x: np.ndarray, depth: int) -> None:
    """Unnormalized Hadamard transform of ``x`` in place: ``depth`` passes of size-2 butterflies."""
    h = 1
    for _ in range(depth):
        v = x.reshape(-1, 2, h)
        a = v[:, 0, :].copy()
        v[:, 0, :] += v[:, 1, :]
        v[:, 1, :] *= -1
        v[:, 1, :] += a
        h *= 2


def hadamard(values: np.ndarray, depth: int) -> np.ndarray:
    """``H values`` with ``H[j, c] = w_j(c)``; integer inputs stay exact."""
    if values.shape != (1 << depth,):
        raise ValueError(f"expected {1 << depth} values, got shape {values.shape}")
    if values.dtype.kind == "f":
        out = values.astype(np.float64, copy=True)
    else:
        out = values.copy()
        if out.dtype != object and _maxabs(out) << depth >= _I64_SAFE:
            out = out.astype(object)
    _butterflies(out, depth)
    return _demote(out) if out.dtype == object else out


# -- value types -----------------------------------------------------------------------


class _DyadicVector:
    """Shared numerics for cylinder functions and spectra."""

    __slots__ = ("depth", "num", "den", "backend")

    def __init__(self, depth: int, num: np.ndarray, den: int = 1, backend: str = EXACT):
        if backend not in (EXACT, FLOAT):
            raise ValueError(f"unknown backend {backend!r}")
        if num.shape != (1 << depth,):
            raise ValueError(f"depth {depth} needs {1 << depth} entries, got {num.shape}")
        if backend == EXACT:
            if den <= 0:
                raise ValueError("denominator must be positive")
            num = _to_ints(num)
        else:
            num = np.asarray(num, dtype=np.float64)
            den = 1
        self.depth = depth
        self.num = num
        self.den = int(den)
        self.backend = backend

    # construction helpers
    @classmethod
    def _make(cls, depth, num, den, backend):
        return cls(depth, num, den, backend)

    @classmethod
    def from_values(cls, depth: int, values: Iterable[Scalar], backend: str = EXACT):
        """Build from plain values; exact backend accepts ints and Fractions."""
        vals = list(values)
        if backend == FLOAT:
            return cls(depth, np.array([float(v) for v in vals], dtype=np.float64), 1, FLOAT)
        fr = [Fraction(v) for v in vals]
        den = 1
        for v in fr:
            den = den * v.denominator // _gcd(den, v.denominator)
        num = np.array([int(v * den) for v in fr], dtype=object)
        return cls(depth, num, den, EXACT)

    @classmethod
    def zeros(cls, depth: int, backend: str = EXACT):
        dtype = np.int64 if backend == EXACT else np.float64
        return cls(depth, np.zeros(1 << depth, dtype=dtype), 1, backend)

    @property
    def size(self) -> int:
        return 1 << self.depth

    @property
    def exact(self) -> bool:
        return self.backend == EXACT

    def copy(self):
        return self._make(self.depth, self.num.copy(), self.den, self.backend)

    def reduced(self):
        """Divide out the common factor of numerators and denominator."""
        if not self.exact or self.den == 1:
            return self
        g = self.den
        for v in self.num.flat:
            g = _gcd(g, int(v))
            if g == 1:
                return self
        if self.num.dtype == object:
            num = np.array([int(v) // g for v in self.num], dtype=object)
        else:
            num = self.num // g
        return self._make(self.depth, num, self.den // g, EXACT)

    def to_float(self):
        if not self.exact:
            return self
        if self.num.dtype == object:
            vals = np.array([float(Fraction(int(v), self.den)) for v in self.num])
        else:
            vals = self.num.astype(np.float64) / self.den
        return self._make(self.depth, vals, 1, FLOAT)

    def to_exact(self):
        """Float values converted exactly (binary fractions)."""
        if self.exact:
            return self
        return self.from_values(self.depth, [Fraction(float(v)) for v in self.num], EXACT)

    def values(self) -> list:
        """Entries as Fractions (exact) or floats."""
        if self.exact:
            return [Fraction(int(v), self.den) for v in self.num]
        return [float(v) for v in self.num]

    def __getitem__(self, c: int):
        if self.exact:
            return Fraction(int(self.num[c]), self.den)
        return float(self.num[c])

    def as_array(self) -> np.ndarray:
        return self.to_float().num

    # arithmetic
    def _coerce(self, other):
        if not isinstance(other, _DyadicVector):
            return None
        if other.depth != self.depth:
            raise ValueError(f"depth mismatch: {self.depth} vs {other.depth}")
        if other.backend != self.backend:
            raise ValueError("mixing exact and float backends; convert explicitly")
        return other

    def __add__(self, other):
        return self._addsub(other, "add")

    def __sub__(self, other):
        return self._addsub(other, "sub")

    def __radd__(self, other):
        if other == 0:
            return self
        return NotImplemented

    def _addsub(self, other, op):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if not self.exact:
            r = self.num + other.num if op == "add" else self.num - other.num
            return self._make(self.depth, r, 1, FLOAT)
        if self.den == other.den:
            den, a, b = self.den, self.num, other.num
        else:
            g = _gcd(self.den, other.den)
            den = self.den // g * other.den
            a = _int_binop(self.num, den // self.den, "mul")
            b = _int_binop(other.num, den // other.den, "mul")
        return self._make(self.depth, _int_binop(a, b, op), den, EXACT)

    def __neg__(self):
        if self.exact:
            return self._make(self.depth, _int_binop(self.num, -1, "mul"), self.den, EXACT)
        return self._make(self.depth, -self.num, 1, FLOAT)

    def scale(self, c: Scalar):
        """Multiply by a scalar; exact backend keeps Fractions exact."""
        if not self.exact:
            return self._make(self.depth, self.num * float(c), 1, FLOAT)
        c = Fraction(c)
        num = _int_binop(self.num, c.numerator, "mul")
        return self._make(self.depth, num, self.den * c.denominator, EXACT)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, float, np.integer, np.floating)):
            return self.scale(other)
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if not self.exact:
            return self._make(self.depth, self.num * other.num, 1, FLOAT)
        return self._make(self.depth, _int_binop(self.num, other.num, "mul"), self.den * other.den, EXACT)

    __rmul__ = __mul__

    def __abs__(self):
        return self._make(self.depth, np.abs(self.num) if self.num.dtype != object
                          else np.array([abs(int(v)) for v in self.num], dtype=object),
                          self.den, self.backend)

    def __eq__(self, other):
        if not isinstance(other, _DyadicVector):
            return NotImplemented
        if other.depth != self.depth or other.backend != self.backend:
            return False
        if not self.exact:
            return bool(np.array_equal(self.num, other.num))
        lhs = _int_binop(self.num, other.den, "mul")
        rhs = _int_binop(other.num, self.den, "mul")
        return bool(np.all(lhs == rhs))

    __hash__ = None  # type: ignore[assignment]

    def allclose(self, other, rtol: float = 1e-12, atol: float = 0.0) -> bool:
        a, b = self.as_array(), other.as_array()
        if a.shape != b.shape:
            return False
        scale = max(float(np.abs(b).max(initial=0.0)), 1.0)
        return bool(np.all(np.abs(a - b) <= atol + rtol * scale))

    def __repr__(self) -> str:
        head = ", ".join(str(v) for v in self.values()[:8])
        more = ", ..." if self.size > 8 else ""
        return f"{type(self).__name__}(depth={self.depth}, backend={self.backend}, [{head}{more}])"


def _gcd(a: int, b: int) -> int:
    return math.gcd(int(a), int(b))


class CylinderFunction(_DyadicVector):
    """A function on the depth-``d`` truncated dyadic group."""

    __slots__ = ()

    @classmethod
    def constant(cls, depth: int, c: Scalar = 1, backend: str = EXACT) -> "CylinderFunction":
        return cls.from_values(depth, [c] * (1 << depth), backend) if backend == FLOAT \
            else cls(depth, np.full(1 << depth, Fraction(c).numerator, dtype=object),
                     Fraction(c).denominator, EXACT)

    @classmethod
    def indicator(cls, depth: int, cells: Iterable[int], scale: Scalar = 1,
                  backend: str = EXACT) -> "CylinderFunction":
        """``scale`` on the listed cylinder indices, zero elsewhere."""
        num = np.zeros(1 << depth, dtype=np.int64 if backend == EXACT else np.float64)
        idx = np.fromiter(cells, dtype=np.int64)
        if backend == EXACT:
            s = Fraction(scale)
            num[idx] = 1
            return cls(depth, num, 1, EXACT).scale(s)
        num[idx] = float(scale)
        return cls(depth, num, 1, FLOAT)

    @classmethod
    def walsh_function(cls, j: int, depth: int, backend: str = EXACT) -> "CylinderFunction":
        return cls(depth, walsh_vector(j, depth, np.int64 if backend == EXACT else np.float64), 1, backend)

    def mean(self) -> Scalar:
        """``E f = 2^-d sum_c f(c)``."""
        if self.exact:
            if self.num.dtype != object and _maxabs(self.num) << self.depth < _I64_SAFE:
                total = int(self.num.sum())
            else:
                total = sum(int(v) for v in self.num)
            return Fraction(total, self.den << self.depth)
        return float(self.num.mean())

    integral = mean

    def l1(self) -> Scalar:
        """``E|f|``."""
        return abs(self).mean()

    def lp(self, p: float) -> float:
        if p <= 0:
            raise ValueError("p must be positive")
        a = np.abs(self.as_array())
        return float(np.mean(a**p) ** (1.0 / p))

    def lift(self, depth: int) -> "CylinderFunction":
        """Same function viewed at a finer depth (new high coordinates are free)."""
        if depth < self.depth:
            raise ValueError("cannot lift to a smaller depth")
        reps = 1 << (depth - self.depth)
        return type(self)(depth, np.tile(self.num, reps), self.den, self.backend)

    def restrict(self, depth: int) -> "CylinderFunction":
        """Inverse of ``lift`` for a function that is depth-``depth`` measurable."""
        if depth > self.depth:
            raise ValueError("restrict target deeper than the function")
        block = 1 << depth
        head = self.num[:block]
        if not np.all(self.num.reshape(-1, block) == head):
            raise ValueError(f"function is not measurable at depth {depth}")
        return type(self)(depth, head.copy(), self.den, self.backend)


class Spectrum(_DyadicVector):
    """Walsh-Paley coefficients ``f^(j) = E(f w_j)``, ``j < 2^d``."""

    __slots__ = ()

    @property
    def coeffs(self) -> list:
        return self.values()


def walsh_vector(j: int, depth: int, dtype=np.int64) -> np.ndarray:
    """Values of ``w_j`` on all depth-``depth`` cylinders."""
    if not 0 <= j < (1 << depth):
        raise ValueError(f"frequency {j} out of range for depth {depth}")
    c = np.arange(1 << depth, dtype=np.int64)
    par = np.zeros(1 << depth, dtype=np.int64)
    x = c & j
    while np.any(x):
        par ^= x & 1
        x = x >> 1
    return (1 - 2 * par).astype(dtype)


def walsh_sequence(count: int, depth: int) -> Iterator[np.ndarray]:
    """``w_0, ..., w_{count-1}`` in order; each step flips the Rademacher factors of the carry bits.

    The yielded array is reused between steps; copy it to keep a value.
    """
    if count > (1 << depth):
        raise ValueError(f"only {1 << depth} Walsh functions exist at depth {depth}")
    c = np.arange(1 << depth, dtype=np.int64)
    r = [1 - 2 * ((c >> b) & 1) for b in range(depth)]
    w = np.ones(1 << depth, dtype=np.int64)
    for k in range(count):
        yield w
        # k -> k+1 toggles bits 0..v where v counts the trailing ones of k
        for b in range(((k + 1) & ~k).bit_length()):
            if b < depth:
                w *= r[b]


def rademacher(k: int, c: int, depth: int | None = None) -> int:
    """``r_k`` at cylinder ``c``: ``(-1)^(x_k)``."""
    if k < 0 or (depth is not None and k >= depth):
        raise ValueError(f"level {k} out of range for depth {depth}")
    return -1 if (c >> k) & 1 else 1


def walsh(m: int, c: int, depth: int | None = None) -> int:
    """``w_m`` at cylinder ``c``: ``(-1)^popcount(m & c)``."""
    if m < 0 or (depth is not None and m >= (1 << depth)):
        raise ValueError(f"frequency {m} out of range for depth {depth}")
    return -1 if bin(m & c).count("1") & 1 else 1


def fwht_forward(f: CylinderFunction) -> Spectrum:
    """Walsh-Paley coefficients by the fast transform in ``O(d 2^d)``."""
    _check_depth(f.depth, f.backend)
    raw = hadamard(f.num, f.depth)
    if f.exact:
        return Spectrum(f.depth, raw, f.den << f.depth, EXACT)
    return Spectrum(f.depth, raw / float(1 << f.depth), 1, FLOAT)


def fwht_inverse(s: Spectrum) -> CylinderFunction:
    """``f(c) = sum_j s[j] w_j(c)``."""
    _check_depth(s.depth, s.backend)
    raw = hadamard(s.num, s.depth)
    return CylinderFunction(s.depth, raw, s.den, s.backend)


def multiply_spectrum(s: Spectrum, mult: _DyadicVector | np.ndarray) -> Spectrum:
    """Pointwise product of a spectrum with a multiplier sequence."""
    if isinstance(mult, np.ndarray):
        mult = Spectrum(s.depth, mult, 1, s.backend)
    r = s * mult
    return Spectrum(r.depth, r.num, r.den, r.backend)


def dyadic_convolve(f: CylinderFunction, g: CylinderFunction) -> CylinderFunction:
    """``(f * g)(x) = E_s f(x + s) g(s)`` via the coefficient product."""
    if f.depth != g.depth:
        raise ValueError(f"depth mismatch: {f.depth} vs {g.depth}")
    return fwht_inverse(multiply_spectrum(fwht_forward(f), fwht_forward(g)))


def dyadic_convolve_direct(f: CylinderFunction, g: CylinderFunction) -> CylinderFunction:
    """``O(4^d)`` double sum; reference path for small depths."""
    if f.depth != g.depth:
        raise ValueError(f"depth mismatch: {f.depth} vs {g.depth}")
    n = f.size
    c = np.arange(n)
    fv, gv = f.values(), g.values()
    out = []
    for x in range(n):
        out.append(sum(fv[x ^ s] * gv[s] for s in c) / n)
    return CylinderFunction.from_values(f.depth, out, f.backend)
