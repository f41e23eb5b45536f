"""Binary-expansion combinatorics of frequency indices and conjugation parameters.

Bit conventions: ``n_k`` is the k-th binary digit of ``n`` and ``n_{-1} = 0``.
The parameter ``t`` in [0, 1) is ``sum_j t_j / 2^(j+1)``; dyadic rationals use the
expansion terminating in zeros.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence


def bit(n: int, k: int) -> int:
    """Binary digit ``n_k``; ``n_{-1}`` is 0 by convention."""
    if k < 0:
        return 0
    return (n >> k) & 1


def msb(n: int) -> int:
    """``|n|``: the level N with ``2^N <= n < 2^(N+1)``."""
    if n < 1:
        raise ValueError(f"|n| is defined for n >= 1, got {n}")
    return n.bit_length() - 1


def _require_positive(n: int) -> None:
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"expected a positive integer, got {n!r}")


def variation(n: int) -> int:
    """Binary variation ``V(n) = sum_{k>=1} |n_k - n_{k-1}| + n_0``."""
    _require_positive(n)
    # transitions of n against n shifted up by one (n_{-1} = 0)
    return bin(n ^ (n << 1)).count("1")


def transitions(n: int) -> frozenset[int]:
    """``A(n) = {i >= 0 : n_i != n_{i-1}}``."""
    if n < 0:
        raise ValueError("negative index")
    return transitions_from_mask(n ^ (n << 1))


def alpha(n: int, j: int) -> int:
    """``alpha_j(n) = |sum_{k<j} n_k 2^k - n_j 2^j|``, the modulus of ``D_n`` on ``I_j \\ I_{j+1}``."""
    if j < 0:
        raise ValueError("level j must be nonnegative")
    return abs((n & ((1 << j) - 1)) - (bit(n, j) << j))


def transition_set(n: int, m: int, N: int | None = None) -> frozenset[int]:
    """``T(n, m) = {i < N : n_i != n_{i-1}, m_i = m_{i-1}}``.

    ``N`` defaults to ``|n|``. For the reversed orientation ``T(m, n)`` the caller
    passes the level of the original ``n`` explicitly.
    """
    if N is None:
        N = msb(n)
    if N < 0:
        raise ValueError("N must be nonnegative")
    mask = (1 << N) - 1
    cand = (n ^ (n << 1)) & ~(m ^ (m << 1)) & mask
    return transitions_from_mask(cand)


def transitions_from_mask(x: int) -> frozenset[int]:
    """Positions of the set bits of ``x``."""
    out = []
    i = 0
    while x:
        if x & 1:
            out.append(i)
        x >>= 1
        i += 1
    return frozenset(out)


def weighted_sum_S(n: int) -> Fraction:
    """``S(n) = sum_{i in A(n)} alpha_i(n) / 2^(i+1)`` as an exact rational."""
    _require_positive(n)
    top = msb(n) + 1  # A(n) subset of {0..|n|+1}
    num = 0
    for i in transitions(n):
        num += alpha(n, i) << (top - i)
    return Fraction(num, 1 << (top + 1))


def alternating_index(s: int) -> int:
    """``n' = sum_{m=1}^{s} 2^(2m-1)``, binary 1010...10 with ``V(n') = 2s``."""
    if s < 1:
        raise ValueError("s must be >= 1")
    return sum(1 << (2 * m - 1) for m in range(1, s + 1))


def alternating_S(s: int) -> Fraction:
    """Closed form ``2s/3 + (1 - 4^-s)/9`` for ``S`` of the alternating index."""
    return Fraction(2 * s, 3) + Fraction(1, 9) * (1 - Fraction(1, 4**s))


def is_admissible(n: int, e: int) -> bool:
    """``n_e = n_{e-1} != n_{e+1}`` with ``e >= 1``."""
    return e >= 1 and bit(n, e) == bit(n, e - 1) and bit(n, e) != bit(n, e + 1)


def reduce_bit(n: int, e: int) -> int:
    """``n(e)``: delete bit ``e``, shift bits ``0..e-1`` up by one, clear bit 0.

    Preserves ``V`` and does not increase ``S``.
    """
    _require_positive(n)
    if not is_admissible(n, e):
        raise ValueError(f"bit position {e} is not admissible for n={n}")
    high = (n >> (e + 1)) << (e + 1)
    low = n & ((1 << e) - 1)
    return high | (low << 1)


def is_alternating(n: int) -> bool:
    """True when ``n`` with trailing zeros stripped has strictly alternating bits."""
    _require_positive(n)
    while not n & 1:
        n >>= 1
    # odd alternating patterns are 1, 101, 10101, ...
    return n & (n >> 1) == 0 and (n | (n >> 1)) == (1 << n.bit_length()) - 1


def reduction_chain(n: int) -> list[int]:
    """Apply ``reduce_bit`` at the lowest position that changes ``n`` until none does.

    The last element is alternating (up to trailing zeros).
    """
    chain = [n]
    while True:
        cur = chain[-1]
        for e in range(1, cur.bit_length() + 1):
            if is_admissible(cur, e):
                nxt = reduce_bit(cur, e)
                if nxt != cur:
                    chain.append(nxt)
                    break
        else:
            return chain


@dataclass(frozen=True)
class ConjugateParameter:
    """``t`` in [0, 1) as an eventually periodic bit stream ``t_0 t_1 ...``.

    An empty or all-zero ``period`` means a dyadic rational.
    """

    preperiod: tuple[int, ...] = ()
    period: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        for b in (*self.preperiod, *self.period):
            if b not in (0, 1):
                raise ValueError(f"bits must be 0/1, got {b!r}")
        if self.period and all(self.period):
            raise ValueError("expansions ending in all ones are not allowed; use the terminating form")
        object.__setattr__(self, "preperiod", tuple(self.preperiod))
        object.__setattr__(self, "period", tuple(self.period))

    @classmethod
    def from_bits(cls, bits: Iterable[int], period: Iterable[int] = ()) -> "ConjugateParameter":
        return cls(tuple(bits), tuple(period))

    @classmethod
    def from_fraction(cls, value: Fraction | int | str) -> "ConjugateParameter":
        """Binary long division of ``p/q`` in [0, 1)."""
        x = Fraction(value)
        if not 0 <= x < 1:
            raise ValueError(f"t must lie in [0, 1), got {x}")
        p, q = x.numerator, x.denominator
        seen: dict[int, int] = {}
        digits: list[int] = []
        r = p
        while r and r not in seen:
            seen[r] = len(digits)
            r *= 2
            digits.append(1 if r >= q else 0)
            if r >= q:
                r -= q
        if r == 0:
            return cls(tuple(digits), ())
        start = seen[r]
        return cls(tuple(digits[:start]), tuple(digits[start:]))

    def __getitem__(self, j: int) -> int:
        """``t_j`` for any ``j >= 0``."""
        if j < 0:
            raise IndexError("t_j is defined for j >= 0")
        if j < len(self.preperiod):
            return self.preperiod[j]
        if not self.period:
            return 0
        return self.period[(j - len(self.preperiod)) % len(self.period)]

    def bits(self, count: int) -> list[int]:
        return [self[j] for j in range(count)]

    @property
    def is_dyadic_rational(self) -> bool:
        return not any(self.period)

    def to_fraction(self) -> Fraction:
        pre = Fraction(0)
        for j, b in enumerate(self.preperiod):
            pre += Fraction(b, 2 ** (j + 1))
        if not any(self.period):
            return pre
        L, P = len(self.preperiod), len(self.period)
        block = sum(b << (P - 1 - i) for i, b in enumerate(self.period))
        return pre + Fraction(block, (2**P - 1) * 2**L)

    def sign(self, k: int) -> int:
        """``r_k(rho(t)) = (-1)^(t_k)``."""
        return -1 if self[k] else 1

    def beta(self, k: int, literal_beta0: bool = False) -> int:
        """Sign multiplier of frequency ``k``: ``(-1)^(t_{|k|+1})`` for ``k >= 1``.

        ``beta_0`` is +1 unless ``literal_beta0`` asks for ``(-1)^(t_0)``.
        """
        if k < 0:
            raise ValueError("k must be nonnegative")
        if k == 0:
            return self.sign(0) if literal_beta0 else 1
        return self.sign(k.bit_length())

    def digest(self, count: int) -> str:
        return "".join(str(b) for b in self.bits(count))

    def spec(self) -> str:
        """Round-trip text form ``bits:PRE(PERIOD)``."""
        pre = "".join(map(str, self.preperiod))
        per = "".join(map(str, self.period)) or "0"
        return f"bits:{pre}({per})"


@dataclass(frozen=True)
class ModifierIndex:
    """``m = sum_{i<N} t_{i+1} 2^i`` derived at level ``N``."""

    m: int
    N: int


def modifier(t: ConjugateParameter, N: int) -> ModifierIndex:
    if N < 0:
        raise ValueError("N must be nonnegative")
    return ModifierIndex(sum(t[i + 1] << i for i in range(N)), N)


def modifier_bits(tbits: Sequence[int], N: int) -> int:
    """``m`` from a plain bit list ``t_0, t_1, ...`` (length at least ``N+1``)."""
    return sum(tbits[i + 1] << i for i in range(N))


def t_from_prefix(bits: Sequence[int]) -> ConjugateParameter:
    """Dyadic rational with the given leading bits and zeros afterwards."""
    return ConjugateParameter(tuple(bits), ())
