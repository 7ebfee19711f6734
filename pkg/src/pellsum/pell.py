"""Exact Pell and Pell-Lucas numbers and the 2-adic / factorization facts about them."""

from __future__ import annotations

import threading
from dataclasses import dataclass

from .bigreal import CertifiedReal, cr_const

FACTOR_CAP = 200

_lock = threading.Lock()
_P = [0, 1]
_Q = [2, 2]


def _extend(seq: list[int], n: int) -> None:
    if n < len(seq):
        return
    with _lock:
        while len(seq) <= n:
            seq.append(2 * seq[-1] + seq[-2])


def pell(n: int) -> int:
    """P_n, with P_0 = 0, P_1 = 1, P_{n+1} = 2 P_n + P_{n-1}."""
    if n < 0:
        raise ValueError("index must be nonnegative")
    _extend(_P, n)
    return _P[n]


def pell_lucas(n: int) -> int:
    """Q_n, with Q_0 = Q_1 = 2, Q_{n+2} = 2 Q_{n+1} + Q_n."""
    if n < 0:
        raise ValueError("index must be nonnegative")
    _extend(_Q, n)
    return _Q[n]


@dataclass(frozen=True)
class PellPair:
    index: int
    p_value: int
    q_value: int

    @classmethod
    def at(cls, n: int) -> "PellPair":
        return cls(n, pell(n), pell_lucas(n))

    def binet(self, bits: int | None = None) -> CertifiedReal:
        """(alpha^n - beta^n) / (2 sqrt 2) as a certified interval."""
        if bits is None:
            bits = 2 * self.index + 64
        alpha = cr_const("alpha", bits)
        beta = cr_const("beta", bits)
        return (alpha**self.index - beta**self.index) / (2 * cr_const("sqrt2", bits))

    def size_bounds_hold(self, bits: int | None = None) -> bool:
        """Certify alpha^(n-2) <= P_n <= alpha^(n-1) for n >= 1."""
        n = self.index
        if n < 1:
            raise ValueError("size bounds are stated for n >= 1")
        if bits is None:
            bits = 2 * n + 64
        alpha = cr_const("alpha", bits)
        low = alpha ** (n - 2)
        high = alpha ** (n - 1)
        p = self.p_value
        return low <= p and high >= p


def nu2(x: int) -> int:
    """2-adic valuation of a positive integer."""
    if x <= 0:
        raise ValueError("nu2 needs a positive integer")
    return (x & -x).bit_length() - 1


@dataclass(frozen=True)
class TwoSumFactorization:
    half_sum_index: int
    half_diff_index: int
    delta: int


def two_sum_factorization(n: int, m: int) -> TwoSumFactorization:
    """Write P_n + P_m = P_{(n + delta m)/2} * Q_{(n - delta m)/2}.

    delta is +1 when n = m (mod 4), else -1. The identity is checked exactly
    before returning.
    """
    if not n >= m >= 0:
        raise ValueError("need n >= m >= 0")
    if (n - m) % 2:
        raise ValueError(f"parity mismatch: n={n}, m={m}; the identity needs n = m (mod 2)")
    delta = 1 if (n - m) % 4 == 0 else -1
    s, d = (n + delta * m) // 2, (n - delta * m) // 2
    if pell(s) * pell_lucas(d) != pell(n) + pell(m):
        raise ArithmeticError(f"factorization identity failed for n={n}, m={m}")
    return TwoSumFactorization(s, d, delta)


def _primes_below(limit: int) -> list[int]:
    if limit < 3:
        return [2] if limit > 2 else []
    sieve = bytearray([1]) * limit
    sieve[0:2] = b"\x00\x00"
    for i in range(2, int(limit**0.5) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(range(i * i, limit, i)))
    return [i for i, flag in enumerate(sieve) if flag]


def small_part(n: int) -> tuple[dict[int, int], int]:
    """Split P_n into its prime factors below n - 1 and the remaining cofactor."""
    x = pell(n)
    factors: dict[int, int] = {}
    for p in _primes_below(max(n - 1, 0)):
        while x % p == 0:
            x //= p
            factors[p] = factors.get(p, 0) + 1
    return factors, x


def has_prime_factor_at_least(n: int, cap: int = FACTOR_CAP) -> bool:
    """True iff P_n has a prime factor >= n - 1.

    After removing every prime below n - 1 by trial division, any cofactor > 1
    consists of primes >= n - 1, so the answer is exact.
    """
    if n < 13:
        raise ValueError("the primitive-divisor statement is for n >= 13")
    if n > cap:
        raise ValueError(f"n={n} is above the factorization cap {cap}")
    _, cofactor = small_part(n)
    return cofactor > 1
