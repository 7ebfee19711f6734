"""Exact enumeration of P_n + P_m + P_l = 2^a and the l = 0 case argument."""

from __future__ import annotations

from dataclasses import dataclass

from .pell import nu2, pell, pell_lucas, two_sum_factorization

# primitive divisors: P_n has a prime factor >= n - 1 >= 12 once n >= 13
PRIMITIVE_FROM = 13


@dataclass(frozen=True, order=True)
class SolutionTuple:
    n: int
    m: int
    ell: int
    a: int

    def as_list(self) -> list[int]:
        return [self.n, self.m, self.ell, self.a]


CLAIMED_SOLUTIONS = frozenset(
    SolutionTuple(*t)
    for t in [(2, 1, 1, 2), (3, 2, 1, 3), (5, 2, 1, 5), (6, 5, 5, 7),
              (1, 1, 0, 1), (2, 2, 0, 2), (2, 0, 0, 1), (1, 0, 0, 0)]
)


def is_power_of_two(x: int) -> int | None:
    """Return a with x == 2**a, or None."""
    if x <= 0:
        raise ValueError("x must be positive")
    if x & (x - 1):
        return None
    return x.bit_length() - 1


def verify_solution(t: SolutionTuple) -> bool:
    if not t.n >= t.m >= t.ell >= 0 or t.a < 0:
        return False
    return pell(t.n) + pell(t.m) + pell(t.ell) == 1 << t.a


def brute_force(n_max: int) -> list[SolutionTuple]:
    """All solutions with 0 <= l <= m <= n <= n_max, sorted lexicographically."""
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    values = [pell(k) for k in range(n_max + 1)]
    index = {v: k for k, v in enumerate(values)}  # P_k is injective for k >= 0
    found = []
    for n in range(n_max + 1):
        for m in range(n + 1):
            s = values[n] + values[m]
            # 2^a - s must be some P_l with l <= m, i.e. 0 <= 2^a - s <= P_m
            a = max(s - 1, 0).bit_length()
            while (1 << a) - s <= values[m]:
                rest = (1 << a) - s
                ell = index.get(rest)
                if ell is not None and ell <= m:
                    found.append(SolutionTuple(n, m, ell, a))
                a += 1
    return sorted(found)


def case_ell_zero() -> tuple[list[SolutionTuple], list[str]]:
    """Replay the structural argument for l = 0; returns (solutions, notes)."""
    notes: list[str] = []
    found: set[SolutionTuple] = set()

    # (i) l = m = 0: P_n = 2^a
    notes.append(
        f"l=m=0: P_n = 2^a. For n >= {PRIMITIVE_FROM}, P_n has a prime factor >= n-1 >= 12, "
        f"so it is not a power of two; checking n <= {PRIMITIVE_FROM - 1}."
    )
    for n in range(1, PRIMITIVE_FROM):
        a = is_power_of_two(pell(n))
        if a is not None:
            found.add(SolutionTuple(n, 0, 0, a))

    # (ii) l = 0 < m <= n: P_n + P_m = 2^a with a > 0
    notes.append("l=0<m: P_n + P_m >= 2 so a >= 1 and P_n, P_m share parity; "
                 "P_k is odd iff k is odd, hence n = m (mod 2).")
    notes.append("Mixed-parity pairs (n, m) are skipped: P_n + P_m is odd and > 1.")
    notes.append("Factor P_n + P_m = P_s Q_d with s = (n + delta m)/2, d = (n - delta m)/2. "
                 "nu2(Q_d) = 1 and Q_d > 2 for d >= 2, so Q_d is a power of two only for "
                 "d in {0, 1}; P_s a power of two forces s <= 12.")
    for d in (0, 1):
        q_d = pell_lucas(d)
        if nu2(q_d) != 1 or q_d != 2:
            raise AssertionError(f"unexpected Q_{d} = {q_d}")
        for s in range(1, PRIMITIVE_FROM):
            if is_power_of_two(pell(s)) is None:
                continue
            for delta in (1, -1):
                n = s + d
                m = delta * (s - d)
                if not 0 < m <= n or (n - m) % 2:
                    continue
                f = two_sum_factorization(n, m)
                if (f.half_sum_index, f.half_diff_index) != (s, d):
                    continue
                a = is_power_of_two(pell(n) + pell(m))
                if a is not None:
                    found.add(SolutionTuple(n, m, 0, a))
    notes.append(f"l=0 solutions: {sorted(t.as_list() for t in found)}")
    return sorted(found), notes


def three_times_pell_never_power(n_max: int = 150) -> bool:
    """3 P_n is never a power of two for 1 <= n <= n_max (the n = m = l case)."""
    return all(is_power_of_two(3 * pell(n)) is None for n in range(1, n_max + 1))
