"""Certified continued fractions and the one-dimensional reduction lemma.

Reduction lemma: let q be the denominator of a convergent of an irrational
gamma with q > 6M, and put eps = ||mu q|| - M ||gamma q||. If eps > 0 then
``0 < |u gamma - v + mu| < A B^-w`` has no solution in positive integers with
``u <= M`` and ``w >= log(A q / eps) / log B``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .bigreal import (
    DEFAULT_POLICY,
    CertifiedReal,
    Expr,
    PrecisionExhausted,
    PrecisionPolicy,
    cr_log,
    fraction_to_sci,
    nearest_int_distance,
    parse_decimal,
)

CONVERGENT_CAP = 25


class InsufficientTerms(LookupError):
    pass


@dataclass(frozen=True)
class ContinuedFractionExpansion:
    value: Optional[Expr]
    partial_quotients: tuple
    convergents: tuple
    certified_terms: int
    terminated: bool = False
    precision_bits: int = 0

    def q(self, k: int) -> int:
        if k == -1:
            return 0
        return self.convergents[k][1]

    def p(self, k: int) -> int:
        if k == -1:
            return 1
        return self.convergents[k][0]


def convergents_of(quotients) -> tuple:
    p2, q2, p1, q1 = 0, 1, 1, 0
    out = []
    for a in quotients:
        p2, q2, p1, q1 = p1, q1, a * p1 + p2, a * q1 + q2
        out.append((p1, q1))
    return tuple(out)


def _common_prefix(lo: Fraction, hi: Fraction, limit: int) -> tuple[list[int], bool]:
    """Quotients shared by both endpoints; flag is True if an exact value ran out."""
    a_num, a_den = lo.numerator, lo.denominator
    b_num, b_den = hi.numerator, hi.denominator
    exact = lo == hi
    out: list[int] = []
    while len(out) < limit:
        qa, ra = divmod(a_num, a_den)
        qb, rb = divmod(b_num, b_den)
        if qa != qb:
            break
        out.append(qa)
        if ra == 0 or rb == 0:
            # the quotient is still certified: every point in between has the same floor
            return out, exact
        a_num, a_den = a_den, ra
        b_num, b_den = b_den, rb
    return out, False


def _expansion(value, quotients, done, bits) -> ContinuedFractionExpansion:
    return ContinuedFractionExpansion(value, tuple(quotients), convergents_of(quotients),
                                      len(quotients), done, bits)


def expand_cf(x: Union[Expr, CertifiedReal, Fraction, int], terms: int,
              policy: PrecisionPolicy = DEFAULT_POLICY) -> ContinuedFractionExpansion:
    """First ``terms`` partial quotients of ``x``, certified from interval endpoints.

    An exact rational input yields its full (terminating) expansion, truncated
    to ``terms``, with ``terminated=True``.
    """
    if terms < 1:
        raise ValueError("terms must be positive")
    if isinstance(x, (int, Fraction)):
        x = Fraction(x)
        quotients, done = _common_prefix(x, x, terms)
        return _expansion(None, quotients, done, 0)
    if isinstance(x, CertifiedReal):
        quotients, done = _common_prefix(x.lower, x.upper, terms)
        if len(quotients) < terms and not done:
            raise PrecisionExhausted(f"interval certifies only {len(quotients)} of {terms} quotients")
        return _expansion(None, quotients, done, x.prec)
    best = 0
    for bits in policy.schedule():
        value = x(bits)
        quotients, done = _common_prefix(value.lower, value.upper, terms)
        best = len(quotients)
        if len(quotients) >= terms or done:
            return _expansion(x, quotients, done, bits)
    raise PrecisionExhausted(f"{x!r}: only {best} of {terms} quotients certified at {policy.max_bits} bits")


def cf_past(x: Expr, bound: int, extra: int = CONVERGENT_CAP,
            policy: PrecisionPolicy = DEFAULT_POLICY) -> ContinuedFractionExpansion:
    """Expansion reaching ``extra`` convergents beyond the first q_k > bound."""
    terms = 32
    while True:
        cf = expand_cf(x, terms, policy)
        idx = next((k for k, (_, q) in enumerate(cf.convergents) if q > bound), None)
        if cf.terminated or (idx is not None and idx + extra < cf.certified_terms):
            return cf
        terms *= 2


def legendre_holds(cf: ContinuedFractionExpansion, bits: int) -> bool:
    """Certify |x - p_k/q_k| < 1/q_k^2 for every convergent of ``cf``."""
    if cf.value is None:
        raise ValueError("expansion has no value handle")
    x = cf.value(bits)
    for p, q in cf.convergents:
        diff = abs(x - Fraction(p, q))
        if cf.terminated and (p, q) == cf.convergents[-1]:
            continue
        if not diff < Fraction(1, q * q):
            return False
    return True


@dataclass(frozen=True)
class Bracket:
    lower: int
    upper: int
    tie: bool


def convergent_bracketing(cf: ContinuedFractionExpansion, bound: int) -> Bracket:
    """Consecutive indices around ``bound``: q_k <= bound < q_{k+1}.

    If even q_0 fails ``q_0 < bound``, the sentinel ``(-1, 0)`` is returned. A tie
    ``q_k == bound`` is flagged rather than hidden.
    """
    qs = [q for _, q in cf.convergents]
    if not qs:
        raise InsufficientTerms("empty expansion")
    if not qs[0] < bound:
        return Bracket(-1, 0, qs[0] == bound)
    for k in range(len(qs) - 1):
        if qs[k] <= bound < qs[k + 1]:
            # q_0 == q_1 == 1 happens when a_1 = 1; take the later index
            return Bracket(k, k + 1, qs[k] == bound)
    raise InsufficientTerms(f"no certified convergent denominator exceeds {bound}")


def max_partial_quotient(cf: ContinuedFractionExpansion, upto: int) -> int:
    if upto < 1:
        raise ValueError("upto must be at least 1")
    if upto >= cf.certified_terms:
        raise InsufficientTerms(f"need a_{upto}, have {cf.certified_terms} quotients")
    return max(cf.partial_quotients[1 : upto + 1])


@dataclass(frozen=True)
class ReductionInstance:
    gamma: Expr
    mu: Expr
    A: Fraction
    B: Expr
    M: int

    def __post_init__(self):
        object.__setattr__(self, "A", Fraction(self.A))
        if self.A <= 0:
            raise ValueError("A must be positive")
        if not self.B(64) > 1:
            raise ValueError("B must exceed 1")
        if self.M < 1:
            raise ValueError("M must be a positive integer")


@dataclass(frozen=True)
class ReductionOutcome:
    convergent_index: int
    q_used: int
    epsilon: CertifiedReal
    epsilon_lower: Fraction
    w_bound: int
    bits: int


@dataclass(frozen=True)
class DegenerateFailure:
    reason: str
    tried: tuple = ()


def epsilon_at(gamma: Expr, mu: Expr, M: int, q: int,
               policy: PrecisionPolicy = DEFAULT_POLICY) -> tuple[CertifiedReal, int]:
    """Certified eps = ||mu q|| - M ||gamma q||, escalating precision until its sign is decided."""
    need = q.bit_length() + M.bit_length() + 64
    eps = None
    bits = need
    for bits in policy.schedule():
        if bits < need and bits < policy.max_bits:
            continue
        eps = nearest_int_distance(mu(bits) * q) - nearest_int_distance(gamma(bits) * q) * M
        if eps.is_positive() or eps.is_negative():
            break
    if eps is None:
        raise PrecisionExhausted("no precision step was evaluated")
    return eps, bits


def lower_decimal(x: CertifiedReal, digits: int = 30) -> Fraction:
    """Lower endpoint rounded down to a short decimal (still a valid lower bound)."""
    return parse_decimal(fraction_to_sci(x.lower, digits, "down"))


def w_bound_from(A: Fraction, q: int, epsilon_lower: Fraction, B: Expr, bits: int = 128) -> int:
    """ceil(log(A q / eps) / log B), rounded outward."""
    if epsilon_lower <= 0:
        raise ValueError("epsilon lower bound must be positive")
    ratio = Fraction(A) * q / epsilon_lower
    value = cr_log(CertifiedReal.exact(ratio, bits)) / cr_log(B(bits))
    return value.ceil_upper()


def dujella_petho(inst: ReductionInstance, cf: ContinuedFractionExpansion | None = None,
                  policy: PrecisionPolicy = DEFAULT_POLICY,
                  cap: int = CONVERGENT_CAP) -> ReductionOutcome | DegenerateFailure:
    """Scan convergents of gamma from the first q > 6M; use the first with certified eps > 0."""
    if cf is None:
        cf = cf_past(inst.gamma, 6 * inst.M, cap, policy)
    mu0 = inst.mu(policy.initial_bits)
    if mu0.is_exact and mu0.mid == 0:
        return DegenerateFailure("mu is exactly zero, so eps = -M ||gamma q|| <= 0")
    start = next((k for k, (_, q) in enumerate(cf.convergents) if q > 6 * inst.M), None)
    if start is None:
        raise InsufficientTerms("no convergent denominator exceeds 6M")
    tried = []
    for k in range(start, min(start + cap, cf.certified_terms)):
        q = cf.q(k)
        eps, bits = epsilon_at(inst.gamma, inst.mu, inst.M, q, policy)
        if eps.is_positive():
            eps_lo = lower_decimal(eps)
            w = w_bound_from(inst.A, q, eps_lo, inst.B)
            return ReductionOutcome(k, q, eps, eps_lo, w, bits)
        tried.append(k)
    if len(tried) < cap:
        raise InsufficientTerms(f"expansion ran out after {len(tried)} convergents")
    return DegenerateFailure(f"eps <= 0 for {cap} consecutive convergents", tuple(tried))


def legendre_fallback(cf: ContinuedFractionExpansion, M_coeff: int, A, B: Expr,
                      upto: int | None = None) -> int:
    """Bound w in ``0 < |x gamma - y| < A B^-w`` with 0 < x <= M_coeff.

    For q_k <= x < q_{k+1}: |x gamma - y| >= |q_k gamma - p_k| > 1 / ((a_{k+1} + 2) q_k),
    so B^w < A (a_max + 2) M_coeff.
    """
    if upto is None:
        upto = convergent_bracketing(cf, M_coeff).upper
    a_max = max_partial_quotient(cf, upto)
    value = Fraction(A) * (a_max + 2) * M_coeff
    bits = 128
    return (cr_log(CertifiedReal.exact(value, bits)) / cr_log(B(bits))).ceil_upper()
