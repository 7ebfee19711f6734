from fractions import Fraction
from math import gcd, isqrt

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import M_BIG, mpf_to_fraction
from pellsum.bigreal import GAMMA, CertifiedReal, Expr, PrecisionPolicy, cr_sqrt
from pellsum.pipeline import ALPHA, mu_expr
from pellsum.reduction import (
    DegenerateFailure,
    InsufficientTerms,
    ReductionInstance,
    convergent_bracketing,
    dujella_petho,
    epsilon_at,
    expand_cf,
    legendre_fallback,
    legendre_holds,
    max_partial_quotient,
)

SQRT2 = Expr.constant("sqrt2")


def mp_cf(value_fn, terms, dps=400):
    """Partial quotients of a real computed by mpmath at high precision (oracle)."""
    with mpmath.workdps(dps):
        x = mpf_to_fraction(value_fn())
    out = []
    for _ in range(terms):
        a = x.numerator // x.denominator
        out.append(a)
        x = 1 / (x - a)
    return out


def fraction_cf(x: Fraction) -> list[int]:
    out = []
    while True:
        a = x.numerator // x.denominator
        out.append(a)
        if x == a:
            return out
        x = 1 / (x - a)


def test_gamma_leading_quotients():
    cf = expand_cf(GAMMA, 5)
    assert list(cf.partial_quotients) == [0, 1, 3, 1, 2]


def test_gamma_cf_matches_mpmath(gamma_cf):
    oracle = mp_cf(lambda: mpmath.log(2) / mpmath.asinh(1), 100)
    assert list(gamma_cf.partial_quotients[:100]) == oracle


def test_gamma_bracket_and_max_quotient(gamma_cf):
    br = convergent_bracketing(gamma_cf, M_BIG)
    assert (br.lower, br.upper, br.tie) == (87, 88, False)
    assert gamma_cf.q(87) < M_BIG < gamma_cf.q(88)
    assert max_partial_quotient(gamma_cf, 88) == 100
    assert max_partial_quotient(gamma_cf, 4) == 3


def test_rational_terminates():
    cf = expand_cf(Fraction(5, 2), 10)
    assert cf.terminated and list(cf.partial_quotients) == [2, 2]


def test_sqrt2_expansion():
    cf = expand_cf(SQRT2, 6)
    assert list(cf.partial_quotients) == [1, 2, 2, 2, 2, 2]
    assert legendre_holds(cf, 256)
    for p, q in cf.convergents:
        assert abs(p * p - 2 * q * q) == 1


def test_bracketing_conventions():
    cf = expand_cf(SQRT2, 6)
    assert [q for _, q in cf.convergents][:4] == [1, 2, 5, 12]
    br = convergent_bracketing(cf, 5)
    assert (br.lower, br.upper, br.tie) == (2, 3, True)
    br = convergent_bracketing(cf, 1)
    assert (br.lower, br.upper) == (-1, 0) and br.tie
    assert cf.q(-1) == 0 and cf.p(-1) == 1
    with pytest.raises(InsufficientTerms):
        convergent_bracketing(cf, 10**9)


def test_max_partial_quotient_sqrt2():
    assert max_partial_quotient(expand_cf(SQRT2, 12), 10) == 2
    with pytest.raises(InsufficientTerms):
        max_partial_quotient(expand_cf(SQRT2, 5), 10)


def test_convergent_invariants(gamma_cf):
    conv = gamma_cf.convergents
    for k, (p, q) in enumerate(conv):
        assert gcd(p, q) == 1
        if k >= 1:
            assert conv[k][1] > conv[k - 1][1] or k == 1
            # p_k q_{k-1} - p_{k-1} q_k = (-1)^(k-1)
            assert p * conv[k - 1][1] - conv[k - 1][0] * q == (-1) ** (k - 1)
    assert legendre_holds(gamma_cf, gamma_cf.precision_bits)


def test_double_precision_reproduces_prefix(gamma_cf):
    bits = gamma_cf.precision_bits
    again = expand_cf(GAMMA, gamma_cf.certified_terms, PrecisionPolicy(2 * bits, 2 * bits))
    assert again.partial_quotients[: gamma_cf.certified_terms] == gamma_cf.partial_quotients


def test_round_one_reduction(gamma_cf):
    inst = ReductionInstance(GAMMA, mu_expr(()), 10, ALPHA, M_BIG)
    out = dujella_petho(inst, gamma_cf)
    assert not isinstance(out, DegenerateFailure)
    assert out.q_used > 6 * M_BIG
    assert out.epsilon.is_positive() and 0 < out.epsilon_lower <= out.epsilon.lower
    assert out.w_bound <= 130
    assert out.convergent_index == 91


def test_mu_zero_is_degenerate(gamma_cf):
    inst = ReductionInstance(GAMMA, Expr.rational(0), 6, ALPHA, M_BIG)
    assert isinstance(dujella_petho(inst, gamma_cf), DegenerateFailure)


def test_shift_one_degenerate_too(gamma_cf):
    inst = ReductionInstance(GAMMA, mu_expr((1,)), 6, ALPHA, M_BIG)
    out = dujella_petho(inst, gamma_cf)
    assert isinstance(out, DegenerateFailure)


def test_legendre_fallback_122(gamma_cf):
    assert legendre_fallback(gamma_cf, M_BIG, 6, ALPHA) == 122
    # independently: log(6 * 102 * 4e43) / log(alpha) lies in (121, 122)
    with mpmath.workdps(50):
        w = mpmath.log(6 * 102 * mpmath.mpf(M_BIG)) / mpmath.asinh(1)
    assert 121 < w < 122


def test_toy_reduction_against_brute_force():
    """gamma = sqrt2, mu = 1/3, A = 1, B = 2, M = 10."""
    inst = ReductionInstance(SQRT2, Expr.rational(Fraction(1, 3)), 1, Expr.rational(2), 10)
    out = dujella_petho(inst)
    q = out.q_used
    assert q > 60
    # exact oracle: ||q/3|| is rational; ||q sqrt2|| via integer square roots
    dist_mu = min(q % 3, 3 - q % 3) / Fraction(3)
    r = isqrt(2 * q * q)
    # q sqrt2 in (r, r+1); refine with a 200-bit rational enclosure
    s = cr_sqrt(CertifiedReal.exact(2 * q * q, 400), 200)
    frac = min(s.midpoint - r, r + 1 - s.midpoint)
    eps = dist_mu - 10 * frac
    assert abs(eps - out.epsilon.midpoint) < Fraction(1, 10**30)
    # doubled precision gives the same sign and w bound
    eps2, _ = epsilon_at(SQRT2, inst.mu, 10, q, PrecisionPolicy(2 * out.bits, 2 * out.bits))
    assert eps2.is_positive()
    again = dujella_petho(inst, policy=PrecisionPolicy(2 * out.bits, 4 * out.bits))
    assert again.w_bound == out.w_bound and again.q_used == q


def test_toy_bound_is_sound():
    """No (u, v, w) with 0 < |u sqrt2 - v + 1/3| < 2^-w, u <= 10, w >= w_bound."""
    inst = ReductionInstance(SQRT2, Expr.rational(Fraction(1, 3)), 1, Expr.rational(2), 10)
    out = dujella_petho(inst)
    with mpmath.workdps(50):
        best = min(abs(u * mpmath.sqrt(2) - v + mpmath.mpf(1) / 3)
                   for u in range(1, 11) for v in range(0, 20))
    assert best >= mpmath.mpf(2) ** -out.w_bound


def test_reduction_instance_validation():
    with pytest.raises(ValueError):
        ReductionInstance(GAMMA, Expr.rational(0), 0, ALPHA, 10)
    with pytest.raises(ValueError):
        ReductionInstance(GAMMA, Expr.rational(0), 1, Expr.rational(1), 10)


# -- randomized re-certification ---------------------------------------------------


@settings(max_examples=1000)
@given(x=st.fractions(min_value=-10**4, max_value=10**4, max_denominator=10**8))
def test_rational_cf_is_exact(x):
    cf = expand_cf(x, 100)
    assert cf.terminated
    assert list(cf.partial_quotients) == fraction_cf(x)
    p, q = cf.convergents[-1]
    assert Fraction(p, q) == x


@settings(max_examples=1000)
@given(n=st.integers(min_value=2, max_value=10**6).filter(lambda n: isqrt(n) ** 2 != n),
       bits=st.sampled_from([128, 192, 256]))
def test_surd_cf_recertifies(n, bits):
    """sqrt(n): quotients certified at some precision survive doubling and match the exact rule."""
    x = Expr(f"sqrt{n}", lambda b: cr_sqrt(CertifiedReal.exact(n, b + 8), b))
    cf = expand_cf(x, 12, PrecisionPolicy(bits, 4 * bits))
    again = expand_cf(x, 12, PrecisionPolicy(2 * cf.precision_bits, 2 * cf.precision_bits))
    assert again.partial_quotients == cf.partial_quotients
    # exact periodic expansion of sqrt(n) by the (m, d, a) recurrence
    a0 = isqrt(n)
    m, d, a, exact = 0, 1, a0, [a0]
    while len(exact) < 12:
        m = d * a - m
        d = (n - m * m) // d
        a = (a0 + m) // d
        exact.append(a)
    assert list(cf.partial_quotients) == exact
    assert all(gcd(p, q) == 1 for p, q in cf.convergents)
    assert legendre_holds(cf, 2 * cf.precision_bits)
