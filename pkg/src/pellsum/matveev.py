"""Height bookkeeping and Matveev-type lower bounds for the three linear forms.

All three forms live in Q(sqrt 2) (D = 2) with t = 3 and
eta_1 = 2, eta_2 = alpha, b = (a + 1, -n, 1); only eta_3 changes:

* form 1: eta_3 = sqrt 2
* form 2: eta_3 = sqrt 2 / (1 + alpha^-(n-m))
* form 3: eta_3 = sqrt 2 / (1 + alpha^-(n-m) + alpha^-(n-l))

The bound chain below turns the three lower bounds into
``(n-m) log alpha < K1 log n``, ``(n-l) log alpha < K2 log^2 n`` and
``n < K3 log^3 n``, valid for n > 150.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .bigreal import CertifiedReal, cr_const, cr_log, cr_sqrt

BITS = 256
# smallest n in the analytic range
N_START = 151

TARGET_A = (Fraction(14, 10), Fraction(9, 10), Fraction(7, 10))
TARGET_K1 = Fraction(18 * 10**11)
TARGET_K2 = Fraction(5 * 10**24)
TARGET_K3 = Fraction(17 * 10**36)
TARGET_C2 = Fraction(245 * 10**10)  # per-unit-A_3 exponent coefficient
TARGET_C2_ROUNDED = Fraction(25 * 10**11)


def _cr(x, bits: int = BITS) -> CertifiedReal:
    return x if isinstance(x, CertifiedReal) else CertifiedReal.exact(x, bits)


def height_of_named(name: str, bits: int = BITS) -> CertifiedReal:
    """Logarithmic height of 2, alpha or sqrt 2."""
    if name == "two":
        return cr_const("log2", bits)
    if name == "alpha":
        # minimal polynomial x^2 - 2x - 1; only alpha lies outside the unit disc
        return cr_const("log_alpha", bits).half()
    if name == "sqrt2":
        # x^2 - 2: both conjugates have modulus sqrt 2
        return cr_const("log_sqrt2", bits)
    raise KeyError(f"no height rule for {name!r}")


def _check_shifts(shifts: Sequence[int]) -> list[int]:
    shifts = list(shifts)
    if not 1 <= len(shifts) <= 2:
        raise ValueError("expected one or two shifts")
    if any(x < 0 for x in shifts):
        raise ValueError("shifts must be nonnegative")
    return shifts


def height_bound_eta3(shifts: Sequence[int], bits: int = BITS) -> CertifiedReal:
    """Upper bound for h(eta_3) in form 2 (one shift) or form 3 (two shifts)."""
    shifts = _check_shifts(shifts)
    log2 = cr_const("log2", bits)
    half_log_alpha = cr_const("log_alpha", bits).half()
    # log(2 sqrt 2) = 3/2 log 2, log(4 sqrt 2) = 5/2 log 2
    base = (log2 * 3).half() if len(shifts) == 1 else (log2 * 5).half()
    return base + half_log_alpha * sum(shifts)


def a3_parameter(shifts: Sequence[int], bits: int = BITS) -> CertifiedReal:
    """A_3 = 3 + x log alpha, or 4 + (x1 + x2) log alpha for two shifts."""
    shifts = _check_shifts(shifts)
    head = 3 if len(shifts) == 1 else 4
    a3 = head + cr_const("log_alpha", bits) * sum(shifts)
    need = max_of(height_bound_eta3(shifts, bits) * 2, 1)
    if not a3 > need:
        raise AssertionError(f"A_3 does not dominate 2 h(eta_3) for shifts {shifts}")
    return a3


def max_of(x: CertifiedReal, y) -> CertifiedReal:
    y = _cr(y, x.prec)
    lo = max(x.lower, y.lower)
    hi = max(x.upper, y.upper)
    return CertifiedReal.from_bounds(lo, hi, max(x.prec, y.prec))


def eta3(shifts: Sequence[int], bits: int = BITS) -> CertifiedReal:
    """eta_3 = sqrt 2 / (1 + sum alpha^-x)."""
    shifts = _check_shifts(shifts)
    inv_alpha = -cr_const("beta", bits)  # 1/alpha = sqrt 2 - 1
    den = 1 + sum((inv_alpha**x for x in shifts), CertifiedReal.exact(0, bits))
    return cr_const("sqrt2", bits) / den


def log_eta3_below_one(shifts: Sequence[int], bits: int = BITS) -> bool:
    """Certify |log eta_3| < 1."""
    return abs(cr_log(eta3(shifts, bits))) < 1


@dataclass(frozen=True)
class MatveevInstance:
    t: int
    degree_D: int
    A: tuple
    B: CertifiedReal

    def __post_init__(self):
        object.__setattr__(self, "A", tuple(_cr(a) for a in self.A))
        object.__setattr__(self, "B", _cr(self.B))
        if self.t < 1 or self.degree_D < 1:
            raise ValueError("t and D must be positive")
        if len(self.A) != self.t:
            raise ValueError("need exactly t height parameters")
        if not all(a >= Fraction(16, 100) for a in self.A):
            raise ValueError("each A_i must be at least 0.16")
        if not self.B >= 1:
            raise ValueError("B must be at least 1")


def matveev_constant(t: int, degree_D: int, bits: int = BITS) -> CertifiedReal:
    """1.4 * 30^(t+3) * t^4.5 * D^2 * (1 + log D)."""
    t_pow = CertifiedReal.exact(t**4, bits) * cr_sqrt(CertifiedReal.exact(t, bits))
    one_plus_log_d = 1 + cr_log(CertifiedReal.exact(degree_D, bits)) if degree_D > 1 else CertifiedReal.exact(1, bits)
    return CertifiedReal.exact(Fraction(14, 10), bits) * 30 ** (t + 3) * t_pow * degree_D**2 * one_plus_log_d


def matveev_exponent(inst: MatveevInstance, one_plus_log_b: CertifiedReal | None = None, bits: int = BITS) -> CertifiedReal:
    """E with |Lambda| > exp(-E) for a nonzero linear form.

    ``one_plus_log_b`` overrides the factor (1 + log B), e.g. with the symbolic
    replacement ``2`` used to pull out a ``log n``.
    """
    if one_plus_log_b is None:
        one_plus_log_b = 1 + cr_log(inst.B.with_prec(max(bits, inst.B.prec)), bits)
    result = matveev_constant(inst.t, inst.degree_D, bits) * _cr(one_plus_log_b, bits)
    for a in inst.A:
        result = result * a
    return result


@dataclass(frozen=True)
class BoundChainCoefficient:
    """Certified ``quantity * log alpha < C * log^k n`` (for ``n``: ``n < C log^k n``)."""

    quantity: str
    coefficient_C: CertifiedReal
    log_power_k: int
    target_constant: Fraction

    def within_target(self) -> bool:
        return self.coefficient_C.upper <= self.target_constant


@dataclass
class BoundChainReport:
    k1: BoundChainCoefficient
    k2: BoundChainCoefficient
    k3: BoundChainCoefficient
    checks: dict = field(default_factory=dict)
    values: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())


def bound_chain_report(bits: int = BITS) -> BoundChainReport:
    """Run the full coefficient chain and every side condition it relies on."""
    log2 = cr_const("log2", bits)
    log_alpha = cr_const("log_alpha", bits)
    log_n0 = cr_log(CertifiedReal.exact(N_START, bits))
    checks: dict[str, bool] = {}

    a1, a2, a3 = (CertifiedReal.exact(a, bits) for a in TARGET_A)
    checks["A1 >= max(2h(2), |log 2|, 0.16)"] = a1 >= max_of(height_of_named("two", bits) * 2, Fraction(16, 100))
    checks["A2 >= max(2h(alpha), |log alpha|, 0.16)"] = a2 >= max_of(height_of_named("alpha", bits) * 2, Fraction(16, 100))
    checks["A3 >= max(2h(sqrt2), |log sqrt2|, 0.16)"] = a3 >= max_of(height_of_named("sqrt2", bits) * 2, Fraction(16, 100))
    # 1 + log(2n + 1) < 2 log n at n = 151; the gap grows with n
    checks["1 + log(2n+1) < 2 log n at n=151"] = 1 + cr_log(CertifiedReal.exact(2 * N_START + 1, bits)) < log_n0 * 2

    base = matveev_constant(3, 2, bits)
    # form 1: |Lambda_1| > exp(-c1 log n), |Lambda_1| < 8 / alpha^(n-m)
    c1 = base * 2 * a1 * a2 * a3
    k1 = c1 + cr_log(CertifiedReal.exact(8, bits)) / log_n0

    # forms 2 and 3: coefficient per unit of A_3
    c2 = base * 2 * a1 * a2
    checks["per-A3 coefficient <= 2.45e12"] = c2 <= TARGET_C2
    # form 2 right side 5/alpha^(n-l), A_3 >= 3
    c2_form2 = c2 + cr_log(CertifiedReal.exact(5, bits)) / (log_n0 * 3)
    checks["form 2 slack <= 2.5e12"] = c2_form2 <= TARGET_C2_ROUNDED
    # form 3 right side 2/alpha^n, A_3 >= 4
    c2_form3 = c2 + log2 / (log_n0 * 4)
    checks["form 3 slack <= 2.5e12"] = c2_form3 <= TARGET_C2_ROUNDED

    rounded = CertifiedReal.exact(TARGET_C2_ROUNDED, bits)
    # (n-l) log a < 2.5e12 log n (3 + K1 log n) <= 2.5e12 (3/log n0 + K1) log^2 n
    k2 = rounded * (3 / log_n0 + k1)
    # n log a < 2.5e12 log n (4 + K1 log n + K2 log^2 n)
    k3 = rounded * (4 / (log_n0 * log_n0) + k1 / log_n0 + k2) / log_alpha

    K1 = BoundChainCoefficient("n_minus_m", k1, 1, TARGET_K1)
    K2 = BoundChainCoefficient("n_minus_ell", k2, 2, TARGET_K2)
    K3 = BoundChainCoefficient("n", k3, 3, TARGET_K3)
    for K in (K1, K2, K3):
        checks[f"{K.quantity} coefficient <= target constant"] = K.within_target()
    values = {"c1": c1, "c2": c2, "c2_form2": c2_form2, "c2_form3": c2_form3}
    return BoundChainReport(K1, K2, K3, checks, values)


def bound_chain(bits: int = BITS) -> tuple[BoundChainCoefficient, BoundChainCoefficient, BoundChainCoefficient]:
    report = bound_chain_report(bits)
    if not report.ok:
        failed = [name for name, ok in report.checks.items() if not ok]
        raise ArithmeticError(f"bound chain side conditions failed: {failed}")
    return report.k1, report.k2, report.k3


def _exceeds(x: int, C: Fraction, k: int, bits: int) -> bool:
    """Certify x > C (log x)^k."""
    bits = max(bits, 2 * x.bit_length() + 64)
    lg = cr_log(CertifiedReal.exact(x, bits))
    return CertifiedReal.exact(x, bits) - CertifiedReal.exact(C, bits) * lg**k > 0


def solve_log_bound(C, k: int, bits: int = 128, hi: int = 10**60, max_iter: int = 256) -> int:
    """Least integer N (above the hump at e^k) with ``x < C log^k x  =>  x < N``.

    The upper endpoint of ``C`` is used. For x >= e^k the ratio C log^k x / x
    decreases, so once N is certified to exceed C log^k N every larger x does too.
    """
    C = C.upper if isinstance(C, CertifiedReal) else Fraction(C)
    if C <= 0:
        raise ValueError("C must be positive")
    if k < 0:
        raise ValueError("k must be nonnegative")
    if k == 0:
        return C.__ceil__()
    lo = 3**k  # > e^k
    if _exceeds(lo, C, k, bits):
        return lo
    if not _exceeds(hi, C, k, bits):
        raise ArithmeticError(f"no certified fixed point of x = C log^{k} x below {hi}")
    for _ in range(max_iter):
        if hi - lo <= 1:
            return hi
        mid = (lo + hi) // 2
        if _exceeds(mid, C, k, bits):
            hi = mid
        else:
            lo = mid
    raise ArithmeticError("bisection did not converge within the iteration cap")


def nonvanishing_guard(form: str, n: int = N_START, m: int | None = None, ell: int | None = None,
                       notes: list | None = None, bits: int = BITS) -> bool:
    """Re-verify the numeric side of the argument that a linear form is nonzero.

    ``form`` is ``"lambda1"``, ``"lambda2"`` or ``"lambda3"``. A note describing
    the algebraic argument is appended to ``notes`` when given.
    """
    abs_beta = -cr_const("beta", bits)
    alpha = cr_const("alpha", bits)
    if form == "lambda1":
        ok = True
        note = ("Lambda_1 = 0 would give 2^(a+1) = alpha^n / sqrt 2, so alpha^(2n) = 2^(2a+3) "
                "would be rational; alpha^(2n) is irrational for n >= 1.")
    elif form == "lambda2":
        m = n - 1 if m is None else m
        given = abs_beta**n + abs_beta**m
        worst = abs_beta**n + abs_beta  # m >= 1
        ok = alpha**n > 1 and given < 1 and worst < 1
        note = ("Lambda_2 = 0 gives 2^(a+1) sqrt 2 = alpha^n + alpha^m; conjugating gives "
                "-2^(a+1) sqrt 2 = beta^n + beta^m, so alpha^n < |beta|^n + |beta|^m < 1; "
                f"certified at n={n}, m={m} and for the worst case m=1.")
    elif form == "lambda3":
        m = n if m is None else m
        ell = n if ell is None else ell
        given = abs_beta**n + abs_beta**m + abs_beta**ell
        worst = abs_beta**n + abs_beta * 2  # m, l >= 1
        ok = alpha**n > 1 and given < 1 and worst < 1
        note = ("Lambda_3 = 0 gives 2^(a+1) sqrt 2 = alpha^n + alpha^m + alpha^l; conjugating "
                "gives alpha^n < |beta|^n + |beta|^m + |beta|^l < 1; "
                f"certified at n={n}, m={m}, l={ell} and for the worst case m=l=1.")
    else:
        raise ValueError(f"unknown linear form {form!r}")
    if notes is not None:
        notes.append({"form": form, "holds": ok, "note": note})
    return ok

