"""Certified real arithmetic on fixed-point big integers.

A :class:`CertifiedReal` stores ``mid``, ``rad`` and ``prec`` as Python ints and
stands for every real in ``[(mid - rad) / 2**prec, (mid + rad) / 2**prec]``.
Each operation rounds its midpoint and widens the radius so that the exact
result of the operation, applied to any points of the argument intervals, stays
inside the result interval.

Comparisons (``<``, ``>``, ``<=``, ``>=``) are *certified*: they return True only
when the relation holds for every point of both intervals.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Union

# Extra bits carried inside transcendental evaluations before the final rounding.
GUARD_BITS = 32

Number = Union[int, Fraction]


class PrecisionExhausted(ArithmeticError):
    """Raised when a requested radius cannot be reached within ``max_bits``."""


class UncertifiedError(ArithmeticError):
    """Raised when an interval is too wide for the requested operation."""


@dataclass(frozen=True)
class PrecisionPolicy:
    initial_bits: int = 192
    max_bits: int = 8192
    growth_factor: int = 2

    def __post_init__(self):
        if self.initial_bits < 1 or self.max_bits < 1:
            raise ValueError("precision bits must be positive")
        if self.initial_bits > self.max_bits:
            raise ValueError("initial_bits must not exceed max_bits")
        if self.growth_factor < 2:
            raise ValueError("growth_factor must be at least 2")

    def schedule(self):
        """Yield the escalating precisions ``initial, initial*g, ..., max``."""
        bits = self.initial_bits
        while True:
            yield bits
            if bits >= self.max_bits:
                return
            bits = min(bits * self.growth_factor, self.max_bits)

    def as_dict(self) -> dict:
        return {
            "initial_bits": self.initial_bits,
            "max_bits": self.max_bits,
            "growth_factor": self.growth_factor,
        }


DEFAULT_POLICY = PrecisionPolicy()


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


def _round_shift(x: int, k: int) -> int:
    """Round ``x / 2**k`` to the nearest integer (k >= 0)."""
    if k == 0:
        return x
    return (x + (1 << (k - 1))) >> k


@dataclass(frozen=True)
class CertifiedReal:
    mid: int
    rad: int
    prec: int

    def __post_init__(self):
        if self.rad < 0:
            raise ValueError("radius must be nonnegative")
        if self.prec < 0:
            raise ValueError("precision must be nonnegative")

    # -- construction -----------------------------------------------------

    @classmethod
    def exact(cls, value: Number, prec: int) -> "CertifiedReal":
        """Enclose an integer or rational; dyadic values are held exactly."""
        value = Fraction(value)
        scaled = value * (1 << prec)
        if scaled.denominator == 1:
            return cls(scaled.numerator, 0, prec)
        return cls(round(scaled), 1, prec)

    @classmethod
    def from_bounds(cls, lower: Fraction, upper: Fraction, prec: int) -> "CertifiedReal":
        """Smallest interval at ``prec`` enclosing ``[lower, upper]``."""
        if lower > upper:
            raise ValueError("lower bound exceeds upper bound")
        scale = 1 << prec
        lo = (Fraction(lower) * scale).__floor__()
        hi = (Fraction(upper) * scale).__ceil__()
        mid = (lo + hi) // 2
        rad = max(mid - lo, hi - mid)
        return cls(mid, rad, prec)

    # -- views ------------------------------------------------------------

    @property
    def precision_bits(self) -> int:
        return self.prec

    @property
    def midpoint(self) -> Fraction:
        return Fraction(self.mid, 1 << self.prec)

    @property
    def radius(self) -> Fraction:
        return Fraction(self.rad, 1 << self.prec)

    @property
    def lower(self) -> Fraction:
        return Fraction(self.mid - self.rad, 1 << self.prec)

    @property
    def upper(self) -> Fraction:
        return Fraction(self.mid + self.rad, 1 << self.prec)

    @property
    def is_exact(self) -> bool:
        return self.rad == 0

    def contains(self, value: Number) -> bool:
        return self.lower <= Fraction(value) <= self.upper

    def overlaps(self, other: "CertifiedReal") -> bool:
        return self.lower <= other.upper and other.lower <= self.upper

    def __float__(self) -> float:
        return float(self.midpoint)

    def __repr__(self) -> str:
        return f"CertifiedReal({float(self.midpoint)!r} ± {float(self.radius):.3g}, prec={self.prec})"

    # -- precision handling -------------------------------------------------

    def with_prec(self, prec: int) -> "CertifiedReal":
        """Re-express at ``prec`` bits (exact when raising precision)."""
        if prec == self.prec:
            return self
        if prec > self.prec:
            k = prec - self.prec
            return CertifiedReal(self.mid << k, self.rad << k, prec)
        k = self.prec - prec
        mid = _round_shift(self.mid, k)
        exact = (mid << k) == self.mid
        rad = _ceil_div(self.rad, 1 << k) + (0 if exact else 1)
        return CertifiedReal(mid, rad, prec)

    def _coerce(self, other) -> "CertifiedReal":
        if isinstance(other, CertifiedReal):
            return other
        if isinstance(other, (int, Fraction)):
            return CertifiedReal.exact(other, self.prec)
        return NotImplemented

    @staticmethod
    def _align(a: "CertifiedReal", b: "CertifiedReal"):
        p = max(a.prec, b.prec)
        return a.with_prec(p), b.with_prec(p), p

    # -- arithmetic -----------------------------------------------------------

    def __neg__(self) -> "CertifiedReal":
        return CertifiedReal(-self.mid, self.rad, self.prec)

    def __abs__(self) -> "CertifiedReal":
        if self.mid - self.rad >= 0:
            return self
        if self.mid + self.rad <= 0:
            return -self
        hi = max(self.mid + self.rad, self.rad - self.mid)
        return CertifiedReal(_ceil_div(hi, 2), _ceil_div(hi, 2), self.prec)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b, p = self._align(self, other)
        return CertifiedReal(a.mid + b.mid, a.rad + b.rad, p)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b, p = self._align(self, other)
        return CertifiedReal(a.mid - b.mid, a.rad + b.rad, p)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        if isinstance(other, int):
            # integer scaling is exact
            return CertifiedReal(self.mid * other, self.rad * abs(other), self.prec)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b, p = self._align(self, other)
        prod = a.mid * b.mid
        mid = _round_shift(prod, p)
        err = abs(a.mid) * b.rad + abs(b.mid) * a.rad + a.rad * b.rad
        rad = _ceil_div(err, 1 << p) + (0 if (mid << p) == prod else 1)
        return CertifiedReal(mid, rad, p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b, p = self._align(self, other)
        if abs(b.mid) <= b.rad:
            raise ZeroDivisionError("divisor interval contains zero")
        num = a.mid << p
        den_s = b.mid
        if den_s < 0:
            num, den_s = -num, -den_s
        mid = (2 * num + den_s) // (2 * den_s)
        exact = mid * den_s == num
        err = (a.rad * abs(b.mid) + abs(a.mid) * b.rad) << p
        den = (abs(b.mid) - b.rad) * abs(b.mid)
        rad = _ceil_div(err, den) + (0 if exact else 1)
        return CertifiedReal(mid, rad, p)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other / self

    def __pow__(self, n: int) -> "CertifiedReal":
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return CertifiedReal.exact(1, self.prec) / (self ** (-n))
        result = CertifiedReal.exact(1, self.prec)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def half(self) -> "CertifiedReal":
        """Exact division by two (one more bit of precision)."""
        return CertifiedReal(self.mid, self.rad, self.prec + 1)

    # -- certified comparisons ------------------------------------------------

    def _diff(self, other) -> "CertifiedReal":
        other = self._coerce(other)
        return self - other

    def __lt__(self, other) -> bool:
        d = self._diff(other)
        return d.mid + d.rad < 0

    def __le__(self, other) -> bool:
        d = self._diff(other)
        return d.mid + d.rad <= 0

    def __gt__(self, other) -> bool:
        d = self._diff(other)
        return d.mid - d.rad > 0

    def __ge__(self, other) -> bool:
        d = self._diff(other)
        return d.mid - d.rad >= 0

    def is_positive(self) -> bool:
        return self.mid - self.rad > 0

    def is_negative(self) -> bool:
        return self.mid + self.rad < 0

    def floor_bounds(self) -> tuple[int, int]:
        """``(floor(lower), floor(upper))``."""
        scale = 1 << self.prec
        return (self.mid - self.rad) // scale, (self.mid + self.rad) // scale

    def ceil_upper(self) -> int:
        """An integer certified to be >= the ceiling of every enclosed value."""
        return _ceil_div(self.mid + self.rad, 1 << self.prec)


Arg = Union[CertifiedReal, int, Fraction]


def _as_cr(x: Arg, prec: int) -> CertifiedReal:
    if isinstance(x, CertifiedReal):
        return x
    return CertifiedReal.exact(x, prec)


# -- transcendental kernels ---------------------------------------------------


def _atanh_fixed(s: int, prec: int) -> tuple[int, int]:
    """atanh(s / 2**prec) for 0 <= s <= 2**prec / 3, as (value, error) in ulps.

    ``s`` itself is treated as exact; the caller accounts for its error.
    """
    one = 1 << prec
    if not 0 <= 3 * s <= one:
        raise ValueError("atanh kernel needs 0 <= s <= 1/3")
    s2 = (s * s) >> prec
    power = s
    total = s
    terms = 0
    j = 1
    while power:
        power = (power * s2) >> prec
        total += power // (2 * j + 1)
        j += 1
        terms += 1
    # per term: power error stays <= 9/4 ulp (contracted by s^2 <= 1/9), plus
    # one floor in the division; the neglected tail is < 3 ulp.
    return total, 4 * terms + 4


@lru_cache(maxsize=None)
def _log2_fixed(prec: int) -> tuple[int, int]:
    """log 2 = 2 atanh(1/3) at ``prec`` bits as (value, error) in ulps."""
    one = 1 << prec
    third = one // 3
    val, err = _atanh_fixed(third, prec)
    # the truncated 1/3 is off by < 1 ulp and d(atanh)/ds <= 9/8 there
    return 2 * val, 2 * (err + 2)


def _log_positive_fixed(mid: int, prec: int, work: int) -> tuple[int, int]:
    """log(mid / 2**prec) for mid > 0, at ``work`` bits, as (value, error) in ulps."""
    e = mid.bit_length() - 1
    # z = mid / 2**e lies in [1, 2)
    if work >= e:
        z = mid << (work - e)
        z_err = 0
    else:
        z = mid >> (e - work)
        z_err = 1
    one = 1 << work
    k = e - prec
    # bring z into [2/3, 4/3) so that |s| <= 1/5
    if 3 * z >= 4 * one:
        z_half = z >> 1
        z_err += z & 1
        z = z_half
        k += 1
    num = z - one
    den = z + one
    s = abs(num << work) // den
    # |ds/dz| = 2/(z+1)^2 <= 2.25/(...)≈ at most 1 ulp per ulp of z, plus the floor
    s_err = z_err + 1
    val, err = _atanh_fixed(s, work)
    err += 2 * s_err  # d(atanh)/ds <= 25/24 < 2
    if num < 0:
        val = -val
    val *= 2
    err *= 2
    if k:
        l2, l2_err = _log2_fixed(work)
        val += k * l2
        err += abs(k) * l2_err
    return val, err


def _finish(val: int, err: int, work: int, prec: int) -> CertifiedReal:
    return CertifiedReal(val, err, work).with_prec(prec)


def cr_log(x: Arg, prec: int | None = None) -> CertifiedReal:
    """Enclosure of ``log x`` for an interval lying strictly inside (0, inf)."""
    if not isinstance(x, CertifiedReal):
        x = CertifiedReal.exact(x, prec if prec is not None else 128)
    if prec is None:
        prec = x.prec
    if x.mid - x.rad <= 0:
        raise UncertifiedError("log argument interval touches or crosses zero")
    work = prec + GUARD_BITS
    val, err = _log_positive_fixed(x.mid, x.prec, work)
    if x.rad:
        # mean value theorem: |log y - log mid| <= rad / lower
        err += _ceil_div(x.rad << work, x.mid - x.rad)
    return _finish(val, err + 1, work, prec)


def cr_sqrt(x: Arg, prec: int | None = None) -> CertifiedReal:
    """Enclosure of ``sqrt x`` for a nonnegative interval."""
    from math import isqrt

    if not isinstance(x, CertifiedReal):
        x = CertifiedReal.exact(x, prec if prec is not None else 128)
    if prec is None:
        prec = x.prec
    if x.mid - x.rad < 0:
        raise UncertifiedError("sqrt argument interval reaches below zero")
    work = prec + GUARD_BITS
    xw = x.with_prec(work)
    # floor(sqrt(mid * 2**work)) is sqrt(mid / 2**work) in work-bit fixed point
    val = isqrt(xw.mid << work)
    err = 1
    if xw.rad:
        low = isqrt((xw.mid - xw.rad) << work)
        if low == 0:
            raise UncertifiedError("sqrt argument too close to zero to bound derivative")
        err += _ceil_div(xw.rad << work, 2 * low)
    return _finish(val, err, work, prec)


# -- named constants ------------------------------------------------------------

CONSTANT_NAMES = ("two", "sqrt2", "alpha", "beta", "log2", "log_alpha", "log_sqrt2")

_cache_lock = threading.Lock()


@lru_cache(maxsize=1024)
def _const_cached(name: str, bits: int) -> CertifiedReal:
    work = bits + GUARD_BITS
    if name == "two":
        return CertifiedReal.exact(2, bits)
    if name == "sqrt2":
        return cr_sqrt(CertifiedReal.exact(2, work), bits)
    if name == "alpha":
        return (1 + cr_sqrt(CertifiedReal.exact(2, work), work)).with_prec(bits)
    if name == "beta":
        return (1 - cr_sqrt(CertifiedReal.exact(2, work), work)).with_prec(bits)
    if name == "log2":
        val, err = _log2_fixed(work)
        return _finish(val, err, work, bits)
    if name == "log_alpha":
        alpha = 1 + cr_sqrt(CertifiedReal.exact(2, work), work)
        return cr_log(alpha, bits)
    if name == "log_sqrt2":
        val, err = _log2_fixed(work)
        return _finish(val, err, work + 1, bits)
    raise KeyError(f"unknown constant {name!r}")


def cr_const(name: str, bits: int) -> CertifiedReal:
    """Named constant of the Pell setting with radius <= 2**(4 - bits)."""
    if name not in CONSTANT_NAMES:
        raise KeyError(f"unknown constant {name!r}; expected one of {CONSTANT_NAMES}")
    if bits < 16:
        raise ValueError("bits must be at least 16")
    return _const_cached(name, bits)


def cr_arith(op: str, *args: Arg) -> CertifiedReal:
    """Dispatch ``add/sub/mul/div/neg/pow_int`` on certified arguments."""
    if op == "neg":
        (x,) = args
        return -_as_cr(x, 64)
    if op == "pow_int":
        x, n = args
        return _as_cr(x, 64) ** int(n)
    x, y = args
    if not isinstance(x, CertifiedReal):
        x = _as_cr(x, y.prec if isinstance(y, CertifiedReal) else 64)
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "div":
        return x / y
    raise ValueError(f"unknown operation {op!r}")


def nearest_int_distance(x: CertifiedReal) -> CertifiedReal:
    """Enclosure of ``||x||``, the distance from x to the nearest integer.

    ``||.||`` is 1-Lipschitz, so the result is ``||mid|| ± rad`` clipped to
    ``[0, 1/2]``; a straddled half-integer is covered by the clip.
    """
    scale = 1 << x.prec
    if 4 * x.rad >= scale:
        raise UncertifiedError("radius too large to certify a nearest integer")
    frac = x.mid % scale
    d = min(frac, scale - frac)
    lo = max(0, d - x.rad)
    hi = min(scale // 2, d + x.rad)
    # scale is even for prec >= 1; keep the midpoint integral by going one bit finer
    return CertifiedReal(lo + hi, hi - lo, x.prec + 1)


# -- expression handles and refinement ------------------------------------------


class Expr:
    """A named real defined by an evaluator ``bits -> CertifiedReal``.

    Evaluations are memoized per precision.
    """

    def __init__(self, name: str, fn: Callable[[int], CertifiedReal]):
        self.name = name
        self._fn = fn
        self._memo: dict[int, CertifiedReal] = {}
        self._lock = threading.Lock()

    def __call__(self, bits: int) -> CertifiedReal:
        cached = self._memo.get(bits)
        if cached is not None:
            return cached
        value = self._fn(bits)
        with self._lock:
            self._memo.setdefault(bits, value)
        return value

    def __repr__(self) -> str:
        return f"Expr({self.name})"

    @classmethod
    def constant(cls, name: str) -> "Expr":
        if name not in CONSTANT_NAMES:
            raise KeyError(f"unknown constant {name!r}")
        return cls(name, lambda bits: cr_const(name, bits))

    @classmethod
    def rational(cls, value: Number) -> "Expr":
        value = Fraction(value)
        return cls(str(value), lambda bits: CertifiedReal.exact(value, bits))


def refine(expr: Expr, target_radius, policy: PrecisionPolicy = DEFAULT_POLICY) -> CertifiedReal:
    """Evaluate ``expr`` at escalating precision until its radius is small enough."""
    target = Fraction(target_radius)
    if target <= 0:
        raise ValueError("target_radius must be positive")
    last = None
    for bits in policy.schedule():
        last = expr(bits)
        if last.radius <= target:
            return last
    raise PrecisionExhausted(
        f"{expr!r}: radius {float(last.radius):.3g} > target {float(target):.3g} "
        f"at max_bits={policy.max_bits}"
    )


GAMMA = Expr("log2/log_alpha", lambda bits: cr_const("log2", bits) / cr_const("log_alpha", bits))
LOG_ALPHA = Expr.constant("log_alpha")


# -- decimal rendering ------------------------------------------------------------


def fraction_to_sci(value: Fraction, digits: int = 30, rounding: str = "nearest") -> str:
    """Render a rational in scientific notation with ``digits`` significant digits.

    ``rounding`` is ``"nearest"``, ``"down"`` (toward -inf) or ``"up"`` (toward +inf).
    """
    value = Fraction(value)
    if value == 0:
        return "0"
    sign = "-" if value < 0 else ""
    mag = abs(value)
    # exponent e with 10**e <= mag < 10**(e+1)
    e = len(str(mag.numerator)) - len(str(mag.denominator))
    if Fraction(10) ** e > mag:
        e -= 1
    if Fraction(10) ** (e + 1) <= mag:
        e += 1
    scaled = mag / Fraction(10) ** (e - digits + 1)
    if rounding == "nearest":
        m = round(scaled)
    else:
        toward_larger_mag = (rounding == "up") != (value < 0)
        m = scaled.__ceil__() if toward_larger_mag else scaled.__floor__()
    if m >= 10**digits:
        m //= 10
        e += 1
    s = str(m)
    body = s[0] + ("." + s[1:].rstrip("0") if s[1:].rstrip("0") else "")
    return f"{sign}{body}e{e}"


def parse_decimal(text: str) -> Fraction:
    """Exact rational value of a decimal string such as ``'4e43'`` or ``'1.25e-7'``."""
    from decimal import Decimal

    return Fraction(Decimal(text))


def describe(x: CertifiedReal, digits: int = 30) -> dict:
    """JSON-ready rendering: midpoint and outward-rounded radius as decimal strings."""
    return {
        "mid": fraction_to_sci(x.midpoint, digits),
        "radius": fraction_to_sci(x.radius, 3, "up") if x.rad else "0",
        "bits": x.prec,
    }
