"""Exact valuations and capped-precision p-adic arithmetic over the rationals.

Ground field is Q_p with p an unramified rational prime.  Two representations
coexist: exact `Fraction` values for valuation-only queries, and `PadicNumber`
(valuation + unit digits mod p^relprec) for long summations where exact
numerators would blow up.  All values are immutable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

INF = math.inf

Rational = Fraction | int


class PrecisionExhausted(ArithmeticError):
    """Raised when a result is indistinguishable from zero at working precision."""


def vp_int(n: int, p: int) -> int | float:
    """Valuation v_p(n) of an integer; INF for 0."""
    if n == 0:
        return INF
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def vp_rational(a: Rational, p: int) -> int | float:
    """v_p(a) = v_p(numerator) - v_p(denominator); INF for 0."""
    a = Fraction(a)
    if a == 0:
        return INF
    return vp_int(a.numerator, p) - vp_int(a.denominator, p)


def digit_sum(n: int, p: int) -> int:
    """Sum of the base-p digits of n >= 0."""
    s = 0
    while n:
        s += n % p
        n //= p
    return s


def vp_factorial(n: int, p: int) -> int:
    """v_p(n!) = (n - s_p(n)) / (p - 1); always an integer."""
    if n < 0:
        raise ValueError("factorial of a negative integer")
    return (n - digit_sum(n, p)) // (p - 1)


def varpi_valuation(p: int) -> Fraction:
    """Valuation 1/(p-1) of the convergence radius constant for p."""
    return Fraction(1, p - 1)


def varpi_m_valuation(m: int, p: int) -> Fraction:
    """Valuation (p^m - 1)/(p^m (p-1)) of the level-m radius constant |(p^m)!|^(1/p^m)."""
    pm = p**m
    return Fraction(vp_factorial(pm, p), pm)


def is_p_integral(a: Rational, p: int) -> bool:
    return Fraction(a).denominator % p != 0


def padic_digits(lam: Rational, count: int, p: int) -> tuple[int, ...]:
    """First `count` base-p digits of a rational p-adic integer.

    Uses the exact recursion lam_{i+1} = (lam - digit_i)/p, so eventual
    periodicity of rational inputs is reproduced exactly.
    """
    lam = Fraction(lam)
    if lam.denominator % p == 0:
        raise ValueError(f"{lam} is not a p-adic integer for p={p}")
    digits = []
    for _ in range(count):
        d = lam.numerator * pow(lam.denominator, -1, p) % p
        digits.append(d)
        lam = (lam - d) / p
    return tuple(digits)


DEFAULT_PREC = 64  # unit digits carried by default, overridable per run


@dataclass(frozen=True)
class PadicNumber:
    """Element of Q_p known modulo p^absprec.

    Nonzero: value = p^val * unit with unit a unit mod p^relprec, so
    absprec = val + relprec.  Tracked zero: unit == 0, relprec == 0 and
    `val` holds the absolute precision (the value is 0 mod p^val).
    Arithmetic never reports more absolute precision than its inputs justify.
    """

    p: int
    val: int
    unit: int
    relprec: int

    def __post_init__(self):
        if self.unit:
            assert self.unit % self.p != 0 and 0 < self.unit < self.p**self.relprec
        else:
            assert self.relprec == 0

    # -- queries ---------------------------------------------------------

    def is_zero(self) -> bool:
        return self.unit == 0

    @property
    def absprec(self) -> int:
        return self.val + self.relprec

    def valuation(self) -> int | float:
        """Known valuation; INF for a tracked zero (true valuation >= absprec)."""
        return INF if self.is_zero() else self.val

    def digits(self, count: int | None = None) -> tuple[int, ...]:
        """Base-p digits of the unit part, lowest first."""
        count = self.relprec if count is None else min(count, self.relprec)
        u = self.unit
        out = []
        for _ in range(count):
            out.append(u % self.p)
            u //= self.p
        return tuple(out)

    def __repr__(self) -> str:
        if self.is_zero():
            return f"O({self.p}^{self.val})"
        shown = self.digits(8)
        tail = "..." if self.relprec > 8 else ""
        return f"{self.p}^{self.val}*({list(shown)}{tail})"

    # -- construction ----------------------------------------------------

    @classmethod
    def zero(cls, p: int, absprec: int) -> PadicNumber:
        return cls(p, absprec, 0, 0)

    @classmethod
    def from_rational(cls, a: Rational, p: int, prec: int = DEFAULT_PREC) -> PadicNumber:
        a = Fraction(a)
        if a == 0:
            return cls.zero(p, prec)
        v = vp_rational(a, p)
        u = a / Fraction(p) ** v
        mod = p**prec
        unit = u.numerator * pow(u.denominator, -1, mod) % mod
        return cls(p, int(v), unit, prec)

    # -- arithmetic ------------------------------------------------------

    def _check(self, other: PadicNumber) -> None:
        if self.p != other.p:
            raise ValueError("mixed primes")

    def __add__(self, other: PadicNumber) -> PadicNumber:
        self._check(other)
        absprec = min(self.absprec, other.absprec)
        if self.is_zero() and other.is_zero():
            return PadicNumber.zero(self.p, absprec)
        base = min(self.val, other.val, absprec)
        mod = self.p ** (absprec - base)
        rep = 0
        for t in (self, other):
            if not t.is_zero():
                rep += t.unit * self.p ** (t.val - base)
        rep %= mod
        if rep == 0:
            return PadicNumber.zero(self.p, absprec)
        v = int(vp_int(rep, self.p))
        unit = (rep // self.p**v) % self.p ** (absprec - base - v)
        return PadicNumber(self.p, base + v, unit, absprec - base - v)

    def __neg__(self) -> PadicNumber:
        if self.is_zero():
            return self
        return PadicNumber(self.p, self.val, self.p**self.relprec - self.unit, self.relprec)

    def __sub__(self, other: PadicNumber) -> PadicNumber:
        return self + (-other)

    def __mul__(self, other: PadicNumber) -> PadicNumber:
        self._check(other)
        if self.is_zero() or other.is_zero():
            # 0 mod p^A times p^v*unit is 0 mod p^(A+v); two zeros: 0 mod p^(A+B)
            a = self.absprec if self.is_zero() else self.val
            b = other.absprec if other.is_zero() else other.val
            return PadicNumber.zero(self.p, a + b)
        rel = min(self.relprec, other.relprec)
        unit = self.unit * other.unit % self.p**rel
        return PadicNumber(self.p, self.val + other.val, unit, rel)

    def __truediv__(self, other: PadicNumber) -> PadicNumber:
        self._check(other)
        if other.is_zero():
            raise PrecisionExhausted(
                f"division by a value indistinguishable from zero mod p^{other.absprec}"
            )
        if self.is_zero():
            return PadicNumber.zero(self.p, self.absprec - other.val)
        rel = min(self.relprec, other.relprec)
        mod = self.p**rel
        unit = self.unit * pow(other.unit, -1, mod) % mod
        return PadicNumber(self.p, self.val - other.val, unit, rel)

    def mul_rational(self, a: Rational, prec: int | None = None) -> PadicNumber:
        """Multiply by an exact rational scalar (full available precision)."""
        return self * PadicNumber.from_rational(a, self.p, prec or max(self.relprec, 1))

    # -- comparisons -----------------------------------------------------

    def same_mod(self, other: PadicNumber, absprec: int) -> bool:
        """True if self == other mod p^absprec, as far as both are known."""
        d = self - other
        if d.absprec < absprec:
            raise PrecisionExhausted(f"operands only known mod p^{d.absprec}")
        return d.is_zero() or d.val >= absprec


def padic_binom(lam: Rational, n: int, p: int, prec: int = DEFAULT_PREC) -> PadicNumber:
    """binom(lam, n) for a rational p-adic integer lam, evaluated incrementally.

    binom(lam, n) = binom(lam, n-1) * (lam - n + 1)/n; every step is a
    multiplication or division, so the unit part keeps full relative precision.
    """
    lam = Fraction(lam)
    if not is_p_integral(lam, p):
        raise ValueError(f"{lam} is not p-integral")
    out = PadicNumber.from_rational(1, p, prec)
    for i in range(1, n + 1):
        num = lam - i + 1
        if num == 0:
            return PadicNumber.zero(p, prec + out.val)
        out = out.mul_rational(Fraction(num, i), prec)
    return out


def binom_rational(lam: Rational, n: int) -> Fraction:
    """Exact rational binom(lam, n); the independent oracle for padic_binom."""
    lam = Fraction(lam)
    out = Fraction(1)
    for i in range(1, n + 1):
        out *= Fraction(lam - i + 1, i)
    return out
