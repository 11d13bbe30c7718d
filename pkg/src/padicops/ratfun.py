"""Exact rational-function arithmetic with divisor tracking, the Mobius
group action, logarithmic derivatives and the first-order relators.

Poles are restricted to rational points and the denominator is carried in
factored form prod (x - r)^m throughout; common factors are cancelled by
root evaluation and synthetic division, never by a polynomial gcd, which
keeps coefficient growth linear.  Numerator factorisations are cached when
known (construction from factors, products, substitutions) so that divisor
queries stay cheap; anything with non-rational roots is rejected loudly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping

Rational = Fraction | int


# ---------------------------------------------------------------------------
# Dense polynomials over Q
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Poly:
    """Dense univariate polynomial over Q; coeffs[i] is the x^i coefficient."""

    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        c = self.coeffs
        n = len(c)
        while n and c[n - 1] == 0:
            n -= 1
        if n != len(c):
            object.__setattr__(self, "coeffs", c[:n])

    @classmethod
    def of(cls, *coeffs: Rational) -> Poly:
        return cls(tuple(Fraction(c) for c in coeffs))

    @classmethod
    def x_minus(cls, a: Rational) -> Poly:
        return cls.of(-Fraction(a), 1)

    @classmethod
    def const(cls, a: Rational) -> Poly:
        return cls.of(a)

    def is_zero(self) -> bool:
        return not self.coeffs

    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def __getitem__(self, i: int) -> Fraction:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else Fraction(0)

    def __add__(self, other: Poly) -> Poly:
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly(tuple(self[i] + other[i] for i in range(n)))

    def __neg__(self) -> Poly:
        return Poly(tuple(-c for c in self.coeffs))

    def __sub__(self, other: Poly) -> Poly:
        return self + (-other)

    def __mul__(self, other: Poly) -> Poly:
        if self.is_zero() or other.is_zero():
            return Poly(())
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return Poly(tuple(out))

    def scale(self, a: Rational) -> Poly:
        a = Fraction(a)
        return Poly(tuple(a * c for c in self.coeffs))

    def __pow__(self, n: int) -> Poly:
        out, base = Poly.of(1), self
        while n:
            if n & 1:
                out = out * base
            base, n = base * base, n >> 1
        return out

    def divmod(self, other: Poly) -> tuple[Poly, Poly]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return Poly(()), self
        quot = [Fraction(0)] * (dq + 1)
        lead = other.coeffs[-1]
        for i in range(dq, -1, -1):
            c = rem[i + other.degree()] / lead
            quot[i] = c
            if c:
                for j, b in enumerate(other.coeffs):
                    rem[i + j] -= c * b
        return Poly(tuple(quot)), Poly(tuple(rem))

    def synth_div(self, root: Rational) -> tuple[Poly, Fraction]:
        """Divide by (x - root): returns (quotient, remainder value)."""
        root = Fraction(root)
        out: list[Fraction] = []
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * root + c
            out.append(acc)
        rem = out.pop() if out else Fraction(0)
        return Poly(tuple(reversed(out))), rem

    def derivative(self) -> Poly:
        return Poly(tuple(i * c for i, c in enumerate(self.coeffs) if i)) if self.coeffs else self

    def eval(self, x: Rational) -> Fraction:
        out = Fraction(0)
        for c in reversed(self.coeffs):
            out = out * Fraction(x) + c
        return out

    def shift(self, a: Rational) -> Poly:
        """p(x + a), via Horner in x + a."""
        out = Poly(())
        xa = Poly.of(Fraction(a), 1)
        for c in reversed(self.coeffs):
            out = out * xa + Poly.const(c)
        return out

    def compose_fractional(self, num: Poly, den: Poly) -> tuple[Poly, int]:
        """p(num/den) cleared of denominators: returns (P, e) with
        p(num/den) = P / den^e and e = max(deg p, 0)."""
        e = max(self.degree(), 0)
        out = Poly(())
        for i, c in enumerate(self.coeffs):
            out = out + (num**i * den ** (e - i)).scale(c)
        return out, e

    def __repr__(self) -> str:
        if self.is_zero():
            return "Poly(0)"
        terms = [f"{c}*x^{i}" for i, c in enumerate(self.coeffs) if c]
        return "Poly(" + " + ".join(terms) + ")"


class NonRationalRoots(ValueError):
    """A factorisation query hit a polynomial with no rational splitting."""


Factors = tuple[tuple[Fraction, int], ...]  # sorted ((root, multiplicity), ...)


@lru_cache(maxsize=4096)
def expand_factors(factors: Factors) -> Poly:
    out = Poly.of(1)
    for root, mult in factors:
        out = out * Poly.x_minus(root) ** mult
    return out


def _normalize_factors(items: Iterable[tuple[Rational, int]]) -> Factors:
    acc: dict[Fraction, int] = {}
    for r, m in items:
        r = Fraction(r)
        acc[r] = acc.get(r, 0) + m
    return tuple(sorted((r, m) for r, m in acc.items() if m))


def rational_roots(poly: Poly) -> list[tuple[Fraction, int]]:
    """Full factorisation of poly into rational linear factors, or raise.

    The constant content is not returned; use poly.coeffs[-1] for the scalar.
    """
    out: list[tuple[Fraction, int]] = []
    rem = poly
    if rem.is_zero():
        raise ValueError("cannot factor the zero polynomial")
    for cand in _root_candidates(poly):
        mult = 0
        while rem.degree() > 0:
            quot, r = rem.synth_div(cand)
            if r != 0:
                break
            rem = quot
            mult += 1
        if mult:
            out.append((cand, mult))
    if rem.degree() > 0:
        raise NonRationalRoots(f"{poly} has a non-rational factor {rem}")
    return out


def _root_candidates(poly: Poly) -> Iterable[Fraction]:
    """Rational root candidates p/q with p | trailing, q | leading coefficient."""
    coeffs = poly.coeffs
    if not coeffs:
        return
    k = 0
    while coeffs[k] == 0:
        k += 1
    if k:
        yield Fraction(0)
    from math import gcd, lcm

    den = 1
    for c in coeffs:
        den = lcm(den, c.denominator)
    a0, an = abs(int(coeffs[k] * den)), abs(int(coeffs[-1] * den))
    seen = set()
    for pp in _divisors(a0):
        for qq in _divisors(an):
            g = gcd(pp, qq)
            cand = Fraction(pp // g, qq // g)
            for c in (cand, -cand):
                if c not in seen:
                    seen.add(c)
                    yield c


def _divisors(n: int) -> list[int]:
    if n == 0:
        return [1]
    out = []
    i = 1
    while i * i <= n:
        if n % i == 0:
            out.append(i)
            if i != n // i:
                out.append(n // i)
        i += 1
    return sorted(out)


# ---------------------------------------------------------------------------
# Rational functions
# ---------------------------------------------------------------------------


class RationalFunction:
    """num / prod (x - r)^m with num a polynomial and rational poles only.

    The denominator is monic and factored; the fraction is reduced (num does
    not vanish at any pole).  `numf`, when not None, caches the factorisation
    of the numerator as (point -> multiplicity); it is maintained through
    products, powers, scalings and substitutions.
    """

    __slots__ = ("num", "den_factors", "numf")

    def __init__(self, num: Poly, den: Poly | Mapping[Rational, int] | Factors = (),
                 numf: Mapping[Rational, int] | None = None):
        if isinstance(den, Poly):
            if den.is_zero():
                raise ZeroDivisionError("zero denominator")
            lead = den.coeffs[-1]
            factors: Iterable[tuple[Rational, int]] = rational_roots(den)
            num = num.scale(1 / lead)
        elif isinstance(den, Mapping):
            factors = den.items()
        else:
            factors = den
        self._init_from(num, factors, numf)

    def _init_from(
        self,
        num: Poly,
        factors: Iterable[tuple[Rational, int]],
        numf: Mapping[Rational, int] | None,
    ) -> None:
        norm = _normalize_factors(factors)
        if any(m < 0 for _, m in norm):
            raise ValueError("negative pole multiplicity")
        # reduce: cancel (x - r) against the numerator wherever possible,
        # keeping the cached numerator factorisation in step
        reduced: list[tuple[Fraction, int]] = []
        cancelled: dict[Fraction, int] = {}
        for r, m in norm:
            m0 = m
            while m > 0 and not num.is_zero():
                quot, rem = num.synth_div(r)
                if rem != 0:
                    break
                num, m = quot, m - 1
            if m:
                reduced.append((r, m))
            if m != m0:
                cancelled[r] = m0 - m
        self.num = num
        self.den_factors = tuple(reduced)
        if num.is_zero():
            self.den_factors = ()
            self.numf = None
            return
        if numf is not None and cancelled:
            numf = dict(numf)
            for r, c in cancelled.items():
                have = numf.get(Fraction(r), 0)
                if have < c:
                    numf = None
                    break
                numf[Fraction(r)] = have - c
                if numf[Fraction(r)] == 0:
                    del numf[Fraction(r)]
        self.numf = dict(numf) if numf is not None else None
        if self.numf is not None and sum(self.numf.values()) != self.num.degree():
            self.numf = None

    # -- constructors ------------------------------------------------------

    @classmethod
    def const(cls, a: Rational) -> RationalFunction:
        return cls(Poly.const(a))

    @classmethod
    def x(cls) -> RationalFunction:
        return cls(Poly.of(0, 1), numf={Fraction(0): 1})

    @classmethod
    def from_factors(cls, scalar: Rational, factors: Mapping[Rational, int]) -> RationalFunction:
        """lambda * prod (x - a)^e from a factored description."""
        num, den, numf = Poly.const(scalar), {}, {}
        for a, e in factors.items():
            if e > 0:
                num = num * Poly.x_minus(a) ** e
                numf[Fraction(a)] = e
            elif e < 0:
                den[Fraction(a)] = -e
        return cls(num, den, numf=numf)

    # -- views ---------------------------------------------------------------

    @property
    def den(self) -> Poly:
        return expand_factors(self.den_factors)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_constant(self) -> bool:
        return self.num.degree() <= 0 and not self.den_factors

    def as_constant(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("not a constant")
        return self.num[0]

    def leading_scalar(self) -> Fraction:
        """The scalar lambda in lambda * prod (x-a)^e (den is monic)."""
        return self.num.coeffs[-1]

    def __eq__(self, other) -> bool:
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return self.num == other.num and self.den_factors == other.den_factors

    def __hash__(self):
        return hash((self.num, self.den_factors))

    def __repr__(self) -> str:
        if not self.den_factors:
            return f"{self.num}"
        return f"({self.num})/({self.den})"

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other: RationalFunction) -> RationalFunction:
        da, db = dict(self.den_factors), dict(other.den_factors)
        common = {r: max(da.get(r, 0), db.get(r, 0)) for r in {*da, *db}}
        ca = expand_factors(_normalize_factors((r, m - da.get(r, 0)) for r, m in common.items()))
        cb = expand_factors(_normalize_factors((r, m - db.get(r, 0)) for r, m in common.items()))
        return RationalFunction(self.num * ca + other.num * cb, common)

    def __neg__(self) -> RationalFunction:
        return RationalFunction(-self.num, self.den_factors, numf=self.numf)

    def __sub__(self, other: RationalFunction) -> RationalFunction:
        return self + (-other)

    def __mul__(self, other: RationalFunction) -> RationalFunction:
        if self.is_zero() or other.is_zero():
            return RationalFunction(Poly(()))
        numf = None
        if self.numf is not None and other.numf is not None:
            numf = dict(self.numf)
            for r, m in other.numf.items():
                numf[r] = numf.get(r, 0) + m
        return RationalFunction(
            self.num * other.num,
            [*self.den_factors, *other.den_factors],
            numf=numf,
        )

    def inverse(self) -> RationalFunction:
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        numf = self.numf if self.numf is not None else dict(rational_roots(self.num))
        scalar = self.num.coeffs[-1]
        return RationalFunction(
            expand_factors(self.den_factors).scale(1 / scalar),
            numf,
            numf={r: m for r, m in self.den_factors},
        )

    def __truediv__(self, other: RationalFunction) -> RationalFunction:
        return self * other.inverse()

    def scale(self, a: Rational) -> RationalFunction:
        if Fraction(a) == 0:
            return RationalFunction(Poly(()))
        return RationalFunction(self.num.scale(a), self.den_factors, numf=self.numf)

    def __pow__(self, n: int) -> RationalFunction:
        if n < 0:
            return self.inverse() ** (-n)
        if n == 0:
            return RationalFunction.const(1)
        numf = None if self.numf is None else {r: m * n for r, m in self.numf.items()}
        return RationalFunction(
            self.num**n,
            {r: m * n for r, m in self.den_factors},
            numf=numf,
        )

    def derivative(self) -> RationalFunction:
        """(P/D)' = (P' D0 - P sum_i m_i D0/(x-r_i)) / D0 prod (x-r_i)^(m_i+1)
        computed with D0 = prod (x - r_i) squarefree."""
        if not self.den_factors:
            return RationalFunction(self.num.derivative())
        d0 = expand_factors(_normalize_factors((r, 1) for r, _ in self.den_factors))
        acc = self.num.derivative() * d0
        for r, m in self.den_factors:
            acc = acc - self.num.scale(m) * d0.synth_div(r)[0]
        return RationalFunction(acc, _normalize_factors((r, m + 1) for r, m in self.den_factors))

    def eval(self, x: Rational) -> Fraction:
        den = Fraction(1)
        for r, m in self.den_factors:
            t = Fraction(x) - r
            if t == 0:
                raise ZeroDivisionError(f"pole at {x}")
            den *= t**m
        return self.num.eval(x) / den

    # -- divisors ------------------------------------------------------------

    def divisor(self) -> dict[Fraction, int]:
        """Map a -> v_a over the finite rational zeros and poles.

        Raises NonRationalRoots when the numerator does not split over Q.
        """
        if self.is_zero():
            raise ValueError("the zero function has no divisor")
        numf = self.numf
        if numf is None:
            numf = dict(rational_roots(self.num))
        out: dict[Fraction, int] = dict(numf)
        for r, m in self.den_factors:
            out[r] = out.get(r, 0) - m
        return {a: e for a, e in out.items() if e}

    def support(self) -> set[Fraction]:
        return set(self.divisor())

    def pole_points(self) -> list[tuple[Fraction, int]]:
        return list(self.den_factors)


def dlog(u: RationalFunction) -> RationalFunction:
    """Logarithmic derivative u'/u = sum v_a/(x - a)."""
    if u.is_zero():
        raise ZeroDivisionError("dlog of zero")
    div = u.divisor()
    out = RationalFunction(Poly(()))
    for a, e in div.items():
        out = out + RationalFunction(Poly.const(e), {a: 1})
    return out


# ---------------------------------------------------------------------------
# Mobius maps
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MobiusMap:
    """Invertible 2x2 rational matrix acting on P^1 and on functions.

    Points transform by z -> (az + b)/(cz + d); functions by substitution
    with the inverse, so the coordinate x maps to (dx - b)/(-cx + a).
    """

    a: Fraction
    b: Fraction
    c: Fraction
    d: Fraction

    def __post_init__(self):
        for f in "abcd":
            object.__setattr__(self, f, Fraction(getattr(self, f)))
        if self.det == 0:
            raise ValueError("singular matrix")

    @classmethod
    def of(cls, a: Rational, b: Rational, c: Rational, d: Rational) -> MobiusMap:
        return cls(Fraction(a), Fraction(b), Fraction(c), Fraction(d))

    @classmethod
    def identity(cls) -> MobiusMap:
        return cls.of(1, 0, 0, 1)

    @classmethod
    def translation(cls, b: Rational) -> MobiusMap:
        """The map with g.x = x + b (matrix (1, -b; 0, 1))."""
        return cls.of(1, -Fraction(b), 0, 1)

    @property
    def det(self) -> Fraction:
        return self.a * self.d - self.b * self.c

    def is_triangular(self) -> bool:
        return self.c == 0

    def varrho(self) -> Fraction:
        """The character a/d, defined for upper-triangular maps only."""
        if not self.is_triangular():
            raise ValueError("varrho is defined only for upper-triangular maps")
        return self.a / self.d

    def __mul__(self, other: MobiusMap) -> MobiusMap:
        return MobiusMap(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self) -> MobiusMap:
        return MobiusMap(self.d, -self.b, -self.c, self.a)

    # -- actions -----------------------------------------------------------

    def act_point(self, z: Rational) -> Fraction:
        den = self.c * Fraction(z) + self.d
        if den == 0:
            raise ZeroDivisionError("point maps to infinity")
        return (self.a * Fraction(z) + self.b) / den

    def act_x(self) -> RationalFunction:
        """The image of the coordinate function x."""
        return RationalFunction(Poly.of(-self.b, self.d), Poly.of(self.a, -self.c))

    def act_function(self, u: RationalFunction) -> RationalFunction:
        """Substitution action (g.u)(x) = u(g^{-1}.x).

        Linear factors map to linear factors: (x - r) becomes
        ((d + rc) x - (b + ra)) / (-cx + a), so the factored denominator is
        preserved without any refactorisation.
        """
        if u.is_zero():
            return u
        num_g = Poly.of(-self.b, self.d)  # dx - b
        den_g = Poly.of(self.a, -self.c)  # -cx + a
        pn, en = u.num.compose_fractional(num_g, den_g)
        m_total = sum(m for _, m in u.den_factors)
        scalar = Fraction(1)
        new_den: list[tuple[Fraction, int]] = []
        for r, m in u.den_factors:
            lead = self.d + r * self.c
            if lead != 0:
                new_den.append(((self.b + r * self.a) / lead, m))
                scalar /= lead**m
            else:
                scalar /= (-(self.b + r * self.a)) ** m
        # u(X) = pn/den_g^en * prod den_g^m / ell_r^m = pn den_g^(M-en) / prod ell_r^m
        shift = m_total - en
        if shift >= 0:
            pn = pn * den_g**shift
        else:
            if self.c != 0:
                new_den.append((self.a / self.c, -shift))
                pn = pn.scale(Fraction(1, (-self.c) ** (-shift)))
            else:
                pn = pn.scale(Fraction(1, self.a ** (-shift)))
        numf = None
        if u.numf is not None:
            numf = {}
            for r, m in u.numf.items():
                lead = self.d + r * self.c
                if lead != 0:
                    numf[(self.b + r * self.a) / lead] = numf.get((self.b + r * self.a) / lead, 0) + m
                else:
                    numf = None
                    break
        out = RationalFunction(pn.scale(scalar), _normalize_factors(new_den), numf=numf)
        if numf is not None and sum(numf.values()) != out.num.degree():
            out.numf = None
        return out

    def act_partial_coefficient(self) -> RationalFunction:
        """g.(d/dx) = ((-cx + a)^2/det) d/dx; returns the coefficient."""
        return RationalFunction(Poly.of(self.a, -self.c) ** 2).scale(1 / self.det)


# ---------------------------------------------------------------------------
# Relators
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FirstOrderOperator:
    """c1 * d/dx + c0 with rational-function coefficients."""

    c1: RationalFunction
    c0: RationalFunction

    def apply(self, f: RationalFunction) -> RationalFunction:
        return self.c1 * f.derivative() + self.c0 * f

    def scale(self, a: Rational) -> FirstOrderOperator:
        return FirstOrderOperator(self.c1.scale(a), self.c0.scale(a))

    def __eq__(self, other) -> bool:
        if not isinstance(other, FirstOrderOperator):
            return NotImplemented
        return self.c1 == other.c1 and self.c0 == other.c0

    def __hash__(self):
        return hash((self.c1, self.c0))


def delta_poly(points: Iterable[Rational]) -> Poly:
    out = Poly.of(1)
    for a in points:
        out = out * Poly.x_minus(a)
    return out


def relator(points: set[Fraction] | set[Rational], u: RationalFunction, d: int) -> FirstOrderOperator:
    """The operator Delta * (d/dx - (1/d) dlog(u)) with Delta = prod (x-a).

    Expanded form: Delta * d/dx - (1/d) sum_a v_a(u) prod_{b != a} (x - b).
    The divisor support of u must be contained in the given point set.
    """
    if d == 0:
        raise ValueError("d must be non-zero")
    pts = {Fraction(a) for a in points}
    div = u.divisor()
    if not set(div) <= pts:
        raise ValueError(f"divisor support {set(div)} not contained in {pts}")
    delta = RationalFunction(delta_poly(pts))
    zero_part = Poly(())
    for a in pts:
        v = div.get(a, 0)
        if v:
            zero_part = zero_part + delta_poly(pts - {a}).scale(v)
    c0 = RationalFunction(zero_part).scale(Fraction(-1, d))
    return FirstOrderOperator(delta, c0)
