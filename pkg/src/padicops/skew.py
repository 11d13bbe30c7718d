"""Truncated skew-Laurent operator arithmetic over rational-function
coefficients: the star product, Ore inverse expansions, transpose, norms,
the Mobius action on operators, and level-m divided-power bases.

An operator is a finite sum a_j * D^j (D = d/dx, j in Z).  Products follow
the bidirectional convolution

    (u * v)_k = sum_i u_i sum_m binom(i, m) delta^m(v_{k-i+m}),

which for stored finite supports collapses to one term per coefficient pair.
Negative powers of D make true products infinite in the negative direction,
so every series records whether its stored support is complete on each side
(`lo_exact` / `hi_exact`) plus an optional valuation bound for omitted tails.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping

from .cheeses import Cheese, gauss_valuation, sup_valuation
from .padics import vp_factorial
from .ratfun import MobiusMap, Poly, Rational, RationalFunction

RF = RationalFunction
DEFAULT_WINDOW = 40  # default K_neg = K_pos


def zbinom(i: int, m: int) -> int:
    """binom(i, m) for any integer upper index, integer m >= 0."""
    if m < 0:
        return 0
    if i >= 0:
        return math.comb(i, m) if m <= i else 0
    return (-1) ** m * math.comb(-i + m - 1, m)


def _rf(a) -> RF:
    if isinstance(a, RF):
        return a
    if isinstance(a, Poly):
        return RF(a, Poly.of(1))
    return RF.const(a)


class SkewLaurentSeries:
    """Finite window of a (possibly infinite) operator series.

    coeffs maps D-degree to a RationalFunction; zero coefficients are not
    stored.  lo_exact / hi_exact state that the underlying object has no
    omitted terms below/above the stored window.  tail, when present, maps an
    omitted degree to a lower bound for the reference (unit-circle) valuation
    of its coefficient.
    """

    __slots__ = ("coeffs", "lo_exact", "hi_exact", "tail")

    def __init__(
        self,
        coeffs: Mapping[int, RF],
        lo_exact: bool = True,
        hi_exact: bool = True,
        tail: Callable[[int], Fraction] | None = None,
    ):
        self.coeffs = {k: v for k, v in coeffs.items() if not v.is_zero()}
        self.lo_exact = lo_exact
        self.hi_exact = hi_exact
        self.tail = tail

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls) -> SkewLaurentSeries:
        return cls({})

    @classmethod
    def one(cls) -> SkewLaurentSeries:
        return cls({0: RF.const(1)})

    @classmethod
    def partial(cls, n: int = 1) -> SkewLaurentSeries:
        """D^n for any integer n."""
        return cls({n: RF.const(1)})

    @classmethod
    def function(cls, f) -> SkewLaurentSeries:
        return cls({0: _rf(f)})

    @classmethod
    def of(cls, coeffs: Mapping[int, object]) -> SkewLaurentSeries:
        return cls({k: _rf(v) for k, v in coeffs.items()})

    # -- basic structure ----------------------------------------------------

    def support(self) -> list[int]:
        return sorted(self.coeffs)

    def lo(self) -> int:
        return min(self.coeffs) if self.coeffs else 0

    def hi(self) -> int:
        return max(self.coeffs) if self.coeffs else 0

    def __getitem__(self, k: int) -> RF:
        return self.coeffs.get(k, RF.const(0))

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other) -> bool:
        if not isinstance(other, SkewLaurentSeries):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __repr__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = [f"({self.coeffs[k]})*D^{k}" for k in self.support()]
        flags = "" if self.lo_exact and self.hi_exact else " (truncated)"
        return " + ".join(parts) + flags

    def __add__(self, other: SkewLaurentSeries) -> SkewLaurentSeries:
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out[k] + v if k in out else v
        return SkewLaurentSeries(
            out, self.lo_exact and other.lo_exact, self.hi_exact and other.hi_exact
        )

    def __neg__(self) -> SkewLaurentSeries:
        return SkewLaurentSeries(
            {k: -v for k, v in self.coeffs.items()}, self.lo_exact, self.hi_exact, self.tail
        )

    def __sub__(self, other: SkewLaurentSeries) -> SkewLaurentSeries:
        return self + (-other)

    def scale(self, a) -> SkewLaurentSeries:
        f = _rf(a)
        return SkewLaurentSeries(
            {k: f * v for k, v in self.coeffs.items()}, self.lo_exact, self.hi_exact
        )

    def clip(self, lo: int, hi: int | None = None) -> SkewLaurentSeries:
        """Drop coefficients outside [lo, hi], marking the cut sides inexact."""
        out = {k: v for k, v in self.coeffs.items() if k >= lo and (hi is None or k <= hi)}
        lo_ex = self.lo_exact and (not self.coeffs or min(self.coeffs) >= lo)
        hi_ex = self.hi_exact and (hi is None or not self.coeffs or max(self.coeffs) <= hi)
        return SkewLaurentSeries(out, lo_ex, hi_ex)


def star(u: SkewLaurentSeries, v: SkewLaurentSeries, lo: int | None = None) -> SkewLaurentSeries:
    """Star product of two stored windows, computed exactly pair by pair.

    The (i, j) coefficient pair contributes binom(i, i+j-k) u_i delta^(i+j-k)(v_j)
    to degree k.  For i >= 0 the binomial truncates the inner sum; for i < 0 it
    never does, and `lo` cuts the computation (defaulting to the input windows'
    lower edge minus the default window size).

    Exactness: the result is marked lo_exact only if no contribution was
    clipped at `lo`; it inherits hi/lo exactness of the inputs.
    """
    if u.is_zero() or v.is_zero():
        return SkewLaurentSeries.zero()
    if lo is None:
        # nonnegative u never reaches below v's window; Laurent u does
        lo = v.lo() if u.lo() >= 0 else u.lo() + v.lo() - DEFAULT_WINDOW
    out: dict[int, RF] = {}
    clipped = False
    for i, ui in u.coeffs.items():
        for j, vj in v.coeffs.items():
            m = 0
            d = vj
            while True:
                if i >= 0 and m > i:
                    break
                if d.is_zero():
                    break
                k = i + j - m
                if k < lo:
                    clipped = True
                    break
                b = zbinom(i, m)
                if b:
                    term = ui * d if b == 1 else (ui * d).scale(b)
                    out[k] = out[k] + term if k in out else term
                m += 1
                d = d.derivative()
    lo_exact = u.lo_exact and v.lo_exact and not clipped
    hi_exact = u.hi_exact and v.hi_exact
    return SkewLaurentSeries(out, lo_exact, hi_exact)


def commutator(u: SkewLaurentSeries, v: SkewLaurentSeries, lo: int | None = None) -> SkewLaurentSeries:
    return star(u, v, lo) - star(v, u, lo)


def ore_inverse_expansion(a: Poly, n_max: int | None = None) -> SkewLaurentSeries:
    """D^{-1} a = sum_{n <= deg a} (-1)^n delta^n(a) D^{-n-1}; exact and finite."""
    deg = max(a.degree(), 0)
    if n_max is not None and n_max < deg:
        raise ValueError(f"need n_max >= deg(a) = {deg}")
    out: dict[int, RF] = {}
    d = RF(a, Poly.of(1))
    n = 0
    while not d.is_zero():
        out[-n - 1] = d.scale((-1) ** n)
        d = d.derivative()
        n += 1
    return SkewLaurentSeries(out)


def apply_to_function(u: SkewLaurentSeries, f: RF | Poly | Rational) -> RF:
    """sum_{j >= 0} a_j f^(j): the action on functions (skew-Tate part only)."""
    f = _rf(f)
    derivs: list[RF] = [f]
    top = max((j for j in u.coeffs if j >= 0), default=-1)
    for _ in range(top):
        derivs.append(derivs[-1].derivative())
    out = RF.const(0)
    for j, aj in u.coeffs.items():
        if j >= 0:
            out = out + aj * derivs[j]
    return out


def transpose(u: SkewLaurentSeries) -> SkewLaurentSeries:
    """The anti-automorphism with a^T = a, D^T = -D; requires a nonnegative window."""
    if u.lo() < 0:
        raise ValueError("transpose needs a nonnegative window")
    out: dict[int, RF] = {}
    for j, aj in u.coeffs.items():
        # (a_j D^j)^T = (-1)^j D^j * a_j = (-1)^j sum_k binom(j, j-k) delta^(j-k)(a_j) D^k
        d = aj
        for k in range(j, -1, -1):
            b = zbinom(j, j - k) * (-1) ** j
            if b and not d.is_zero():
                term = d.scale(b)
                out[k] = out[k] + term if k in out else term
            d = d.derivative()
    return SkewLaurentSeries(out, u.lo_exact, u.hi_exact)


def group_transform(g: MobiusMap, u: SkewLaurentSeries) -> SkewLaurentSeries:
    """Coefficientwise Mobius action plus the expansion of g.D^n.

    g.D^[n] = sum_{i=1..n} binom(n-1, i-1) (-cx+a)^(n+i) (-c)^(n-i) / det^n D^[i],
    so g.(a_n D^n) = (g.a_n) n! sum_i (...) D^i / i!.
    """
    if u.lo() < 0:
        raise ValueError("the group acts on nonnegative windows")
    y = Poly.of(g.a, -g.c)  # -cx + a
    out: dict[int, RF] = {}

    def add(k: int, t: RF) -> None:
        if not t.is_zero():
            out[k] = out[k] + t if k in out else t

    for n, an in u.coeffs.items():
        gan = g.act_function(an)
        if n == 0:
            add(0, gan)
            continue
        for i in range(1, n + 1):
            c = (
                Fraction(math.comb(n - 1, i - 1))
                * Fraction(math.factorial(n), math.factorial(i))
                * (-g.c) ** (n - i)
                / g.det**n
            )
            add(i, gan * RF(y ** (n + i), Poly.of(1)).scale(c))
    return SkewLaurentSeries(out, u.lo_exact, u.hi_exact)


def series_norm_valuation(
    u: SkewLaurentSeries,
    s_exp: Rational,
    r_exp: Rational,
    X: Cheese,
) -> tuple[Fraction, bool]:
    """Valuation of max(sup_{j>=0} |a_j| r^j, sup_{j<0} |a_j| s^j).

    Returns (valuation, certain); certain is False when an omitted tail could
    in principle dominate the stored part (no tail bound, or bound too weak).
    """
    s_exp, r_exp = Fraction(s_exp), Fraction(r_exp)
    vals = []
    for j, aj in u.coeffs.items():
        e = r_exp if j >= 0 else s_exp
        vals.append(sup_valuation(aj, X) - j * e)
    if not vals:
        raise ValueError("norm of an empty window")
    best = min(vals)
    certain = u.lo_exact and u.hi_exact
    if not certain and u.tail is not None:
        lo, hi = u.lo(), u.hi()
        probes = []
        if not u.lo_exact:
            probes += [(u.tail(k), s_exp if k < 0 else r_exp, k) for k in range(lo - 8, lo)]
        if not u.hi_exact:
            probes += [(u.tail(k), s_exp if k < 0 else r_exp, k) for k in range(hi + 1, hi + 9)]
        certain = all(t - k * e > best for t, e, k in probes)
    return best, certain


# ---------------------------------------------------------------------------
# Level-m divided powers
# ---------------------------------------------------------------------------


def qfloor(k: int, m: int, p: int) -> int:
    return k // p**m


def binomb(k: int, kp: int, m: int, p: int) -> int:
    """q_k! / (q_k'! q_k''!) for k' + k'' = k; always a natural number."""
    if not 0 <= kp <= k:
        raise ValueError("need 0 <= k' <= k")
    qk, qa, qb = qfloor(k, m, p), qfloor(kp, m, p), qfloor(k - kp, m, p)
    num = math.factorial(qk)
    den = math.factorial(qa) * math.factorial(qb)
    assert num % den == 0
    return num // den


def binoma(k: int, kp: int, m: int, p: int) -> Fraction:
    """binom(k, k') / binomb(k, k'); a p-adic integer."""
    return Fraction(math.comb(k, kp), binomb(k, kp, m, p))


@dataclass(frozen=True)
class DividedPowerOperator:
    """Finite sum b_k D^<k> in the level-m basis D^<k> = q_k! D^k / k!."""

    level: int
    p: int
    coeffs: tuple[tuple[int, RationalFunction], ...]

    def as_dict(self) -> dict[int, RF]:
        return dict(self.coeffs)


def to_level_m(u: SkewLaurentSeries, m: int, p: int) -> DividedPowerOperator:
    """Rewrite sum a_k D^k as sum b_k D^<k>: b_k = a_k k!/q_k!."""
    if u.lo() < 0:
        raise ValueError("negative degrees have no level-m divided power")
    out = []
    for k in sorted(u.coeffs):
        c = Fraction(math.factorial(k), math.factorial(qfloor(k, m, p)))
        out.append((k, u.coeffs[k].scale(c)))
    return DividedPowerOperator(m, p, tuple(out))


def from_level_m(op: DividedPowerOperator) -> SkewLaurentSeries:
    out: dict[int, RF] = {}
    for k, bk in op.coeffs:
        c = Fraction(math.factorial(qfloor(k, op.level, op.p)), math.factorial(k))
        out[k] = bk.scale(c)
    return SkewLaurentSeries(out)


def epsilon_valuation(n: int, m: int, p: int) -> Fraction:
    """v_p of the scalar linking (D/w_m)^n to D^<n> at level m.

    For n >= 0 the scalar is n!/(w_m^n q_n!); for n < 0 it is
    w_m^{|n|} l! i! / (i p^m)! with i = ceil(|n|/p^m), l = i p^m - |n|.
    The value always lies in [-m, 0].
    """
    pm = p**m
    wv = Fraction(vp_factorial(pm, p), pm)  # valuation of the level-m radius scalar
    if n >= 0:
        return vp_factorial(n, p) - n * wv - vp_factorial(qfloor(n, m, p), p)
    nn = -n
    i = -(-nn // pm)
    ell = i * pm - nn
    return nn * wv + vp_factorial(ell, p) + vp_factorial(i, p) - vp_factorial(i * pm, p)


def dk_formula_unit_valuation(k: int, m: int, p: int) -> Fraction:
    """v_p of the scalar u with D^<k> = u * prod_j (D^<p^j>)^{c_j} (D^<p^m>)^c.

    Here c_j are the base-p digits of k below p^m and c = floor(k/p^m); the
    relation holds with u a p-adic unit, so the returned value must be 0.
    """
    lhs = Fraction(vp_factorial(qfloor(k, m, p), p) - vp_factorial(k, p))
    rhs = Fraction(0)
    t = k
    for j in range(m):
        c_j = t % p
        t //= p
        rhs += c_j * Fraction(vp_factorial(qfloor(p**j, m, p), p) - vp_factorial(p**j, p))
    c = k // p**m
    rhs += c * Fraction(vp_factorial(qfloor(p**m, m, p), p) - vp_factorial(p**m, p))
    return lhs - rhs
