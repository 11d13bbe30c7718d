"""Twisting automorphisms of the operator algebra by formal d-th roots.

The twist by the pair (u, d) is conjugation by a d-th root of the unit u; it
never materialises the root.  Its full action is encoded by the coefficient
functions h[0], h[1], ... obtained from the first-order recurrence

    (l+1) h[l+1] = h[l]' + h[1] h[l],     h[0] = 1,  h[1] = -(1/d) u'/u,

which stay inside Q(x).  The module builds the twisted derivation, its
two-sided Laurent inverse, the substitution operators beta(g), and the unit
cocycles coupling the two.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .cheeses import gauss_valuation
from .padics import varpi_valuation, vp_factorial, vp_rational
from .ratfun import MobiusMap, RationalFunction, dlog
from .skew import SkewLaurentSeries, star

RF = RationalFunction


@dataclass(frozen=True)
class TwistData:
    """The unit u, the root order d, and the action coefficients h[0..N]."""

    u: RF
    d: int
    h: tuple[RF, ...]

    @property
    def depth(self) -> int:
        return len(self.h) - 1


def h_sequence(u: RF, d: int, depth: int, p: int | None = None) -> TwistData:
    """Coefficients h[0..depth] of the twist by (u, d); requires p coprime to d."""
    if u.is_zero():
        raise ValueError("u must be a unit")
    if p is not None and d % p == 0:
        raise ValueError(f"d = {d} is divisible by p = {p}")
    h1 = dlog(u).scale(Fraction(-1, d))
    h: list[RF] = [RF.const(1), h1]
    for ell in range(1, depth):
        nxt = (h[ell].derivative() + h1 * h[ell]).scale(Fraction(1, ell + 1))
        h.append(nxt)
    return TwistData(u, d, tuple(h[: depth + 1]))


def h_closed_form_monomial(alpha, k: int, d: int, n: int) -> RF:
    """h[n] for u = (x - alpha)^k: binom(-k/d, n) (x - alpha)^(-n)."""
    from .padics import binom_rational
    from .ratfun import Poly

    c = binom_rational(Fraction(-k, d), n)
    return RF(Poly.of(1), Poly.x_minus(alpha) ** n).scale(c)


def theta_apply(tw: TwistData, q: SkewLaurentSeries) -> SkewLaurentSeries:
    """Apply the twist to a nonnegative-window operator, coefficient-linearly.

    theta(D^n) = n! sum_a h[n-a] D^a / a!, so the D^a coefficient of the image
    is sum_n a_n (n!/a!) h[n-a].
    """
    if q.lo() < 0:
        raise ValueError("the twist acts on nonnegative windows here")
    if q.hi() > tw.depth:
        raise ValueError(f"h-sequence depth {tw.depth} < operator order {q.hi()}")
    out: dict[int, RF] = {}
    for n, an in q.coeffs.items():
        for a in range(n + 1):
            c = Fraction(math.factorial(n), math.factorial(a))
            term = an * tw.h[n - a].scale(c)
            if not term.is_zero():
                out[a] = out[a] + term if a in out else term
    return SkewLaurentSeries(out, q.lo_exact, q.hi_exact)


def theta_partial(tw: TwistData) -> SkewLaurentSeries:
    """The twisted derivation theta(D) = D + h[1]."""
    return SkewLaurentSeries.of({1: RF.const(1), 0: tw.h[1]})


def xi_build(tw: TwistData, k_neg: int, p: int) -> SkewLaurentSeries:
    """Truncation of the two-sided inverse of theta(D):

        xi = sum_{n>=1} (-1)^(n-1) (n-1)! h[n-1] D^(-n),

    cut at D^(-k_neg).  Omitted degree -n carries valuation at least
    v_p((n-1)!) on the reference unit circle (h[n] has norm <= 1 there).
    """
    if k_neg < 1:
        raise ValueError("k_neg must be >= 1")
    if tw.depth < k_neg - 1:
        raise ValueError("h-sequence too shallow for the requested window")
    coeffs = {
        -n: tw.h[n - 1].scale((-1) ** (n - 1) * math.factorial(n - 1))
        for n in range(1, k_neg + 1)
    }

    def tail(j: int) -> Fraction:
        return Fraction(vp_factorial(-j - 1, p)) if j < -k_neg else Fraction(0)

    return SkewLaurentSeries(coeffs, lo_exact=False, tail=tail)


@dataclass(frozen=True)
class ResidualReport:
    """Residual coefficients of a truncated identity, with their valuations."""

    residuals: tuple[tuple[int, Fraction], ...]  # degree -> reference valuation
    exact_zero_range: tuple[int, int]  # degrees checked to vanish identically
    threshold: Fraction
    ok: bool


def micro_inverse_residual(
    u: RF, d: int, k_neg: int, p: int, depth_slack: int = 6
) -> tuple[ResidualReport, ResidualReport]:
    """Residuals of xi * theta(D) - 1 and theta(D) * xi - 1 at window k_neg.

    Inside the window the truncated products must vanish identically (that is
    the content of the h-recurrence); at and below -k_neg the residuals are
    tail effects whose reference valuations must clear v_p(k_neg!).
    """
    tw = h_sequence(u, d, k_neg + depth_slack, p)
    xi = xi_build(tw, k_neg, p)
    th = theta_partial(tw)
    lo = -k_neg - depth_slack
    threshold = Fraction(vp_factorial(k_neg, p))
    reports = []
    for prod in (star(xi, th, lo=lo), star(th, xi, lo=lo)):
        resid = prod - SkewLaurentSeries.one()
        bad: list[tuple[int, Fraction]] = []
        ok = True
        for k in range(-k_neg + 1, 2):
            if not resid[k].is_zero():
                ok = False
                bad.append((k, gauss_valuation(resid[k], p)))
        vals = []
        for k in range(lo, -k_neg + 1):
            c = resid[k]
            if not c.is_zero():
                v = gauss_valuation(c, p)
                vals.append((k, v))
                if v < threshold:
                    ok = False
        reports.append(
            ResidualReport(tuple(bad + vals), (-k_neg + 1, 1), threshold, ok)
        )
    return reports[0], reports[1]


# ---------------------------------------------------------------------------
# Substitution operators beta(g) and cocycles
# ---------------------------------------------------------------------------


def displacement(g: MobiusMap) -> RF:
    """g.x - x as a rational function."""
    return g.act_x() - RF.x()


def in_group_of_radius(g: MobiusMap, p: int, r_exp: Fraction | int) -> bool:
    """Membership test for the radius-r substitution group.

    Entries must be p-integral with unit determinant and lower-left entry of
    positive valuation, and |b|, |c|, |a - d| < varpi/r translates to
    v > 1/(p-1) + r_exp for each of the three quantities.
    """
    ents = (g.a, g.b, g.c, g.d)
    if any(vp_rational(e, p) < 0 for e in ents if e != 0):
        return False
    if vp_rational(g.det, p) != 0:
        return False
    if g.c != 0 and vp_rational(g.c, p) <= 0:
        return False
    cut = varpi_valuation(p) + Fraction(r_exp)
    for e in (g.b, g.c, g.a - g.d):
        if e != 0 and vp_rational(e, p) <= cut:
            return False
    return True


def beta_build(g: MobiusMap, depth: int, p: int, r_exp: Fraction | int | None = None) -> SkewLaurentSeries:
    """Truncation of beta(g) = sum_n (g.x - x)^n D^[n] at order `depth`.

    If r_exp is given, membership of g in the radius group is enforced first.
    Omitted order n carries reference valuation at least
    n * v(g.x - x) - v_p(n!).
    """
    if r_exp is not None and not in_group_of_radius(g, p, r_exp):
        raise ValueError(f"{g} is not in the substitution group at radius exponent {r_exp}")
    w = displacement(g)
    if w.is_zero():
        return SkewLaurentSeries.one()
    vw = gauss_valuation(w, p)
    coeffs: dict[int, RF] = {0: RF.const(1)}
    wn = RF.const(1)
    for n in range(1, depth + 1):
        wn = wn * w
        coeffs[n] = wn.scale(Fraction(1, math.factorial(n)))

    def tail(j: int) -> Fraction:
        return j * vw - vp_factorial(j, p) if j > depth else Fraction(10**9)

    return SkewLaurentSeries(coeffs, hi_exact=False, tail=tail)


def beta_tail_valuation(g: MobiusMap, depth: int, p: int) -> Fraction:
    """Lower bound for the reference valuation of every omitted beta term."""
    w = displacement(g)
    if w.is_zero():
        return Fraction(10**9)
    vw = gauss_valuation(w, p)
    return min((n * vw - vp_factorial(n, p)) for n in range(depth + 1, depth + 40))


@dataclass(frozen=True)
class SigmaRhoReport:
    monomials_checked: int
    substitution_exact: bool
    homomorphism_ok: bool

    @property
    def ok(self) -> bool:
        return self.substitution_exact and self.homomorphism_ok


def sigma_rho_check(g: MobiusMap, m_max: int, depth: int, p: int, partner: MobiusMap | None = None) -> SigmaRhoReport:
    """The truncated substitution operator applied to x^m must reproduce
    (g.x)^m exactly for m <= depth, and beta(g h) must match beta(g)*beta(h)
    within the tail budget.
    """
    from .skew import apply_to_function as _apply
    from .skew import star as _star

    x = RF.x()
    b = beta_build(g, max(m_max, depth), p)
    subst_ok = all(_apply(b, x**m) == g.act_x() ** m for m in range(m_max + 1))
    h = partner if partner is not None else g
    tau = min(beta_tail_valuation(g, depth, p), beta_tail_valuation(h, depth, p))
    prod = _star(beta_build(g, depth, p), beta_build(h, depth, p))
    bgh = beta_build(g * h, depth, p)
    hom_ok = True
    for k in range(depth + 1):
        diff = prod[k] - bgh[k]
        if not diff.is_zero() and gauss_valuation(diff, p) < tau:
            hom_ok = False
    return SigmaRhoReport(m_max + 1, subst_ok, hom_ok)


def cocycle(u: RF, d: int, g: MobiusMap, depth: int, p: int) -> RF:
    """Partial sum of c_{u,d}(g) = sum_m (g.x - x)^m h[m]; a rational function.

    The omitted tail has reference valuation > depth * v(g.x - x), so the
    partial sum determines the unit to that precision.
    """
    tw = h_sequence(u, d, depth, p)
    return cocycle_from_tw(tw, g, depth)


def cocycle_from_tw(tw: TwistData, g: MobiusMap, depth: int) -> RF:
    w = displacement(g)
    out = RF.const(0)
    wm = RF.const(1)
    for m in range(depth + 1):
        out = out + wm * tw.h[m]
        wm = wm * w
    return out
