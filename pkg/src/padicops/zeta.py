"""Construction and verification of the formal solution to nabla(z) = c - 1
at infinity, and the valuation blow-up of its coefficients.

Everything lives in the coordinate y = p/x, where the twisted derivation
transported from the unit w = (x^q - p^(q-1) x)^(-k) reads

    nabla(f) = -(1/p) [ y^2 f' - (qk/d) y f - (k(q-1)/d) y^q f/(1-y^(q-1)) ].

Series coefficients are exact rationals for all identity checks; the long
valuation profile reduces them to capped-precision p-adic numbers and
cross-checks the carry-combinatorics route coefficient by coefficient.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .carries import SpecialIndex, special_index, sum_estimate, SumReport
from .padics import PadicNumber, Rational, vp_rational
from .series import PSeries, QSeries, binomial_series, p_binomial_series

F = Fraction


def _check_params(p: int, q: int, k: int, d: int) -> None:
    if (q + 1) % d != 0:
        raise ValueError(f"d = {d} must divide q + 1 = {q + 1}")
    if d % p == 0:
        raise ValueError("d must be coprime to p")
    if not 1 <= k <= d:
        raise ValueError(f"k = {k} out of range 1..{d}")
    if k == d:
        raise ValueError("k = d is the excluded trivial twist")


def unit_ratio(p: int, q: int, order: int) -> tuple[QSeries, list[Fraction]]:
    """w/(h^{-1}.w) for k = 1 as an exact series, plus the polynomial f with
    ratio = 1 + p y f(y)/(1 - y^(q-1)); f must have integer coefficients.
    """
    # N = y(1-y)^q - y^q(1-y) and D = y - y^q, as series in y
    width = order + q + 2
    onemy = binomial_series(q, width)  # (1-y)^q
    N = onemy.shift(1) - (QSeries.one(width) - QSeries.of([0, 1], width)).shift(q)
    D = QSeries.of([0, 1], width) - QSeries.of([0] * q + [1], width)
    ratio = QSeries(N.coeffs[1:]) * QSeries(D.coeffs[1:]).inverse()
    ratio = ratio.truncate(order)
    # f = (N - D)/(p y^2), which must land in Z[y]
    diff = N - D
    assert diff[0] == 0 and diff[1] == 0, "ratio is not 1 mod y^2"
    fpoly = []
    for j in range(2, q + 2):
        c = diff[j] / p
        if c.denominator != 1:
            raise AssertionError(f"f coefficient {c} at y^{j - 2} is not an integer")
        fpoly.append(c)
    return ratio, fpoly


def build_cocycle_c(p: int, q: int, k: int, d: int, order: int) -> QSeries:
    """The unit c with c^d = w/(h^{-1}.w), normalised by constant term 1.

    Built as ratio^(k/d) by the binomial series; the d-th power is re-checked
    against the exact rational-function ratio.
    """
    _check_params(p, q, k, d)
    ratio, _ = unit_ratio(p, q, order)
    c = ratio.pow_fractional(F(k, d))
    assert (c**d - ratio**k).is_zero(), "c^d does not recover the unit ratio"
    assert c[0] == 1
    return c


@dataclass(frozen=True)
class JReport:
    alphas: tuple[Fraction, ...]
    residual_zero: bool


def alpha_and_j(q: int, k: int, d: int, count: int) -> JReport:
    """The integral coefficients a_m = (-1)^m binom(k/d, m) / ((q-1)m - qk/d - 1)
    and the termwise check that (y d/dy - qk/d - 1) applied to sum a_m y^((q-1)m)
    recovers (1 - y^(q-1))^(k/d).
    """
    lam = F(k, d)
    alphas = []
    b = F(1)
    ok = True
    for m in range(count):
        den = (q - 1) * m - q * lam - 1
        if den == 0:
            raise ZeroDivisionError("vanishing denominator: qk/d is an integer")
        am = b * (-1) ** m / den
        alphas.append(am)
        # identity coefficient: ((q-1)m - qk/d - 1) a_m = (-1)^m binom(k/d, m)
        if den * am != b * (-1) ** m:
            ok = False
        b *= F(lam - m, m + 1)
    return JReport(tuple(alphas), ok)


def zeta_series(p: int, q: int, k: int, d: int, order: int) -> QSeries:
    """The formal solution, assembled from its closed form:

        z = p (1-y^(q-1))^(-k/d) sum_r binom(k/d, r)(-1)^r y^((q-1)r) B_r,
        B_r = ((1-y)^(mu_r) - 1)/(mu_r y),   mu_r = 1 + qk/d - (q-1) r.
    """
    _check_params(p, q, k, d)
    lam = F(k, d)
    S = QSeries.zero(order)
    bk = F(1)  # binom(k/d, r)
    r = 0
    while (q - 1) * r < order:
        mu = 1 + q * lam - (q - 1) * r
        blen = order - (q - 1) * r
        b = F(1)  # binom(mu - 1, n)
        coeffs = []
        for n in range(blen):
            coeffs.append(b * F((-1) ** (n + 1), n + 1))
            b *= F(mu - 1 - n, n + 1)
        scaled = [c * bk * (-1) ** r for c in coeffs]
        S = S + QSeries.of([Fraction(0)] * ((q - 1) * r) + scaled, order)
        bk *= F(lam - r, r + 1)
        r += 1
    return (S * binomial_series(-lam, order, q - 1)).scale(p)


def nabla_apply(f: QSeries, p: int, q: int, k: int, d: int) -> QSeries:
    """-(1/p)[y^2 f' - (qk/d) y f - (k(q-1)/d) y^q f/(1-y^(q-1))]."""
    order = f.order
    geom = binomial_series(-1, order, q - 1)  # 1/(1 - y^(q-1))
    t1 = f.euler_derivative().shift(1)
    t2 = f.shift(1).scale(F(q * k, d))
    t3 = (f * geom).shift(q).scale(F(k * (q - 1), d))
    return (t1 - t2 - t3).scale(F(-1, p))


def zeta_by_recurrence(p: int, q: int, k: int, d: int, order: int) -> QSeries:
    """Solve nabla(z) = c - 1 term by term; the unique-solution oracle.

    With g = (1-y^(q-1))^(k/d) z the equation reads
    y (y d/dy - qk/d)(g) = -p (1-y^(q-1))^(k/d) (c - 1), so
    g_n = -p [eps (c-1)]_(n+1) / (n - qk/d), never dividing by zero.
    """
    _check_params(p, q, k, d)
    lam = F(k, d)
    c = build_cocycle_c(p, q, k, d, order + 1)
    eps = binomial_series(lam, order + 1, q - 1)
    rhs = (eps * (c - QSeries.one(order + 1))).scale(-p)
    g = []
    for n in range(order):
        den = n - q * lam
        assert den != 0
        g.append(rhs[n + 1] / den)
    return QSeries(tuple(g)) * binomial_series(-lam, order, q - 1)


@dataclass(frozen=True)
class OdeReport:
    order: int
    residual_is_zero: bool
    recurrence_matches: bool
    max_nonzero_index: int | None


def ode_residual(p: int, q: int, k: int, d: int, order: int) -> OdeReport:
    """nabla(z) - (c - 1) must vanish identically on all retained coefficients,
    and the closed form must agree with the term-by-term solution."""
    z = zeta_series(p, q, k, d, order)
    c = build_cocycle_c(p, q, k, d, order)
    resid = nabla_apply(z, p, q, k, d) - (c - QSeries.one(order))
    bad = [j for j in range(order) if resid[j] != 0]
    z2 = zeta_by_recurrence(p, q, k, d, order)
    return OdeReport(order, not bad, (z - z2).is_zero(), max(bad) if bad else None)


def eta_apply(f: QSeries) -> QSeries:
    """The substitution y -> y/(1 - y) extending the translation action."""
    inner = QSeries(tuple(Fraction(1) if j >= 1 else Fraction(0) for j in range(f.order)))
    return f.compose(inner)


def eta_commutes_with_euler(order: int, samples: list[QSeries]) -> bool:
    """eta commutes with y^2 d/dy on K[[y]] (checked on retained coefficients).

    y^2 d/dy drops the top coefficient, so the comparison stops one short.
    """
    for f in samples:
        lhs = eta_apply(f.euler_derivative().shift(1))
        rhs = eta_apply(f).euler_derivative().shift(1)
        if not (lhs - rhs).truncate(order - 1).is_zero():
            return False
    return True


def convergence_margin(z: QSeries, p: int) -> Fraction:
    """min_j (v_p(z_j) + j): nonnegative means the partial sums converge on
    the disc of radius |p| with bounded sup norms."""
    best = None
    for j, c in enumerate(z.coeffs):
        if c != 0:
            v = Fraction(vp_rational(c, p)) + j
            best = v if best is None else min(best, v)
    assert best is not None
    return best


# ---------------------------------------------------------------------------
# The function (xi beta(h))_0 and its differential equation
# ---------------------------------------------------------------------------


def h_sequence_y(p: int, q: int, k: int, d: int, depth: int, order: int) -> list[QSeries]:
    """Twist coefficients h[0..depth] of (w, d) in the y-coordinate.

    The transported derivation is D = -(1/p) y^2 d/dy and
    h[1] = -(1/d) D(w)/w = (1/(pd)) [qk y + k(q-1) y^q/(1-y^(q-1))];
    each h[n] is a power series of order >= n.
    """
    _check_params(p, q, k, d)
    geom = binomial_series(-1, order, q - 1)
    h1 = (QSeries.of([0, q * k], order) + geom.shift(q).scale(k * (q - 1))).scale(F(1, p * d))
    hs = [QSeries.one(order), h1]
    for ell in range(1, depth):
        dh = hs[ell].euler_derivative().shift(1).scale(F(-1, p))
        hs.append((dh + h1 * hs[ell]).scale(F(1, ell + 1)))
    return hs[: depth + 1]


@dataclass(frozen=True)
class XvZeroReport:
    order: int
    leading_term: Fraction  # the n = 1 contribution, which must be p
    residual_is_zero: bool
    max_nonzero_index: int | None


def xvzero_series(p: int, q: int, k: int, d: int, order: int) -> XvZeroReport:
    """Build (xi beta(h))_0 = -sum_{n>=1} (1/n)(-p)^n h[n-1] and check that
    nabla of it equals 1 - c exactly, coefficient by coefficient.

    h[n] has y-order >= n, so the sum truncated at n = order is y-adically
    exact to the working order.
    """
    hs = h_sequence_y(p, q, k, d, order, order)
    f = QSeries.zero(order)
    pw = 1
    for n in range(1, order + 1):
        pw *= -p
        f = f + hs[n - 1].scale(F(-pw, n))
    c = build_cocycle_c(p, q, k, d, order)
    resid = nabla_apply(f, p, q, k, d) - (QSeries.one(order) - c)
    bad = [j for j in range(order) if resid[j] != 0]
    return XvZeroReport(order, f[0], not bad, max(bad) if bad else None)


# ---------------------------------------------------------------------------
# Valuation profile: series route vs carry-combinatorics route
# ---------------------------------------------------------------------------


def phi_series_coefficient(p: int, q: int, k: int, d: int, n_target: int, prec: int) -> PadicNumber:
    """Coefficient of s^n_target in (1/p)(1-s)^(k/d) Phi(zeta), s = y^(q-1),
    via capped-precision series assembly (Phi projects onto powers of s)."""
    _check_params(p, q, k, d)
    lam = F(k, d)
    order = (q - 1) * n_target + 1
    S = PSeries.zero(p, prec, order)
    bk = PadicNumber.from_rational(1, p, prec)
    for r in range(n_target + 1):
        mu = 1 + q * lam - (q - 1) * r
        blen = order - (q - 1) * r
        b = PadicNumber.from_rational(1, p, prec)
        coeffs = []
        for n in range(blen):
            coeffs.append(b.mul_rational(F((-1) ** (n + 1), n + 1), prec))
            b = b.mul_rational(F(mu - 1 - n, n + 1), prec)
        Br = PSeries(p, prec, coeffs)
        S = S.add_shifted(Br, (q - 1) * r, bk if r % 2 == 0 else -bk)
        bk = bk.mul_rational(F(lam - r, r + 1), prec)
    zeta = S.mul(p_binomial_series(-lam, p, prec, order, q - 1))
    phi = zeta.stride_part(q - 1)
    final = phi.mul(p_binomial_series(lam, p, prec, n_target + 1, 1))
    return final[n_target]


@dataclass(frozen=True)
class ProfileRow:
    idx: SpecialIndex
    report: SumReport
    series_value: PadicNumber | None
    agreement_digits: int | None
    cross_checked: bool


SERIES_ROUTE_CAP = 1200  # largest (q-1) n_N for which the series route runs


def phi_valuation_profile(
    p: int,
    f: int,
    k: int,
    d: int,
    n_list: list[int],
    prec: int = 60,
    series_prec: int | None = None,
) -> list[ProfileRow]:
    """For each N: the valuation of the coefficient sum via the carry route,
    plus (when the degree is desk-scale) the independent series assembly of
    the same coefficient; both values must agree to at least prec/2 digits.

    The series route computes the coefficient of s^n in (1/p)(1-s)^(k/d)
    Phi(zeta), which equals (-1)^(n+1) times the carry-route sum.
    """
    q = p**f
    if (q + 1) % d != 0 or k * (q + 1) % d != 0:
        raise ValueError("d must divide q + 1")
    k_norm = k * (q + 1) // d
    if not 1 <= k_norm <= q:
        raise ValueError(f"normalised k = {k_norm} out of range 1..{q} (k = d excluded)")
    rows = []
    for N in n_list:
        idx = special_index(p, f, k_norm, N)
        rep = sum_estimate(idx, prec)
        series_value = None
        digits = None
        crossed = False
        if (q - 1) * idx.n <= SERIES_ROUTE_CAP:
            sp = series_prec or 2 * prec
            coeff = phi_series_coefficient(p, q, k_norm, q + 1, idx.n, sp)
            # the signed carry sum is -[s^n] (1/p)(1-s)^(k/d) Phi(zeta)
            diff = coeff + rep.total
            vd = diff.absprec if diff.is_zero() else diff.val
            digits = int(vd - rep.total.val)
            crossed = digits >= prec // 2
            if not crossed:
                raise AssertionError(
                    f"series and carry routes disagree at N={N}: only {digits} digits"
                )
            series_value = coeff
        rows.append(ProfileRow(idx, rep, series_value, digits, crossed))
    return rows
