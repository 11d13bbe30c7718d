"""Carry functions, Kummer valuations of binomial coefficients, and the
special index sequence that makes the zeta coefficient sum blow up.

Everything here is integer/valuation combinatorics except `sum_estimate`,
which evaluates the full coefficient sum with capped-precision p-adics.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .padics import (
    INF,
    DEFAULT_PREC,
    PadicNumber,
    PrecisionExhausted,
    Rational,
    is_p_integral,
    vp_int,
    vp_rational,
)


def _digit_stream(lam: Fraction, p: int):
    """Infinite base-p digit generator of a rational p-adic integer."""
    num, den = lam.numerator, lam.denominator
    inv_den = pow(den, -1, p)
    while True:
        d = num * inv_den % p
        yield d
        num = (num - d * den) // p


@dataclass(frozen=True)
class CarryProfile:
    """Carries occurring in the base-p addition lam + n.

    gammas[i] is the i-th carry bit; L is the position after which no carry
    occurs (INF exactly when lam is a negative integer with n >= -lam);
    noncarries[j] counts zero bits among the first j.
    """

    lam: Fraction
    n: int
    p: int
    gammas: tuple[int, ...]  # every resolved carry bit (at least the first m)
    L: int | float
    noncarries: tuple[int, ...]  # N_j for j = 0..m

    def carries_total(self) -> int | float:
        """Total number of carries; INF when carrying never stops."""
        if self.L == INF:
            return INF
        assert len(self.gammas) >= self.L
        return sum(self.gammas)


def carry_profile(lam: Rational, n: int, m: int, p: int) -> CarryProfile:
    """Carry bits gamma_0..gamma_{m-1} of lam + n, plus L and non-carry counts.

    The profile is extended beyond m if needed so that L is always resolved:
    past the digits of n a carry persists only while the current digit of lam
    is p-1, and lam is rational, so this terminates unless lam is a negative
    integer with n >= -lam.
    """
    lam = Fraction(lam)
    if not is_p_integral(lam, p):
        raise ValueError(f"{lam} is not a p-adic integer")
    if n < 0:
        raise ValueError("n must be a natural number")
    infinite = lam.denominator == 1 and lam < 0 and n >= -lam
    n_digits = []
    t = n
    while t:
        n_digits.append(t % p)
        t //= p
    gammas: list[int] = []
    carry = 0
    stream = _digit_stream(lam, p)
    i = 0
    # Resolve at least m bits, then continue until the carrying provably
    # stops: past the digits of n, a zero carry bit can never restart.
    while i < m or (not infinite and (carry == 1 or i < len(n_digits))):
        li = next(stream)
        ni = n_digits[i] if i < len(n_digits) else 0
        carry = 1 if li + ni + carry > p - 1 else 0
        gammas.append(carry)
        i += 1
    if infinite:
        L: int | float = INF
    else:
        L = 0
        for j, g in enumerate(gammas):
            if g == 1:
                L = j + 1
    nc = [0]
    for g in gammas[:m]:
        nc.append(nc[-1] + (1 - g))
    # keep every resolved bit (>= m of them) so total carries can be counted
    return CarryProfile(lam, n, p, tuple(gammas), L, tuple(nc))


def vp_binom_kummer(lam: Rational, n: int, p: int) -> int | float:
    """v_p(binom(lam + n, n)) as the total number of carries in lam + n.

    Returns INF exactly when the carrying never stops, which happens iff
    binom(lam + n, n) = 0.
    """
    prof = carry_profile(lam, n, 1, p)
    return prof.carries_total()


def vp_binom_lower(lam: Rational, n: int, p: int) -> int | float:
    """v_p(binom(lam, n)) for p-integral rational lam, via carries of (lam-n) + n."""
    return vp_binom_kummer(Fraction(lam) - n, n, p)


# ---------------------------------------------------------------------------
# The special index sequence n_N, M_n, s_n
# ---------------------------------------------------------------------------


def required_parity(k: int, q: int) -> int:
    """0 if N must be even, 1 if N must be odd, for 1 <= k <= q."""
    if k == q and q > 2:
        return 1
    return 0


@dataclass(frozen=True)
class SpecialIndex:
    """Index data (n, M, s) for the dominant-term analysis at level N.

    n is the smallest positive integer congruent to qk/(q^2-1) mod q^N;
    M is maximal with 1 + q + ... + q^M <= n; s = n - (1 + ... + q^M).
    """

    p: int
    f: int
    q: int
    k: int
    d: int
    N: int
    n: int
    M: int
    s: int

    @property
    def lam(self) -> Fraction:
        return Fraction(self.k, self.q + 1)

    @property
    def alpha(self) -> Fraction:
        """Top-minus-bottom entry of the second binomial; 0 mod q^N."""
        return Fraction(self.q * self.k, self.q + 1) - self.n * (self.q - 1)


def expected_M(k: int, q: int, N: int) -> int:
    """Case table for M in terms of N."""
    if 1 <= k <= q - 2 or (k == q and q > 2):
        return N - 1
    if (k == q - 1 and q > 2) or (k == q == 2):
        return N - 2
    if k == 1 and q == 2:
        return N - 3
    raise ValueError(f"no table entry for k={k}, q={q}")


def special_index(p: int, f: int, k: int, N: int) -> SpecialIndex:
    q = p**f
    if not 1 <= k <= q:
        raise ValueError(f"k={k} out of range 1..{q}")
    if N < 6:
        raise ValueError("N must be at least 6")
    if N % 2 != required_parity(k, q):
        want = "odd" if required_parity(k, q) else "even"
        raise ValueError(f"N={N} has wrong parity for k={k}, q={q}: N must be {want}")
    mod = q**N
    n = q * k * pow(q * q - 1, -1, mod) % mod
    if n == 0:
        n = mod
    M, tower = 0, 1 + q
    while tower <= n:
        M += 1
        tower += q ** (M + 1)
    s = n - (tower - q ** (M + 1))
    assert 0 <= s < q ** (M + 1)
    got = expected_M(k, q, N)
    if M != got:
        raise AssertionError(f"M={M} disagrees with the case table value {got}")
    return SpecialIndex(p, f, q, k, q + 1, N, n, M, s)


# ---------------------------------------------------------------------------
# q-adic digit patterns and the no-carry-in-last-spot check
# ---------------------------------------------------------------------------


def q_digits_of_int(n: int, q: int, count: int) -> tuple[int, ...]:
    out = []
    for _ in range(count):
        out.append(n % q)
        n //= q
    return tuple(out)


def q_digits_mod(lam: Fraction, q: int, count: int) -> tuple[int, ...]:
    """Base-q digits of (lam mod q^count) for a q-integral rational."""
    mod = q**count
    r = lam.numerator * pow(lam.denominator, -1, mod) % mod
    return q_digits_of_int(r, q, count)


def _pattern_case(k: int, q: int) -> str:
    if q == 2:
        return "c" if k == 1 else "d"
    if 1 <= k <= q - 2:
        return "a"
    if k == q - 1:
        return "b"
    return "e"


def expected_digit_patterns(k: int, q: int, M: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Expected base-q digits of s and of (k/(q+1) - s) mod q^(M+1).

    The expansions are recurrent with period 2 after a short preamble; the
    case split follows the same table as expected_M.
    """
    case = _pattern_case(k, q)
    m1 = M + 1
    if case == "a":  # 1 <= k <= q-2, M odd
        s = [q - 1] + [(q - k - 2) if i % 2 == 1 else (q - 2) for i in range(1, m1)]
        ls = [(k + 1) if i % 2 == 0 else 1 for i in range(m1)]
    elif case == "b":  # k = q-1, q > 2, M even
        s = [q - 1] + [(q - 1) if i % 2 == 1 else (q - 3) for i in range(1, m1)]
        ls = [0 if i % 2 == 0 else 2 for i in range(m1)]
    elif case == "c":  # k = 1, q = 2, M odd
        s = [1, 1] + [1 if i % 2 == 0 else 0 for i in range(2, m1)]
        ls = [0, 0] + [1 if i % 2 == 0 else 0 for i in range(2, m1)]
    elif case == "d":  # k = q = 2, M even
        s = [1, 0, 1] + [1 if i % 2 == 1 else 0 for i in range(3, m1)]
        ls = [1, 0, 0] + [1 if i % 2 == 1 else 0 for i in range(3, m1)]
    else:  # case "e": k = q > 2, M even
        s = [q - 1] + [(q - 2) if i % 2 == 1 else (q - 3) for i in range(1, m1)]
        ls = [1 if i % 2 == 0 else 2 for i in range(m1)]
    return tuple(s), tuple(ls)


@dataclass(frozen=True)
class QExpReport:
    idx: SpecialIndex
    case: str
    s_digits: tuple[int, ...]
    lam_minus_s_digits: tuple[int, ...]
    s_expected: tuple[int, ...]
    lam_minus_s_expected: tuple[int, ...]
    L_last: int | float
    carry_bound: int
    second_val: int | float
    ok: bool


def qexp_check(idx: SpecialIndex) -> QExpReport:
    """Match the computed base-q digits of s and lam - s against the case
    patterns, and confirm the carrying in s + (lam - s) stops before position
    (M+1)f; also checks that the companion binomial has valuation zero at r=s.
    """
    q, M, f = idx.q, idx.M, idx.f
    s_digits = q_digits_of_int(idx.s, q, M + 1)
    lam_minus_s = idx.lam - idx.s
    ls_digits = q_digits_mod(lam_minus_s, q, M + 1)
    s_exp, ls_exp = expected_digit_patterns(idx.k, q, M)
    bound = (M + 1) * f
    prof = carry_profile(lam_minus_s, idx.s, bound, idx.p)
    sv = vp_binom_kummer(idx.alpha, (idx.q - 1) * (idx.n - idx.s), idx.p)
    ok = (
        s_digits == s_exp
        and ls_digits == ls_exp
        and prof.L < bound
        and prof.gammas[bound - 1] == 0
        and sv == 0
    )
    return QExpReport(
        idx, _pattern_case(idx.k, q), s_digits, ls_digits, s_exp, ls_exp,
        prof.L, bound, sv, ok,
    )


# ---------------------------------------------------------------------------
# Term valuations and the dominant-term sum
# ---------------------------------------------------------------------------


def denom_valuation(n: int, r: int, q: int, p: int) -> int | float:
    """v_p((n-r)(q-1) + 1) of the summand denominator."""
    if not 0 <= r <= n:
        raise ValueError("need 0 <= r <= n")
    return vp_int((n - r) * (q - 1) + 1, p)


def term_valuation(idx: SpecialIndex, r: int) -> int | float:
    """Valuation of the r-th summand, via Kummer valuations of both binomials."""
    v1 = vp_binom_lower(idx.lam, r, idx.p)
    v2 = vp_binom_kummer(idx.alpha, (idx.q - 1) * (idx.n - r), idx.p)
    return v1 + v2 - denom_valuation(idx.n, r, idx.q, idx.p)


def dominant_term_valuation(idx: SpecialIndex) -> int:
    """Valuation of the r = s summand: v_p(binom(lam, s)) - (M+1)f."""
    v = vp_binom_lower(idx.lam, idx.s, idx.p)
    assert v != INF
    return int(v) - (idx.M + 1) * idx.f


def argmin_term_valuation(idx: SpecialIndex) -> tuple[int, int]:
    """Scan all 0 <= r <= n; return (argmin, min valuation).

    A tie for the minimum is a hard failure: the dominant term is strictly
    unique by construction of the special index.
    """
    best_r, best_v = idx.s, dominant_term_valuation(idx)
    for r in range(idx.n + 1):
        if r == idx.s:
            continue
        v = term_valuation(idx, r)
        if v < best_v:
            best_r, best_v = r, int(v)
        elif v == best_v:
            raise AssertionError(f"valuation tie at r={r} and r={best_r}")
    return best_r, best_v


@dataclass(frozen=True)
class SumReport:
    idx: SpecialIndex
    prec: int
    v_sum: Fraction
    v_dominant: Fraction
    bound: Fraction  # (3 - N)/2
    total: PadicNumber

    @property
    def ok(self) -> bool:
        return self.v_sum == self.v_dominant and self.v_sum <= self.bound


MAX_N_FOR_Q = {2: 12, 3: 10}  # desk-scale caps; larger N rejected


def _check_scale(idx: SpecialIndex) -> None:
    cap = MAX_N_FOR_Q.get(idx.q, 8)
    if idx.N > cap:
        raise ValueError(
            f"N={idx.N} exceeds the desk-scale cap {cap} for q={idx.q} "
            f"(the sum has n={idx.n} terms; expect roughly {idx.n // 3000 + 1}s per extra run)"
        )


def sum_estimate(
    idx: SpecialIndex,
    prec: int = DEFAULT_PREC,
    progress: "callable | None" = None,
) -> SumReport:
    """Evaluate the coefficient sum

        sum_r (-1)^(r + (q-1)(n-r)) binom(lam, r) S_{n,r} / ((n-r)(q-1)+1)

    in capped p-adics.  The sign factor makes the total exactly the s^n
    coefficient of the projected solution series (up to one global sign); it
    is invisible to every valuation statement since the dominant term is
    unique.  Both binomials are updated incrementally (O(n*q)
    multiplications); the sum's valuation must equal the r = s term's
    valuation, which is computed independently from carry counts.
    """
    _check_scale(idx)
    p, q, n = idx.p, idx.q, idx.n
    lam, alpha = idx.lam, idx.alpha
    c = q - 1

    b1 = PadicNumber.from_rational(1, p, prec)  # binom(lam, r)
    # S_{n,0} = binom(alpha + cn, cn) = prod_{i=1..cn} (alpha + i)/i
    b2 = PadicNumber.from_rational(1, p, prec)
    for i in range(1, c * n + 1):
        b2 = b2.mul_rational(Fraction(alpha + i, i), prec)

    total = PadicNumber.zero(p, 10**9)
    for r in range(n + 1):
        if progress is not None and r % 8192 == 0:
            progress(r, n)
        den = (n - r) * c + 1
        sign = (-1) ** (r + c * (n - r))
        term = (b1 * b2).mul_rational(Fraction(sign, den), prec)
        total = total + term
        if r < n:
            b1 = b1.mul_rational(Fraction(lam - r, r + 1), prec)
            # binom(a-c, b-c)/binom(a, b) = prod_{j=b-c+1..b} j/(alpha+j)
            b = c * (n - r)
            for j in range(b - c + 1, b + 1):
                b2 = b2.mul_rational(Fraction(j, alpha + j), prec)

    if total.is_zero():
        raise PrecisionExhausted(
            f"sum vanishes mod p^{total.absprec}; retry with prec about {2 * prec}"
        )
    v_dom = dominant_term_valuation(idx)
    return SumReport(
        idx, prec, Fraction(total.val), Fraction(v_dom), Fraction(3 - idx.N, 2), total
    )
