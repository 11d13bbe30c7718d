import math
import random
from fractions import Fraction as F

import pytest

from padicops.cheeses import gauss_valuation
from padicops.padics import vp_factorial
from padicops.ratfun import MobiusMap, Poly, RationalFunction, dlog, relator
from padicops.skew import SkewLaurentSeries, apply_to_function, star
from padicops.twists import (
    beta_build,
    beta_tail_valuation,
    cocycle,
    cocycle_from_tw,
    displacement,
    h_closed_form_monomial,
    h_sequence,
    in_group_of_radius,
    micro_inverse_residual,
    theta_apply,
    theta_partial,
    xi_build,
)

S = SkewLaurentSeries
RF = RationalFunction
x = RF.x()


class TestHSequence:
    def test_h1_is_scaled_dlog(self):
        tw = h_sequence(x, 2, 6, 5)
        assert tw.h[1] == RF.from_factors(F(-1, 2), {0: -1})
        assert tw.h[0] == RF.const(1)

    def test_trivial_unit(self):
        tw = h_sequence(RF.const(1), 3, 5)
        assert all(h.is_zero() for h in tw.h[1:])

    def test_monomial_closed_form(self):
        for alpha, k, d in [(2, 1, 2), (0, 2, 3), (-1, 3, 4)]:
            tw = h_sequence(RF.from_factors(1, {alpha: k}), d, 8)
            for n in range(9):
                assert tw.h[n] == h_closed_form_monomial(alpha, k, d, n)

    def test_p_dividing_d_rejected(self):
        with pytest.raises(ValueError):
            h_sequence(x, 6, 4, 3)

    def test_convolution_recurrence(self):
        # the alternative recurrence (l+1) h[l+1] = sum h[n] D^[l-n](h[1])
        u = RF.from_factors(F(2), {0: 2, 1: -1})
        tw = h_sequence(u, 3, 31)
        for ell in range(30):
            rhs = RF.const(0)
            for n in range(ell + 1):
                dh = tw.h[1]
                for _ in range(ell - n):
                    dh = dh.derivative()
                rhs = rhs + tw.h[n] * dh.scale(F(1, math.factorial(ell - n)))
            assert tw.h[ell + 1].scale(ell + 1) == rhs


class TestTheta:
    def test_on_partial(self):
        tw = h_sequence(x, 2, 3)
        assert theta_partial(tw) == S.of({1: RF.const(1), 0: tw.h[1]})

    def test_identity_twist(self):
        tw = h_sequence(RF.const(5), 3, 6)
        q = S.of({2: Poly.of(1, 1), 0: Poly.of(3)})
        assert theta_apply(tw, q) == q

    def test_multiplicativity(self):
        u1 = RF.from_factors(1, {0: 1})
        u2 = RF.from_factors(1, {1: 2})
        tw1, tw2 = h_sequence(u1, 5, 12), h_sequence(u2, 5, 12)
        tw12 = h_sequence(u1 * u2, 5, 12)
        for n in range(11):
            dn = S.of({n: F(1, math.factorial(n))})
            assert theta_apply(tw12, dn) == theta_apply(tw1, theta_apply(tw2, dn))

    def test_depth_guard(self):
        tw = h_sequence(x, 2, 3)
        with pytest.raises(ValueError):
            theta_apply(tw, S.partial(5))

    def test_symbol_action_on_root_generator(self):
        # P acting on the d-th root generator of (x-a)^k multiplies it by
        # sum binom(k/d, n) n! P_n (x-a)^(-n)
        a, k, d = F(1), 2, 3
        u = RF.from_factors(1, {a: k})
        tw_inv = h_sequence(u.inverse(), d, 12)
        rng = random.Random(17)
        from padicops.padics import binom_rational

        for _ in range(20):
            P = {n: Poly.of(*[rng.randint(-3, 3) for _ in range(2)]) for n in range(rng.randint(1, 6))}
            Pop = S.of(P)
            got = theta_apply(tw_inv, Pop)[0]
            want = RF.const(0)
            for n, Pn in P.items():
                c = binom_rational(F(k, d), n) * math.factorial(n)
                want = want + RF(Pn) * RF(Poly.of(1), {a: n}).scale(c)
            assert got == want

    def test_operator_recursion_for_relator_products(self):
        # Q * ((x-a) D - k/d) has coefficients (n - k/d) Q_n + (x-a) Q_{n-1}
        a, k, d = F(2), 3, 4
        R = S.of({1: Poly.x_minus(a), 0: Poly.of(F(-k, d))})
        rng = random.Random(23)
        for _ in range(20):
            Q = {n: Poly.of(*[rng.randint(-3, 3) for _ in range(3)]) for n in range(rng.randint(1, 6))}
            Qop = S.of(Q)
            got = star(Qop, R)
            want: dict = {}
            for n in range(max(Q) + 2):
                qn = RF(Q.get(n, Poly(())))
                qn1 = RF(Q.get(n - 1, Poly(())))
                val = qn.scale(n - F(k, d)) + RF(Poly.x_minus(a)) * qn1
                if not val.is_zero():
                    want[n] = val
            assert got == S(want)

    def test_relator_factorisations(self):
        # R_S(u,d) = Delta_S theta_u(D) = theta_{u Delta^d}(D) Delta_S,
        # and R_S(uv,d) = theta_u(R_S(v,d))
        d = 5
        u = RF.from_factors(F(3), {0: 2, 1: -1})
        v = RF.from_factors(1, {0: -1, 1: 2})
        pts = {F(0), F(1)}
        delta = RF(Poly.of(0, 1) * Poly.x_minus(1))

        def as_series(op):
            return S.of({1: op.c1, 0: op.c0})

        R_u = as_series(relator(pts, u, d))
        tw_u = h_sequence(u, d, 4)
        assert R_u == star(S.function(delta), theta_partial(tw_u))
        tw_shift = h_sequence(u * delta**d, d, 4)
        assert R_u == star(theta_partial(tw_shift), S.function(delta))
        R_uv = as_series(relator(pts, u * v, d))
        R_v = as_series(relator(pts, v, d))
        assert R_uv == theta_apply(tw_u, R_v)


class TestMicroInverse:
    def test_xi_leading_coefficients(self):
        tw = h_sequence(RF.from_factors(1, {0: 3}), 2, 10, 5)
        xi = xi_build(tw, 8, 5)
        assert xi[-1] == RF.const(1)
        assert xi[-2] == RF.from_factors(F(3, 2), {0: -1})

    def test_trivial_unit_is_exact_inverse(self):
        tw = h_sequence(RF.const(1), 3, 10, 5)
        xi = xi_build(tw, 8, 5)
        prod = star(xi, theta_partial(tw), lo=-10)
        assert prod == S.one()

    def test_residuals_meet_threshold(self):
        for k, d in [(1, 2), (2, 3), (3, 2)]:
            r1, r2 = micro_inverse_residual(x**k, d, 20, 5)
            assert r1.ok and r2.ok
            assert r1.threshold == vp_factorial(20, 5)

    def test_residuals_grow_with_window(self):
        r1, _ = micro_inverse_residual(x, 2, 20, 5)
        r1b, _ = micro_inverse_residual(x, 2, 40, 5)
        assert min(v for _, v in r1b.residuals) > min(v for _, v in r1.residuals)

    def test_window_interior_exactly_zero(self):
        r1, r2 = micro_inverse_residual(x**2, 3, 12, 5)
        for rep in (r1, r2):
            lo, hi = rep.exact_zero_range
            for deg, _ in rep.residuals:
                assert not (lo <= deg < hi)

    def test_product_of_monomials(self):
        u = RF.from_factors(1, {0: 1, 2: 2})
        r1, r2 = micro_inverse_residual(u, 3, 14, 5)
        assert r1.ok and r2.ok


class TestBeta:
    def test_translation_coefficients(self):
        b = beta_build(MobiusMap.translation(5), 6, 5)
        assert b[3] == RF.const(F(125, 6))
        assert beta_build(MobiusMap.identity(), 5, 5) == S.one()

    def test_substitution_on_monomials_exact(self):
        g = MobiusMap.translation(5)
        b = beta_build(g, 30, 5)
        for m in range(31):
            assert apply_to_function(b, x**m) == (x + RF.const(5)) ** m

    def test_group_membership(self):
        assert in_group_of_radius(MobiusMap.translation(5), 5, F(-1, 4))
        assert not in_group_of_radius(MobiusMap.translation(1), 5, F(-1, 4))
        assert not in_group_of_radius(MobiusMap.of(1, 0, 1, 1), 5, F(-1, 4))
        assert in_group_of_radius(MobiusMap.of(6, 5, 25, 1), 5, F(-1, 4))
        with pytest.raises(ValueError):
            beta_build(MobiusMap.translation(1), 6, 5, F(-1, 4))

    def test_homomorphism_within_tail_bounds(self):
        p, depth = 5, 8
        pairs = [
            (MobiusMap.translation(5), MobiusMap.translation(10)),
            (MobiusMap.of(6, 5, 25, 1), MobiusMap.translation(5)),
            (MobiusMap.of(1, 5, 50, 6), MobiusMap.of(6, 0, 25, 1)),
        ]
        for g, h in pairs:
            tau = min(beta_tail_valuation(g, depth, p), beta_tail_valuation(h, depth, p))
            prod = star(beta_build(g, depth, p), beta_build(h, depth, p))
            bgh = beta_build(g * h, depth, p)
            for k in range(depth + 1):
                diff = prod[k] - bgh[k]
                assert diff.is_zero() or gauss_valuation(diff, p) >= tau

    def test_inverse_within_tail_bounds(self):
        p, depth = 5, 10
        g = MobiusMap.translation(5)
        tau = beta_tail_valuation(g, depth, p)
        prod = star(beta_build(g, depth, p), beta_build(g.inverse(), depth, p))
        for k in range(depth + 1):
            diff = prod[k] - (S.one()[k] if k == 0 else RF.const(0))
            assert diff.is_zero() or gauss_valuation(diff, p) >= tau


class TestCocycle:
    def test_geometric_closed_form(self):
        # u = x, d = 1, translation by w: the cocycle is x/(x + w)
        g = MobiusMap.translation(25)
        c = cocycle(x, 1, g, 12, 5)
        target = x / (x + RF.const(25))
        assert gauss_valuation(c - target, 5) >= 13 * 2

    def test_constant_unit(self):
        assert cocycle(RF.const(7), 3, MobiusMap.translation(25), 8, 5) == RF.const(1)

    def test_one_plus_small(self):
        g = MobiusMap.translation(25)
        v = gauss_valuation(cocycle(x, 2, g, 10, 5) - RF.const(1), 5)
        assert v > 0

    def test_dth_power_recovers_unit_ratio(self):
        g = MobiusMap.translation(25)
        for u, d in [(x, 2), (RF.from_factors(1, {0: 2}), 3), (RF.from_factors(1, {5: 1}) * x**2, 2)]:
            c = cocycle(u, d, g, 10, 5)
            rhs = u / g.act_function(u)
            assert gauss_valuation(c**d - rhs, 5) >= 11 * 2

    def test_multiplicative_in_u(self):
        g = MobiusMap.of(6, 5, 25, 1)
        u, v = x, RF.from_factors(1, {5: 2})
        d, depth, p = 3, 9, 5
        vw = gauss_valuation(displacement(g), p)
        cu = cocycle(u, d, g, depth, p)
        cv = cocycle(v, d, g, depth, p)
        cuv = cocycle(u * v, d, g, depth, p)
        diff = cuv - cu * cv
        assert diff.is_zero() or gauss_valuation(diff, p) >= (depth + 1) * vw

    def test_twist_of_beta_is_cocycle_multiple(self):
        p, depth = 5, 10
        g = MobiusMap.translation(25)
        tw = h_sequence(x, 2, depth, p)
        bg = beta_build(g, depth, p)
        lhs = theta_apply(tw, bg)
        for alpha in range(depth + 1):
            assert lhs[alpha] == bg[alpha] * cocycle_from_tw(tw, g, depth - alpha)
