from fractions import Fraction as F

import pytest

from padicops.series import QSeries, binomial_series
from padicops.zeta import (
    alpha_and_j,
    build_cocycle_c,
    convergence_margin,
    eta_apply,
    eta_commutes_with_euler,
    h_sequence_y,
    nabla_apply,
    ode_residual,
    phi_series_coefficient,
    phi_valuation_profile,
    unit_ratio,
    xvzero_series,
    zeta_by_recurrence,
    zeta_series,
)

PARAMS = (3, 3, 1, 4)  # (p, q, k, d)


class TestUnitRatio:
    def test_integer_remainder_polynomial(self):
        for p, q in [(3, 3), (2, 2), (5, 5), (3, 9)]:
            ratio, fpoly = unit_ratio(p, q, 30)
            assert ratio[0] == 1
            # ratio = 1 + p y f(y) / (1 - y^(q-1)) reconstructs exactly
            geom = binomial_series(-1, 30, q - 1)
            recon = QSeries.one(30) + (QSeries.of(fpoly, 30) * geom).shift(1).scale(p)
            assert (recon - ratio).is_zero()
            assert all(c.denominator == 1 for c in fpoly)


class TestCocycleC:
    def test_constant_term_and_power(self):
        c = build_cocycle_c(*PARAMS, 40)
        assert c[0] == 1
        ratio, _ = unit_ratio(3, 3, 40)
        assert (c**4 - ratio).is_zero()

    def test_higher_k(self):
        c = build_cocycle_c(3, 3, 2, 4, 30)
        ratio, _ = unit_ratio(3, 3, 30)
        assert (c**4 - ratio**2).is_zero()

    def test_excluded_trivial_twist(self):
        with pytest.raises(ValueError):
            build_cocycle_c(3, 3, 4, 4, 10)

    def test_divisibility_preconditions(self):
        with pytest.raises(ValueError):
            build_cocycle_c(3, 3, 1, 3, 10)  # d | q+1 fails
        with pytest.raises(ValueError):
            build_cocycle_c(2, 2, 1, 2, 10)  # p | d


class TestAlphaJ:
    def test_first_coefficient(self):
        rep = alpha_and_j(3, 1, 4, 40)
        assert rep.alphas[0] == -1 / (F(3, 4) + 1)
        assert rep.residual_zero

    def test_denominators_never_vanish(self):
        for q, k, d in [(3, 1, 4), (3, 2, 4), (2, 1, 3), (5, 2, 6)]:
            rep = alpha_and_j(q, k, d, 60)
            assert rep.residual_zero


class TestZetaSeries:
    def test_two_routes_agree(self):
        z1 = zeta_series(*PARAMS, 150)
        z2 = zeta_by_recurrence(*PARAMS, 150)
        assert (z1 - z2).is_zero()

    def test_constant_term_is_minus_p(self):
        # the r = 0 bracket tends to -1 at the origin, so the value is -p
        for p, q, k, d in [(3, 3, 1, 4), (2, 2, 1, 3), (3, 3, 3, 4)]:
            assert zeta_series(p, q, k, d, 5)[0] == -p

    def test_low_coefficients_come_from_first_bracket(self):
        # below y^(q-1), only the r = 0 term contributes
        p, q, k, d = PARAMS
        z = zeta_series(*PARAMS, q)
        lam = F(k, d)
        mu = 1 + q * lam
        b = F(1)
        for j in range(q - 1):
            want = p * b * F((-1) ** (j + 1), j + 1)
            assert z[j] == want
            b *= F(mu - 1 - j, j + 1)

    def test_agrees_with_integral_difference_route(self):
        # reconstruct the solution from the integral coefficients a_m and the
        # substitution y -> y/(1-y):
        #   z = -p (1-y^(q-1))^(-k/d) sum_m a_m [ (1-y)^(qk/d) (y/(1-y))^(e) - y^e ]
        # with e = (q-1)m - 1; the e = -1 singular parts cancel in the bracket
        p, q, k, d = PARAMS
        order = 51
        lam = F(k, d)
        alphas = alpha_and_j(q, k, d, order).alphas
        inner = QSeries(tuple(F(1) if j >= 1 else F(0) for j in range(order + 1)))  # y/(1-y)
        pref = binomial_series(q * lam, order + 1)  # (1-y)^(qk/d)
        total = QSeries.zero(order + 1)
        for m, am in enumerate(alphas):
            e = (q - 1) * m - 1
            if e >= 0:
                bracket = pref * inner**e - QSeries.of([0] * e + [1], order + 1)
            else:
                # e = -1: (1/y)[(1-y)^(-qk/d) (1-y) - 1], both poles cancelling
                num = pref * binomial_series(1, order + 1) - QSeries.one(order + 1)
                assert num[0] == 0
                bracket = QSeries(num.coeffs[1:])
            total = total + bracket.truncate(order + 1).scale(am)
            if (q - 1) * m > order:
                break
        z_alt = (total * binomial_series(-lam, order + 1, q - 1)).scale(-p).truncate(order)
        z = zeta_series(p, q, k, d, order)
        assert (z - z_alt).is_zero()

    def test_ode_residual_zero(self):
        rep = ode_residual(*PARAMS, 120)
        assert rep.residual_is_zero and rep.recurrence_matches

    def test_ode_residual_other_parameters(self):
        assert ode_residual(2, 2, 1, 3, 100).residual_is_zero
        assert ode_residual(3, 3, 3, 4, 100).residual_is_zero
        assert ode_residual(5, 5, 2, 6, 80).residual_is_zero
        # prime-power residue size q = p^2
        assert ode_residual(2, 4, 1, 5, 80).residual_is_zero
        assert ode_residual(2, 4, 1, 5, 80).recurrence_matches

    def test_nabla_against_finite_differences(self):
        # sanity on a polynomial: nabla(f) = -(1/p)(y^2 f' - (qk/d) y f - ...)
        p, q, k, d = PARAMS
        f = QSeries.of([1, 2, 0, 5], 12)
        got = nabla_apply(f, p, q, k, d)
        geom = binomial_series(-1, 12, q - 1)
        want = (
            f.euler_derivative().shift(1)
            - f.shift(1).scale(F(q * k, d))
            - (f * geom).shift(q).scale(F(k * (q - 1), d))
        ).scale(F(-1, p))
        assert (got - want).is_zero()

    def test_convergence_at_radius_one_over_p(self):
        z = zeta_series(*PARAMS, 150)
        assert convergence_margin(z, 3) >= 0


class TestEta:
    def test_substitution(self):
        f = QSeries.of([0, 1], 6)  # y -> y/(1-y) = y + y^2 + ...
        assert eta_apply(f).coeffs == (0, 1, 1, 1, 1, 1)

    def test_commutes_with_weighted_derivation(self):
        samples = [QSeries.of([0, 1, 5, -2], 60), binomial_series(F(1, 2), 60)]
        assert eta_commutes_with_euler(60, samples)


class TestXvZero:
    def test_leading_term_and_equation(self):
        rep = xvzero_series(3, 3, 1, 4, 80)
        assert rep.leading_term == 3
        assert rep.residual_is_zero

    def test_other_parameters(self):
        rep = xvzero_series(2, 2, 1, 3, 60)
        assert rep.leading_term == 2 and rep.residual_is_zero
        rep = xvzero_series(2, 4, 1, 5, 40)
        assert rep.leading_term == 2 and rep.residual_is_zero

    def test_h_orders_increase(self):
        hs = h_sequence_y(3, 3, 1, 4, 10, 30)
        for n, h in enumerate(hs):
            lead = next((j for j, c in enumerate(h.coeffs) if c != 0), None)
            if lead is not None and n > 0:
                assert lead >= n


class TestProfile:
    def test_series_route_small_coefficients(self):
        # exact agreement of the capped series route with exact rationals
        p, q, k, d = PARAMS
        lam = F(k, d)
        for n in (3, 7):
            got = phi_series_coefficient(p, q, k, d, n, 60)
            z = zeta_series(p, q, k, d, (q - 1) * n + 1)
            exact = (z.stride_part(q - 1) * binomial_series(lam, n + 1, 1))[n] / p
            from padicops.padics import PadicNumber

            want = PadicNumber.from_rational(exact, p, 80)
            assert got.same_mod(want, got.val + 40)

    def test_cross_validation_small_level(self):
        rows = phi_valuation_profile(2, 1, 1, 3, [6], prec=50)
        assert rows[0].cross_checked and rows[0].agreement_digits >= 25
        assert rows[0].report.ok

    def test_rejects_bad_d(self):
        with pytest.raises(ValueError):
            phi_valuation_profile(3, 1, 1, 3, [6])
