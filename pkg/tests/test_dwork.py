from fractions import Fraction as F

import pytest

from padicops.dwork import (
    dwork_build,
    dwork_coefficients,
    dwork_identities,
    euler_apply,
    euler_integrality_check,
    euler_weight,
    frobenius_relation,
)
from padicops.ratfun import Poly
from padicops.skew import SkewLaurentSeries


class TestCoefficients:
    def test_q2_values(self):
        assert dwork_coefficients(2, 3) == (1, -1, 2)

    def test_constant_term(self):
        for q in (2, 3, 5):
            assert dwork_coefficients(q, 1)[0] == 1

    def test_root_of_unity_oracle_q2(self):
        # (1/2) sum over zeta in {1, -1} of (zeta - 1)^k
        H = dwork_build(2, 12)
        for k in range(13):
            direct = ((1 - 1) ** k + (-1 - 1) ** k) // 2
            assert H.c[k] == direct

    def test_binomial_transform_row_sums(self):
        # sum_k c_k binom(j, k) = 1 if q | j else 0
        for q in (2, 3):
            c = dwork_coefficients(q, 15)
            import math

            for j in range(15):
                s = sum(c[k] * math.comb(j, k) for k in range(j + 1))
                assert s == (1 if j % q == 0 else 0)


class TestProjector:
    def test_action_on_monomials(self):
        for q in (2, 3):
            H = dwork_build(q, 12)
            for j in range(13):
                got = H.apply_poly(Poly.of(*([0] * j + [1])))
                want = Poly.of(*([0] * j + [1])) if j % q == 0 else Poly(())
                assert got == want

    def test_truncation_guard(self):
        H = dwork_build(2, 6)
        with pytest.raises(ValueError):
            H.apply_poly(Poly.of(*([0] * 9 + [1])))
        with pytest.raises(ValueError):
            dwork_build(3, 2)


class TestIdentities:
    def test_idempotent_and_partition(self):
        for q in (2, 3):
            rep = dwork_identities(q, 12)
            assert rep.ok, rep.failures
            assert rep.checked_orders[0] == q - 1
            assert rep.checked_orders[-1] == 12 - q

    def test_descent_relation(self):
        assert frobenius_relation(2, F(1, 2), 1, 12).ok
        assert frobenius_relation(2, 0, 0, 12).ok
        assert frobenius_relation(3, F(2, 3), 2, 12).ok
        assert frobenius_relation(3, 5, 1, 12).ok

    def test_descent_index_range(self):
        with pytest.raises(ValueError):
            frobenius_relation(2, 0, 2, 12)


class TestEuler:
    def test_identity_operator(self):
        f = Poly.of(0, 0, 1)
        assert euler_apply(0, f) == SkewLaurentSeries.of({0: f})

    def test_monomial_eigenvalues(self):
        import math

        for n in range(4):
            for m in range(6):
                img = euler_apply(n, Poly.of(*([0] * m + [1])))
                want = math.comb(m, n)
                if want == 0:
                    assert img.is_zero()
                else:
                    assert img[0].num.coeffs[-1] == want

    def test_negative_weight(self):
        img = euler_apply(2, Poly.of(1), 3)
        assert img[3].as_constant() == 6
        assert euler_weight(2, -3) == 6

    def test_integrality(self):
        samples = [(Poly.of(1, 1, 2), 2), (Poly.of(0, 3, 1), 5), (Poly.of(1), 0), (Poly.of(7, 0, 2), 1)]
        for p in (2, 3, 5):
            assert euler_integrality_check(10, p, samples)

    def test_falling_factorial_composition(self):
        # n! E_n acts termwise as the falling factorial of the weight shift:
        # (xD - m)(xD - m - 1)...(xD - m - n + 1)
        import math

        def weight_shift_apply(f, m, offset):
            out = Poly(())
            for a, c in enumerate(f.coeffs):
                out = out + Poly.of(*([0] * a + [c * (a - m - offset)]))
            return out

        for f, m in [(Poly.of(1, 1, 2), 2), (Poly.of(0, 3, 1), -1), (Poly.of(5, 0, 0, 1), 4)]:
            for n in range(6):
                acc = f
                for t in range(n):
                    acc = weight_shift_apply(acc, m, t)
                img = euler_apply(n, f, m)
                want = acc.scale(F(1, math.factorial(n)))
                if want.is_zero():
                    assert img.is_zero()
                else:
                    assert img[m].num == want
