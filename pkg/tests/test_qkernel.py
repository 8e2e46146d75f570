"""Tests for the q-series and theta-function kernels.

Expected values come from independent routes: direct finite products, short
hand-summed partial sums, second series representations, or limits taken
along a parameter, never from the code path under test.
"""

import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qspectra.errors import DomainError, NonConvergent
from qspectra.qkernel import (
    DEFAULT_POLICY,
    QBase,
    SeriesPolicy,
    jacobi_thetas,
    jackson_qbessel3,
    phi01,
    phi11,
    phi11_reg,
    qpochhammer_finite,
    qpochhammer_inf,
    ramanujan_entire,
    theta,
    theta_abs_scale,
    xi,
)

Q = 0.5


class TestQBaseAndPolicy:
    def test_rejects_out_of_range(self):
        for bad in (0.0, 1.0, -0.3, 1.7, float("nan")):
            with pytest.raises(DomainError):
                QBase(bad)

    def test_flags_slow_convergence_range(self):
        with pytest.warns(UserWarning):
            QBase(0.97)

    def test_policy_validation(self):
        with pytest.raises(DomainError):
            SeriesPolicy(rel_tol=0.0)
        with pytest.raises(DomainError):
            SeriesPolicy(max_terms=4)
        with pytest.raises(DomainError):
            SeriesPolicy(consecutive_small=0)

    def test_cap_raises_nonconvergent(self):
        tiny = SeriesPolicy(max_terms=8)
        with pytest.raises(NonConvergent):
            theta(1.0 + 0.5j, 0.94, "bilateral_sum", tiny)


class TestQPochhammer:
    def test_empty_product(self):
        assert qpochhammer_finite(2.3 + 1j, Q, 0) == 1

    def test_two_factors(self):
        # (q;q)_2 = (1-0.5)(1-0.25)
        assert qpochhammer_finite(Q, Q, 2) == pytest.approx(0.375, abs=0)

    def test_vanishing_factor(self):
        assert qpochhammer_finite(1.0, 0.37, 5) == 0

    def test_negative_n_rejected(self):
        with pytest.raises(DomainError):
            qpochhammer_finite(0.5, Q, -1)

    def test_inf_at_zero_argument(self):
        assert qpochhammer_inf(0.0, Q) == 1

    def test_inf_exact_zero_on_lattice(self):
        # a = q^{-2}: the factor at k = 2 is 1 - q^0 = 0 exactly
        assert qpochhammer_inf(Q ** -2, Q) == 0

    def test_inf_against_long_direct_product(self):
        direct = 1.0
        for k in range(512):
            direct *= 1.0 - 0.5 * Q ** k
        val = qpochhammer_inf(0.5, Q).real
        assert abs(val - direct) <= 1e-13 * abs(direct)


class TestTheta:
    def test_zero_argument_rejected(self):
        with pytest.raises(DomainError):
            theta(0.0, Q)

    def test_exact_zeros_on_q_lattice(self):
        for k in (-2, 0, 1, 3):
            assert theta(Q ** k, Q) == 0

    @settings(max_examples=60, deadline=None, derandomize=True)
    @given(
        r=st.floats(min_value=0.1, max_value=3.0),
        ang=st.floats(min_value=-3.1, max_value=3.1),
        qv=st.sampled_from([0.3, 0.5, 0.8]),
    )
    def test_triple_product_identity(self, r, ang, qv):
        x = r * cmath.exp(1j * ang)
        a = theta(x, qv, "product")
        b = theta(x, qv, "bilateral_sum")
        assert abs(a - b) <= 1e-12 * (1.0 + abs(a))

    @settings(max_examples=40, deadline=None, derandomize=True)
    @given(
        r=st.floats(min_value=0.1, max_value=3.0),
        ang=st.floats(min_value=-3.1, max_value=3.1),
        k=st.integers(min_value=-4, max_value=4),
    )
    def test_quasi_periodicity(self, r, ang, k):
        x = r * cmath.exp(1j * ang)
        lhs = theta(Q ** k * x, Q)
        rhs = (-1) ** k * x ** (-k) * Q ** (-k * (k - 1) / 2.0) * theta(x, Q)
        assert abs(lhs - rhs) <= 1e-12 * (1.0 + abs(rhs))

    @settings(max_examples=40, deadline=None, derandomize=True)
    @given(
        r=st.floats(min_value=0.1, max_value=3.0),
        ang=st.floats(min_value=-3.1, max_value=3.1),
    )
    def test_reciprocal_argument(self, r, ang):
        z = r * cmath.exp(1j * ang)
        resid = theta(z, Q) + z * theta(1.0 / z, Q)
        assert abs(resid) <= 1e-12 * (1.0 + abs(theta(z, Q)))

    def test_abs_scale_dominates_value(self):
        for x in (0.7, -1.3 + 0.4j, 2.0j):
            assert abs(theta(x, Q)) <= theta_abs_scale(x, Q) * (1 + 1e-12)

    def test_purity_bit_identical(self):
        args = (0.37 + 0.21j, 0.5)
        assert theta(*args) == theta(*args)
        assert theta(*args, "bilateral_sum") == theta(*args, "bilateral_sum")


class TestConfluentSeries:
    def test_phi11_at_zero_argument(self):
        assert phi11(0.3, Q, 0.0) == 1

    def test_phi11_pole_rejected(self):
        with pytest.raises(DomainError):
            phi11(Q ** -1, Q, 0.2)
        with pytest.raises(DomainError):
            phi11(Q ** -3 * (1 + 1e-12), Q, 0.2)

    def test_phi11_three_term_hand_sum(self):
        # b = -q, z tiny: through k = 2 by hand, k = 3 term ~ 2e-13
        z = 1e-4
        b = -Q
        hand = (1.0
                - z / ((1 - b) * (1 - Q))
                + Q * z * z / ((1 - b) * (1 - b * Q) * (1 - Q) * (1 - Q * Q)))
        assert phi11(b, Q, z).real == pytest.approx(hand, abs=1e-12)

    def test_regularization_consistency(self):
        b, z = 0.3, 0.2
        lhs = qpochhammer_inf(b, Q) * phi11(b, Q, z)
        assert abs(lhs - phi11_reg(b, Q, z)) <= 1e-13

    def test_phi11_reg_at_zero_argument(self):
        b = 0.45
        assert phi11_reg(b, Q, 0.0) == qpochhammer_inf(b, Q)

    def test_phi11_reg_symmetry(self):
        a, z = 0.7, 0.2
        assert abs(phi11_reg(a, Q, z) - phi11_reg(z, Q, a)) <= 1e-14

    def test_phi11_reg_entire_at_pole(self):
        # limit along b = q^{-2}(1 + eps) by Richardson extrapolation
        b0 = Q ** -2
        val = phi11_reg(b0, Q, 0.3)

        def off(eps):
            b = b0 * (1 + eps)
            return (qpochhammer_inf(b, Q) * phi11(b, Q, 0.3)).real

        f1, f2 = off(1e-6), off(5e-7)
        limit = 2 * f2 - f1
        assert val.real == pytest.approx(limit, rel=1e-9)

    def test_phi01_at_zero(self):
        assert phi01(Q, 0.0) == 1

    def test_phi01_partial_sum(self):
        # terms through k = 4; the k = 5 term is ~3e-11
        z = 0.1
        acc, t = 0.0, 1.0
        for k in range(5):
            acc += t
            t *= z * Q ** (2 * k) / (1 - Q ** (k + 1))
        assert phi01(Q, z).real == pytest.approx(acc, abs=1e-10)


class TestRamanujanEntire:
    def test_at_zero(self):
        assert ramanujan_entire(0.0, 0.25) == 1

    def test_partial_sum(self):
        qv = 0.25
        acc = 0.0
        for k in range(6):
            acc += (-1) ** k * qv ** (k * k) / qpochhammer_finite(qv, qv, k).real
        assert ramanujan_entire(1.0, qv).real == pytest.approx(acc, abs=1e-12)

    def test_equals_phi01_specialization(self):
        z = 0.7 - 0.2j
        assert ramanujan_entire(z, Q) == pytest.approx(phi01(Q, -Q * z), abs=1e-15)


class TestJacksonQBessel:
    def test_value_at_origin(self):
        assert jackson_qbessel3(0, 0.0, Q) == 1
        for n in (1, 3, -2):
            assert jackson_qbessel3(n, 0.0, Q) == 0

    def test_negative_order_reflection(self):
        n, z = 2, 0.3
        lhs = jackson_qbessel3(n, z, Q)
        rhs = (-1) ** n * Q ** (-n / 2) * jackson_qbessel3(-n, z * Q ** (-n / 2), Q)
        assert abs(lhs - rhs) <= 1e-13 * abs(lhs)

    def test_summation_formula(self):
        s = sum(abs(jackson_qbessel3(j, 0.5, 0.5)) ** 2 for j in range(-60, 61))
        assert s == pytest.approx(1.0 / (1.0 - 0.25), rel=1e-12)


class TestXi:
    def test_pole_and_origin_rejected(self):
        with pytest.raises(DomainError):
            xi(0.0, Q)
        with pytest.raises(DomainError):
            xi(-math.sqrt(Q), Q)
        with pytest.raises(DomainError):
            xi(-Q ** 2.5 * (1 + 1e-12), Q)

    def test_laurent_annulus_enforced(self):
        with pytest.raises(DomainError):
            xi(0.5, Q, "laurent")  # |z| = 0.5 < sqrt(q)

    def test_three_methods_agree_on_annulus(self):
        for z in (1.0, 0.9 + 0.4j, -0.2 + 0.8j):
            ml = xi(z, Q, "mittag_leffler")
            la = xi(z, Q, "laurent")
            cf = xi(z, Q, "closed_form")
            assert abs(ml - la) <= 1e-12 * (1 + abs(ml))
            assert abs(ml - cf) <= 1e-12 * (1 + abs(ml))

    def test_closed_form_continues_off_annulus(self):
        for z in (3.0, 0.2, 2.0j, -4.0 + 1.5j, 0.1j):
            ml = xi(z, Q, "mittag_leffler")
            cf = xi(z, Q, "closed_form")
            assert abs(ml - cf) <= 1e-12 * (1 + abs(ml))

    def test_closed_form_prefactor_value(self):
        # spell the closed form out once, independently of the implementation
        z = 1.0
        pref = (qpochhammer_inf(Q, Q) / qpochhammer_inf(math.sqrt(Q), Q)) ** 2
        expected = pref * theta(-z, Q) / theta(-z / math.sqrt(Q), Q)
        assert xi(z, Q, "closed_form") == pytest.approx(expected, rel=1e-15)


class TestJacobiThetas:
    def test_th1_vanishes_at_origin(self):
        th = jacobi_thetas(0.0, Q)
        assert th.v1 == 0

    def test_th3_product_form(self):
        th = jacobi_thetas(0.0, Q)
        q2 = Q * Q
        expected = qpochhammer_inf(q2, q2) * theta(-Q, q2)
        assert th.v3 == pytest.approx(expected, rel=1e-14)

    def test_theta_constant_q_product_identities(self):
        # the two combinations entering the elliptic integral have classical
        # q-product evaluations; both must match the theta route
        for qv in (0.3, 0.5, 0.7):
            th = jacobi_thetas(0.0, QBase(qv * qv))
            th2, th3 = th.v2.real, th.v3.real
            lhs_a = qv * (th3 / th2) ** 2
            p4 = qv ** 4
            rhs_a = (qpochhammer_inf(-qv * qv, p4).real ** 4
                     / (4 * qpochhammer_inf(-p4, p4).real ** 4))
            assert lhs_a == pytest.approx(rhs_a, rel=1e-13)
            lhs_p = math.sqrt(qv) / (th2 * th3)
            rhs_p = (qpochhammer_inf(qv * qv, qv * qv).real ** 2
                     / (2 * qpochhammer_inf(p4, p4).real ** 4))
            assert lhs_p == pytest.approx(rhs_p, rel=1e-13)

    def test_generic_point_nonreal(self):
        th = jacobi_thetas(0.3 + 0.2j, Q)
        for v in (th.v1, th.v2, th.v3, th.v4):
            assert v != 0
            assert math.isfinite(abs(v))


class TestConnectionFormula:
    def test_three_series_relation(self):
        # (-1;q)_inf 0phi1(-;0;q^2, q^5 x^{-2})
        #   = theta_q(-x/q) 1phi1(0;-q;q,x) + theta_q(x/q) 1phi1(0;-q;q,-x)
        rng = np.random.default_rng(11)
        minus1 = 2.0 * qpochhammer_inf(-Q, Q)
        for _ in range(20):
            r = rng.uniform(0.15, 2.5)
            ang = rng.uniform(-math.pi, math.pi)
            x = r * cmath.exp(1j * ang)
            lhs = minus1 * phi01(Q * Q, Q ** 5 / (x * x))
            t1 = theta(-x / Q, Q) * phi11(-Q, Q, x)
            t2 = theta(x / Q, Q) * phi11(-Q, Q, -x)
            scale = abs(lhs) + abs(t1) + abs(t2)
            assert abs(lhs - t1 - t2) <= 1e-11 * scale
