import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from conftest import complex_in, polar
from multigamma.bernoulli import (PeriodVector, classical_bernoulli_numbers, eval_multiple_bernoulli,
                                  multiple_bernoulli_poly, q_cubic, q_cubic_coeffs)
from multigamma.errors import TruncationCapacity


def coeffs(r, n, om):
    return np.array(multiple_bernoulli_poly(r, n, om).coeffs)


def gap(a, b):
    n = max(len(a), len(b))
    a = np.pad(np.asarray(a, complex), (0, n - len(a)))
    b = np.pad(np.asarray(b, complex), (0, n - len(b)))
    return np.max(np.abs(a - b)) / max(1.0, np.max(np.abs(a)), np.max(np.abs(b)))


def compose_affine(c, a, b):
    """Coefficients of p(a + b z) for p with coefficients c."""
    return np.polynomial.Polynomial(c)(np.polynomial.Polynomial([a, b])).coef


periods = st.lists(polar(), min_size=1, max_size=4)


class TestClassicalNumbers:
    def test_small_table(self):
        assert classical_bernoulli_numbers(2) == (1, Fraction(-1, 2), Fraction(1, 6))
        assert classical_bernoulli_numbers(0) == (1,)

    def test_b12_against_mpmath(self):
        b12 = classical_bernoulli_numbers(12)[12]
        assert b12 == Fraction(-691, 2730)
        assert float(b12) == pytest.approx(float(mpmath.bernoulli(12)), rel=1e-15)

    def test_odd_entries_vanish(self):
        table = classical_bernoulli_numbers(64)
        assert all(table[k] == 0 for k in range(3, 65, 2))
        for k in range(0, 65, 2):
            assert float(table[k]) == pytest.approx(float(mpmath.bernoulli(k)), rel=1e-14)

    @pytest.mark.parametrize("k", [-1, 65])
    def test_range(self, k):
        with pytest.raises(ValueError):
            classical_bernoulli_numbers(k)


class TestPolynomials:
    def test_b11(self):
        w = 0.7 + 0.2j
        c = coeffs(1, 1, [w])
        assert np.allclose(c, [-0.5, 1 / w], rtol=0, atol=1e-15)
        assert abs(eval_multiple_bernoulli(1, 1, w / 2, [w])) < 1e-15

    def test_b21_equal_periods_is_z_minus_one(self):
        assert np.allclose(coeffs(2, 1, [1, 1]), [-1, 1])
        assert eval_multiple_bernoulli(2, 1, 1.0, [1, 1]) == 0

    def test_b22_equal_periods_at_zero(self):
        assert eval_multiple_bernoulli(2, 2, 0, [1, 1]) == pytest.approx(5 / 6, abs=1e-15)

    def test_b33_reflection_point(self):
        z0 = 0.7
        a = eval_multiple_bernoulli(3, 3, 3 - z0, [1, 1, 1])
        assert a == pytest.approx(-eval_multiple_bernoulli(3, 3, z0, [1, 1, 1]), abs=1e-14)

    def test_b22_against_closed_form(self):
        z, w1, w2 = 0.3 + 0.1j, 2.0, 3j
        closed = z ** 2 / (w1 * w2) - (w1 + w2) / (w1 * w2) * z + (w1 ** 2 + w2 ** 2 + 3 * w1 * w2) / (6 * w1 * w2)
        assert abs(eval_multiple_bernoulli(2, 2, z, [w1, w2]) - closed) < 1e-14

    def test_leading_coefficient(self):
        om = [0.5 + 1j, -1.2, 0.3j]
        for n in range(3, 8):
            assert abs(coeffs(3, n, om)[-1] - 1 / np.prod(om)) < 1e-14

    def test_capacity(self):
        with pytest.raises(TruncationCapacity):
            multiple_bernoulli_poly(1, 17, [1.0])
        assert len(multiple_bernoulli_poly(1, 20, [1.0], max_order=24).coeffs) == 21

    def test_zero_period_rejected(self):
        with pytest.raises(ValueError):
            multiple_bernoulli_poly(2, 2, [1.0, 0.0])
        with pytest.raises(ValueError):
            PeriodVector.of([1, 0])

    def test_empty_period_vector_gives_monomial(self):
        assert np.allclose(coeffs(0, 3, []), [0, 0, 0, 1])


def cauchy_coefficient(r, n, z, om, radius=0.4, m=128):
    """n! [t^n] of t^r e^{zt} / prod(e^{w t} - 1) by the trapezoid rule on a circle."""
    t = radius * np.exp(2j * np.pi * np.arange(m) / m)
    g = t ** r * np.exp(z * t) / np.prod([np.expm1(w * t) for w in om], axis=0)
    return math.factorial(n) * np.mean(g / t ** n)


class TestGeneratingFunction:
    @given(periods, complex_in(), st.integers(0, 6))
    def test_cauchy_oracle(self, om, z, n):
        # poles of the generating function sit at 2 pi i k / w, far outside the circle
        r = len(om)
        got = eval_multiple_bernoulli(r, n, z, om)
        want = cauchy_coefficient(r, n, z, om)
        assert abs(got - want) <= 1e-10 * max(1.0, abs(want))

    @given(periods, complex_in())
    def test_partial_sum_on_small_circle(self, om, z):
        r = len(om)
        N = 14
        for t in 0.1 * np.exp(2j * np.pi * np.arange(5) / 5):
            series = sum(eval_multiple_bernoulli(r, n, z, om) * t ** n / math.factorial(n) for n in range(N + 1))
            direct = t ** r * np.exp(z * t) / np.prod([np.expm1(w * t) for w in om])
            assert abs(series - direct) < 1e-10 * max(1.0, abs(direct))


class TestRelations:
    @given(periods, polar(), st.integers(0, 6))
    def test_homogeneity(self, om, c, n):
        r = len(om)
        lhs = compose_affine(coeffs(r, n, [c * w for w in om]), 0, c)
        assert gap(lhs, c ** (n - r) * coeffs(r, n, om)) < 1e-12

    @given(periods, st.integers(0, 6))
    def test_reflection(self, om, n):
        r = len(om)
        B = coeffs(r, n, om)
        assert gap(compose_affine(B, sum(om), -1), (-1) ** n * B) < 1e-12

    @given(periods, st.integers(1, 6), st.data())
    def test_shift_sign_flip_and_sum_rule(self, om, n, data):
        r = len(om)
        j = data.draw(st.integers(0, r - 1))
        B = coeffs(r, n, om)
        rest = om[:j] + om[j + 1:]
        neg = om[:j] + [-om[j]] + om[j + 1:]
        lower = n * coeffs(r - 1, n - 1, rest)
        shifted = compose_affine(B, om[j], 1)
        assert gap(np.polysub(shifted[::-1], B[::-1])[::-1], lower) < 1e-12
        assert gap(coeffs(r, n, neg), -shifted) < 1e-12
        assert gap(coeffs(r, n, neg) + B, -np.pad(lower, (0, 1))) < 1e-12

    @given(periods, st.integers(1, 8))
    def test_derivative(self, om, n):
        r = len(om)
        P = multiple_bernoulli_poly(r, n, om)
        assert gap(P.derivative(), n * coeffs(r, n - 1, om)) < 1e-12

    @given(periods, st.randoms(use_true_random=False), st.integers(0, 6))
    def test_permutation_symmetry(self, om, rnd, n):
        perm = list(om)
        rnd.shuffle(perm)
        assert gap(coeffs(len(om), n, perm), coeffs(len(om), n, om)) < 1e-14

    @pytest.mark.parametrize("r", [1, 2, 3, 4])
    def test_falling_factorial(self, r):
        want = np.polynomial.polynomial.polyfromroots(range(1, r + 1))
        assert gap(coeffs(r + 1, r, [1.0] * (r + 1)), want) < 1e-12

    @pytest.mark.parametrize("r", [1, 2, 3, 4, 5])
    @pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6, 7])
    def test_equal_period_recurrence(self, r, n):
        ones = [1.0] * r
        lhs = r * compose_affine(coeffs(r + 1, n, ones + [1.0]), 1, 1)
        rhs = (r - n) * coeffs(r, n, ones) + n * np.concatenate([[0], coeffs(r, n - 1, ones)])
        assert gap(lhs, rhs) < 1e-12


class TestCubic:
    def test_matches_bernoulli(self):
        z, tau, sigma = 0.2 + 0.3j, 0.5j, 1 + 1j
        q = q_cubic(z, tau, sigma)
        b = -eval_multiple_bernoulli(3, 3, z, (tau, sigma, -1)) / 3
        assert abs(q - b) / abs(b) < 1e-12

    def test_leading_coefficient(self):
        tau, sigma = 0.3 + 0.8j, -0.4 + 1.1j
        assert abs(q_cubic_coeffs(tau, sigma)[3] - 1 / (3 * tau * sigma)) < 1e-15

    @given(polar(), polar(), complex_in())
    def test_odd_about_centre(self, tau, sigma, u):
        c = (tau + sigma - 1) / 2
        scale = max(1.0, *map(abs, q_cubic_coeffs(tau, sigma))) * 30
        assert abs(q_cubic(c, tau, sigma)) < 1e-13 * scale
        assert abs(q_cubic(c + u, tau, sigma) + q_cubic(c - u, tau, sigma)) < 1e-12 * scale

    def test_rejects_zero(self):
        with pytest.raises(ValueError):
            q_cubic(0.1, 0, 1j)
