import cmath
import math

import mpmath
import numpy as np
import pytest

from conftest import rel
from multigamma.bernoulli import multiple_bernoulli_poly
from multigamma.errors import DomainViolation, PoleOnContour, QuadratureFailure
from multigamma.gammafuncs import elliptic_gamma, theta0
from multigamma.multisine import multiple_sine
from multigamma.policy import DEFAULT_POLICY
from multigamma.qseries import q_polylog
from multigamma.quadrature import (ContourKind, ContourSpec, g_integral_rep, integrate_contour, log_g_integral_rep,
                                   log_psi2, psi2, q_polylog_contour, s2_equal_periods)

B22_11 = lambda z: multiple_bernoulli_poly(2, 2, (1, 1))(z)


def psi2_oracle(z):
    mpmath.mp.dps = 30
    f = lambda t: (t - 1) / (mpmath.exp(2j * mpmath.pi * t) - 1)
    v = mpmath.quad(f, [z - 60j, z - 1j, z])
    return complex(mpmath.exp(2j * mpmath.pi * v))


class TestIntegrateContour:
    def test_circle_residue(self):
        spec = ContourSpec("circle", rho=0.5)
        v, err = integrate_contour(lambda t: 1 / t, spec)
        assert abs(v - 2j * math.pi) < 1e-13 and err < 1e-10

    def test_even_integrand_vanishes(self):
        v, _ = integrate_contour(lambda t: 1 / t ** 2, ContourSpec("circle", rho=0.5))
        assert abs(v) < 1e-13

    def test_segment(self):
        spec = ContourSpec("segment_path", vertices=(0, 1 + 1j, 2))
        v, _ = integrate_contour(lambda t: t ** 2, spec)
        assert abs(v - 8 / 3) < 1e-13

    def test_gaussian_horizontal_line(self):
        v, err = integrate_contour(lambda t: np.exp(-t ** 2), ContourSpec("horizontal_line", eps=0.3, rho=0.1))
        assert abs(v - math.sqrt(math.pi)) < 1e-12

    def test_pole_on_contour(self):
        spec = ContourSpec("segment_path", vertices=(-1, 1))
        with pytest.raises(QuadratureFailure):
            integrate_contour(lambda t: 1 / t, spec)

    def test_no_decay(self):
        with pytest.raises(QuadratureFailure):
            integrate_contour(lambda t: np.ones_like(t), ContourSpec("horizontal_line"))

    @pytest.mark.parametrize("kw", [dict(rho=0.3, eps=0.2), dict(T=0.5), dict(panel_order=4)])
    def test_spec_invariants(self, kw):
        with pytest.raises(ValueError):
            ContourSpec("real_line_indent_above", **kw)

    def test_s2_through_indented_line(self):
        z, w = 0.8 + 0.1j, (1, 1 + 1j)
        spec = ContourSpec("real_line_indent_above", eps=0.25, rho=0.1)
        f = lambda t: np.exp(z * t) / (t * np.expm1(w[0] * t) * np.expm1(w[1] * t))
        v, _ = integrate_contour(f, spec)
        pre = 1j * math.pi / 2 * multiple_bernoulli_poly(2, 2, w)(z)
        assert rel(cmath.exp(pre + v), multiple_sine(2, z, w)) < 1e-8

    def test_imaginary_period_puts_poles_on_the_line(self):
        # with a purely imaginary period the integrand has poles at t = 2 pi n
        z = 0.8 + 0.1j
        f = lambda t: np.exp(z * t) / (t * np.expm1(t) * np.expm1(1j * t))
        with pytest.raises(QuadratureFailure):
            integrate_contour(f, ContourSpec("real_line_indent_above", eps=0.25, rho=0.1))


class TestPolylogContour:
    def test_against_series(self):
        z, tau = 0.3 + 0.2j, (0.5j, 1 + 0.7j)
        x = cmath.exp(2j * math.pi * z)
        q = [cmath.exp(2j * math.pi * t) for t in tau]
        v, err = q_polylog_contour(z, tau)
        assert abs(v - q_polylog(x, q).value) < 1e-8
        assert err < 1e-8

    def test_small_x(self):
        assert abs(q_polylog_contour(6j, (0.5j, 1 + 0.7j)).value) < 1e-15

    def test_truncation_doubling(self):
        z, tau = 0.3 + 0.2j, (0.5j, 1 + 0.7j)
        T = 30.0
        a = q_polylog_contour(z, tau, DEFAULT_POLICY.with_(quad_T=T)).value
        b = q_polylog_contour(z, tau, DEFAULT_POLICY.with_(quad_T=2 * T)).value
        assert abs(a - b) < 1e-10

    def test_random_samples(self):
        rng = np.random.default_rng(2)
        for _ in range(50):
            r = int(rng.integers(0, 3))
            tau = [complex(rng.uniform(-1, 1), rng.uniform(0.4, 1.5)) for _ in range(r + 1)]
            z = complex(rng.uniform(-1, 1), rng.uniform(0.1, 1.0))
            x = cmath.exp(2j * math.pi * z)
            want = q_polylog(x, [cmath.exp(2j * math.pi * t) for t in tau]).value
            assert rel(q_polylog_contour(z, tau).value, want) < 1e-7

    def test_domain(self):
        with pytest.raises(DomainViolation):
            q_polylog_contour(0.3 - 0.1j, (1j,))


class TestGIntegral:
    @pytest.mark.parametrize("form", ["c1", "r_plus_eps_1", "r_plus_eps_2"])
    def test_theta(self, form):
        z, tau = 0.2 + 0.3j, 1j
        assert rel(g_integral_rep(0, z, [tau], form).value, theta0(z, tau).value) < 1e-7

    @pytest.mark.parametrize("form", ["c1", "r_plus_eps_1", "r_plus_eps_2"])
    def test_elliptic_gamma(self, form):
        z, tau, sigma = 0.3 + 0.4j, 1j, 0.4 + 0.8j
        assert rel(g_integral_rep(1, z, [tau, sigma], form).value, elliptic_gamma(z, tau, sigma).value) < 1e-7

    def test_eps_forms_agree(self):
        z, tau = 0.1 + 0.5j, (0.2 + 1j, -0.3 + 0.6j, 0.7j)
        a = log_g_integral_rep(2, z, tau, "r_plus_eps_1").value
        b = log_g_integral_rep(2, z, tau, "r_plus_eps_2").value
        assert abs(cmath.exp(a - b) - 1) < 1e-8

    def test_domain(self):
        with pytest.raises(DomainViolation):
            g_integral_rep(0, 2j, [1j])
        with pytest.raises(DomainViolation):
            g_integral_rep(0, 0.5j, [-1j])
        with pytest.raises(ValueError):
            g_integral_rep(1, 0.5j, [1j])

    def test_refinement_within_bound(self):
        z, tau = 0.2 + 0.3j, (1j,)
        base, err = log_g_integral_rep(0, z, tau)
        for pol in (DEFAULT_POLICY.with_(panel_order=64), DEFAULT_POLICY.with_(quad_eps=0.125, quad_rho=0.05),
                    DEFAULT_POLICY.with_(quad_T=120.0)):
            v, e = log_g_integral_rep(0, z, tau, policy=pol)
            assert abs(v - base) <= err + e


class TestPsi2:
    def test_at_one(self):
        assert abs(psi2(1).value - cmath.exp(1j * math.pi / 12)) < 1e-10

    @pytest.mark.parametrize("z", [0.6 + 0.2j, 1.3 - 0.4j, -0.7 + 0.1j, 2.5 + 1j])
    def test_mpmath_oracle(self, z):
        assert rel(psi2(z).value, psi2_oracle(z)) < 1e-9

    def test_reflection(self):
        z = 0.6 + 0.2j
        lhs = psi2(z).value * psi2(2 - z).value
        assert rel(lhs, cmath.exp(-1j * math.pi * B22_11(z))) < 1e-8

    def test_tail_doubling(self):
        z = 0.6 + 0.2j
        a = log_psi2(z, DEFAULT_POLICY.with_(quad_T=20.0)).value
        b = log_psi2(z, DEFAULT_POLICY.with_(quad_T=40.0)).value
        assert abs(a - b) < 1e-10

    def test_singular_point(self):
        with pytest.raises(PoleOnContour):
            psi2(2.01)


class TestS2EqualPeriods:
    def test_at_one(self):
        assert s2_equal_periods(1).value == 1

    def test_psi2_relations(self):
        z = 0.7 + 0.1j
        s = s2_equal_periods(z).value
        b = B22_11(z)
        assert rel(s, cmath.exp(-1j * math.pi / 2 * b) / psi2(z).value) < 1e-8
        assert rel(s, psi2(2 - z).value * cmath.exp(1j * math.pi / 2 * b)) < 1e-8

    def test_pole(self):
        with pytest.raises(PoleOnContour):
            s2_equal_periods(3.0 + 0.01j)
