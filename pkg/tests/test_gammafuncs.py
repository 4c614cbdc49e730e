import cmath
import math

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from conftest import complex_in, rel, upper
from multigamma.errors import IllConditioned, InadmissibleSample, PoleProximity
from multigamma.gammafuncs import (check_g_functional_equation, elliptic_gamma, log_multiple_elliptic_gamma,
                                   multiple_elliptic_gamma, theta0)

e = lambda u: np.exp(2j * np.pi * np.asarray(u))


def theta_oracle(z, tau, N=50):
    j = np.arange(N)
    return np.prod((1 - e((j + 1) * tau - z)) * (1 - e(j * tau + z)))


def gamma_oracle(z, tau, sigma, N=40):
    j, k = np.meshgrid(np.arange(N), np.arange(N), indexing="ij")
    return np.prod((1 - e((j + 1) * tau + (k + 1) * sigma - z)) / (1 - e(j * tau + k * sigma + z)))


def sample_tau(rng, r, signed=False):
    tau = [complex(rng.uniform(-1, 1), rng.uniform(0.4, 1.5)) for _ in range(r + 1)]
    if signed:
        tau = [t if rng.random() < 0.5 else -t for t in tau]
    return tau


class TestTheta:
    def test_is_g0(self):
        z, tau = 0.2 + 0.1j, 1j
        assert multiple_elliptic_gamma(0, z, [tau]).value == pytest.approx(theta0(z, tau).value, rel=1e-14)

    def test_zero_at_origin(self):
        with pytest.raises(PoleProximity):
            theta0(0, 1j)

    def test_quasi_periodicity(self):
        z, tau = 0.3 + 0.2j, 1j
        lhs = theta0(z + tau, tau).value
        rhs = cmath.exp(-2j * math.pi * (z - 0.5)) * theta0(z, tau).value
        assert rel(lhs, rhs) < 1e-11

    def test_product_oracle(self):
        z, tau = 0.25 + 0.5j, 1j
        assert abs(theta0(z, tau).value - theta_oracle(z, tau)) < 1e-12

    @given(complex_in((-2, 2), (-0.5, 1.5)), upper((-1, 1), (0.3, 2.0)))
    def test_oracle_property(self, z, tau):
        try:
            v = theta0(z, tau).value
        except PoleProximity:
            assume(False)
        assert rel(v, theta_oracle(z, tau, 200)) < 1e-10

    def test_error_bound_reported(self):
        ev = theta0(0.1 + 0.2j, 0.3 + 1j)
        assert 0 < ev.error_bound < 1e-12 * max(1, abs(ev.value))
        assert ev.r == 0 and complex(ev) == ev.value

    def test_real_modulus_rejected(self):
        with pytest.raises(IllConditioned):
            theta0(0.2 + 0.1j, 0.5)


class TestEllipticGamma:
    def test_symmetric_point(self):
        tau, sigma = 0.3 + 1j, -0.2 + 0.7j
        assert abs(elliptic_gamma((tau + sigma) / 2, tau, sigma).value - 1) < 1e-13

    def test_double_product_oracle(self):
        z, tau, sigma = 0.3 + 0.4j, 1j, 2j
        assert rel(elliptic_gamma(z, tau, sigma).value, gamma_oracle(z, tau, sigma)) < 1e-10

    @given(complex_in((-1, 1), (0.05, 1.0)), upper((-1, 1), (0.5, 1.5)), upper((-1, 1), (0.5, 1.5)))
    def test_difference_equation(self, z, tau, sigma):
        try:
            lhs = elliptic_gamma(z + tau, tau, sigma).value
            rhs = theta0(z, sigma).value * elliptic_gamma(z, tau, sigma).value
        except PoleProximity:
            assume(False)
        assert rel(lhs, rhs) < 1e-10

    def test_pole(self):
        with pytest.raises(PoleProximity):
            elliptic_gamma(0, 1j, 2j)


class TestFunctionalEquations:
    def test_shift_period_r1(self):
        rep = check_g_functional_equation("shift_period", 1, 0.3 + 0.2j, [1j, 0.5 + 1.2j], j=0)
        assert rep.passed and rep.rel_residual < 1e-10

    def test_negation(self):
        rep = check_g_functional_equation("negation", 2, 0.3 + 0.2j, [1j, 0.5 + 1.2j, -0.3 + 0.8j])
        assert rep.passed and rep.rel_residual < 1e-10

    def test_degenerate_sample(self):
        with pytest.raises(InadmissibleSample):
            check_g_functional_equation("periodicity", 0, 0, [1j])

    @pytest.mark.parametrize("r", [0, 1, 2])
    @pytest.mark.parametrize("kind", ["periodicity", "shift_period", "inversion", "negation", "pair"])
    def test_random_samples(self, r, kind):
        rng = np.random.default_rng(100 * r + len(kind))
        worst, done = 0.0, 0
        while done < 100:
            tau = sample_tau(rng, r, signed=True)
            z = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
            j = int(rng.integers(r + 1))
            try:
                rep = check_g_functional_equation(kind, r, z, tau, j=j)
            except (InadmissibleSample, IllConditioned):
                continue
            worst = max(worst, rep.rel_residual)
            done += 1
        assert worst < 1e-9

    @pytest.mark.parametrize("r", [0, 1, 2, 3])
    def test_inverse_and_shifted_forms(self, r):
        rng = np.random.default_rng(r)
        for _ in range(30):
            tau = sample_tau(rng, r)
            z = complex(rng.uniform(-1, 1), rng.uniform(0.05, 0.95) * sum(tau).imag)
            a = multiple_elliptic_gamma(r, z, tau).value
            b = multiple_elliptic_gamma(r, z, tau, form="shifted").value
            assert rel(a, b) < 1e-10

    @pytest.mark.parametrize("r", [0, 1, 2])
    def test_nonzero_in_strip(self, r):
        rng = np.random.default_rng(7 + r)
        for _ in range(50):
            tau = sample_tau(rng, r)
            z = complex(rng.uniform(-3, 3), rng.uniform(0.02, 0.98) * sum(tau).imag)
            v = multiple_elliptic_gamma(r, z, tau).value
            assert np.isfinite(v) and v != 0

    def test_unknown_form(self):
        with pytest.raises(ValueError):
            log_multiple_elliptic_gamma(0, 0.1 + 0.1j, [1j], form="nope")

    def test_wrong_length(self):
        with pytest.raises(ValueError):
            multiple_elliptic_gamma(1, 0.1, [1j])

    def test_rank_minus_one(self):
        z = 0.3 + 0.1j
        assert multiple_elliptic_gamma(-1, z, []).value == pytest.approx(-cmath.exp(-2j * math.pi * z))
