"""Modular identities of the elliptic gamma hierarchy as executable checks.

Every check evaluates both sides through separate representations and
returns an :class:`IdentityReport`.  Samples violating a precondition, or
landing on a zero/pole lattice, raise :class:`InadmissibleSample` so that
sweeps can resample instead of recording a failure.

Exponential prefactors are built with :func:`_bexp`, which adds
``policy.prefactor_shift`` to the constant coefficient of the Bernoulli
polynomial; the shift is zero except in negative controls.
"""

from __future__ import annotations

import cmath
import math
import warnings
from enum import Enum

from .bernoulli import PeriodVector, multiple_bernoulli_poly, q_cubic, q_cubic_coeffs
from .errors import (ConvergenceError, DomainError, InadmissibleSample, MaxTermsExceeded,
                     SlowConvergenceWarning)
from .gammafuncs import elliptic_gamma, log_multiple_elliptic_gamma, multiple_elliptic_gamma, theta0
from .multisine import (bernoulli_exponent, sine_s1, indented_integral, log_multiple_sine_integral,
                        log_multiple_sine_product, s2_literal, s3_literal)
from .policy import DEFAULT_POLICY, TruncationPolicy
from .qseries import (TauVector, log_q_shifted_factorial, q_polylog, q_shifted_factorial,
                      q_shifted_factorial_product)
from .quadrature import (GIntegralForm, log_g_integral_rep, log_psi2, log_s2_equal_periods, q_polylog_contour)
from .report import IdentityReport, make_report, residuals

TWO_PI_I = 2j * math.pi


class Sign(str, Enum):
    minus_one = "minus_one"
    plus_one = "plus_one"


def _bexp(coef: complex, r: int, n: int, z, periods, policy: TruncationPolicy) -> complex:
    """``coef * (B_{r,n}(z|periods) + shift)``: an exponent, not yet exponentiated."""
    return coef * (multiple_bernoulli_poly(r, n, list(periods))(complex(z)) + policy.prefactor_shift)


def _logG(r, z, tau, policy) -> complex:
    return log_multiple_elliptic_gamma(r, z, tau, policy).value


def _guard(fn):
    """Turn domain errors raised while evaluating a check into InadmissibleSample."""
    def wrapped(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except InadmissibleSample:
            raise
        except DomainError as exc:
            raise InadmissibleSample(f"{type(exc).__name__}: {exc}") from exc
    wrapped.__name__ = fn.__name__
    wrapped.__doc__ = fn.__doc__
    wrapped.__wrapped__ = fn
    return wrapped


def _require_nonreal_ratios(vals, margin=0.0):
    for j, a in enumerate(vals):
        for k, b in enumerate(vals):
            if j != k and abs((a / b).imag) <= margin:
                raise InadmissibleSample(f"ratio {a}/{b} is real")


@_guard
def check_gamma_product_identity(r: int, z, omega, policy: TruncationPolicy = DEFAULT_POLICY) -> IdentityReport:
    """prod_k G_{r-2}(z/w_k | (w_j/w_k)_{j != k}) = exp(-2 pi i / r! B_{r,r}(z|w))."""
    omega = PeriodVector.of(omega)
    if r < 2 or len(omega) != r:
        raise InadmissibleSample("need r >= 2 and r periods")
    _require_nonreal_ratios(list(omega))
    z = complex(z)
    lhs_log = 0j
    for k, wk in enumerate(omega):
        ratios = [wj / wk for j, wj in enumerate(omega) if j != k]
        lhs_log += _logG(r - 2, z / wk, ratios, policy)
    rhs_log = _bexp(-TWO_PI_I / math.factorial(r), r, r, z, omega, policy)
    return make_report("gamma_product", cmath.exp(lhs_log), cmath.exp(rhs_log), policy.threshold_series,
                       {"r": r, "z": z, "omega": list(omega)}, policy)


def _modular_rhs_log(r, z, tau: TauVector, sign: Sign, policy) -> complex:
    fact = math.factorial(r + 2)
    out = 0j
    if sign is Sign.minus_one:
        out += _bexp(TWO_PI_I / fact, r + 2, r + 2, z, list(tau) + [-1], policy)
        for k, tk in enumerate(tau):
            mods = [tj / tk for j, tj in enumerate(tau) if j != k] + [-1 / tk]
            out += _logG(r, z / tk, mods, policy)
    else:
        out += _bexp(-TWO_PI_I / fact, r + 2, r + 2, z, list(tau) + [1], policy)
        for k, tk in enumerate(tau):
            mods = [-tj / tk for j, tj in enumerate(tau) if j != k] + [-1 / tk]
            out += _logG(r, -z / tk, mods, policy)
    return out


@_guard
def check_modular_transformation(r: int, z, tau, sign="minus_one",
                                 policy: TruncationPolicy = DEFAULT_POLICY) -> IdentityReport:
    """G_r(z|tau) against the exponential prefactor times the product of
    G_r at the transformed arguments, with period -1 (``minus_one``) or +1
    (``plus_one``) appended."""
    sign = Sign(sign)
    tau = TauVector.of(tau)
    if len(tau) != r + 1:
        raise InadmissibleSample(f"need {r + 1} moduli")
    _require_nonreal_ratios(list(tau))
    z = complex(z)
    lhs = cmath.exp(_logG(r, z, tau, policy))
    rhs = cmath.exp(_modular_rhs_log(r, z, tau, sign, policy))
    return make_report(f"modular_{sign.value}", lhs, rhs, policy.threshold_series,
                       {"r": r, "z": z, "tau": list(tau), "sign": sign.value}, policy)


def jacobi_exponent_coeffs(tau) -> tuple[complex, complex, complex]:
    """Coefficients (z^0, z^1, z^2) of the classical theta transformation exponent / (pi i)."""
    tau = complex(tau)
    return (tau / 6 + 1 / (6 * tau) - 0.5, 1 / tau - 1, 1 / tau)


@_guard
def check_jacobi(z, tau, policy: TruncationPolicy = DEFAULT_POLICY) -> IdentityReport:
    """Theta transformation under tau -> -1/tau in its three equivalent forms.

    The reported lhs/rhs belong to the classical form
    ``theta0(z/tau, -1/tau) = exp(pi i P(z)) theta0(z, tau)``; the residual is
    the worst over all forms.  ``extra`` records the per-form residuals and
    the coefficient mismatch between ``P`` and ``-B_{2,2}(z | tau, -1)``.
    """
    z, tau = complex(z), complex(tau)
    if tau.imag <= 0:
        raise InadmissibleSample("need Im tau > 0")
    P = jacobi_exponent_coeffs(tau)
    poly = sum(c * z ** k for k, c in enumerate(P)) + policy.prefactor_shift
    th = theta0(z, tau, policy).value
    th_t = theta0(z / tau, -1 / tau, policy).value
    th_m = theta0(-z / tau, -1 / tau, policy).value
    lhs = th_t
    rhs = cmath.exp(1j * math.pi * poly) * th
    forms = {
        "classical": residuals(lhs, rhs)[1],
        "minus_one": residuals(th, cmath.exp(_bexp(1j * math.pi, 2, 2, z, (tau, -1), policy)) * th_t)[1],
        "plus_one": residuals(th, cmath.exp(_bexp(-1j * math.pi, 2, 2, z, (tau, 1), policy)) * th_m)[1],
    }
    b22 = multiple_bernoulli_poly(2, 2, (tau, -1)).coeffs
    coeff_gap = max(abs(p + b) for p, b in zip(P, b22))
    report = make_report("jacobi", lhs, rhs, policy.threshold_series, {"z": z, "tau": tau}, policy,
                         forms=forms, exponent_coeff_gap=coeff_gap)
    worst = max(forms.values())
    report.rel_residual = worst
    report.passed = worst < report.threshold and coeff_gap < 1e-13 * max(1.0, max(map(abs, b22)))
    return report


def _fv_admissible(tau, sigma):
    if min(tau.imag, sigma.imag, (tau / sigma).imag) <= 0:
        raise InadmissibleSample("need Im tau, Im sigma, Im(tau/sigma) > 0")


@_guard
def check_felder_varchenko(z, tau, sigma, policy: TruncationPolicy = DEFAULT_POLICY) -> IdentityReport:
    """Gamma(z/s, t/s, -1/s) = e^{pi i Q} Gamma((z-s)/t, -s/t, -1/t) Gamma(z, t, s),
    plus the two rearranged forms with Bernoulli prefactors."""
    z, tau, sigma = complex(z), complex(tau), complex(sigma)
    _fv_admissible(tau, sigma)
    g = lambda *a: elliptic_gamma(*a, policy=policy).value
    q = q_cubic(z, tau, sigma) + policy.prefactor_shift
    a = g(z / sigma, tau / sigma, -1 / sigma)
    b = g((z - sigma) / tau, -sigma / tau, -1 / tau)
    c = g(z, tau, sigma)
    lhs, rhs = a, cmath.exp(1j * math.pi * q) * b * c
    form1 = cmath.exp(_bexp(1j * math.pi / 3, 3, 3, z, (tau, sigma, -1), policy)) * a / b
    form2 = (cmath.exp(_bexp(-1j * math.pi / 3, 3, 3, z, (tau, sigma, 1), policy))
             * g(-z / tau, -sigma / tau, -1 / tau) / g((tau - z) / sigma, tau / sigma, -1 / sigma))
    forms = {"cubic": residuals(lhs, rhs)[1], "minus_one": residuals(c, form1)[1],
             "plus_one": residuals(c, form2)[1]}
    report = make_report("felder_varchenko", lhs, rhs, policy.threshold_series,
                         {"z": z, "tau": tau, "sigma": sigma}, policy, forms=forms)
    report.rel_residual = max(forms.values())
    report.passed = report.rel_residual < report.threshold
    return report


@_guard
def check_g2_modular(z, tau, sign="minus_one", policy: TruncationPolicy = DEFAULT_POLICY) -> IdentityReport:
    """Three-factor modular formula for G_2 with all moduli in the upper half plane."""
    sign = Sign(sign)
    t0, t1, t2 = (complex(t) for t in TauVector.of(tau))
    if min(t0.imag, t1.imag, t2.imag, (t0 / t1).imag, (t0 / t2).imag, (t1 / t2).imag) <= 0:
        raise InadmissibleSample("need Im tau_j > 0 and Im(tau_j/tau_k) > 0 for j < k")
    z = complex(z)
    lg = lambda zz, *mods: _logG(2, zz, mods, policy)
    lhs = cmath.exp(lg(z, t0, t1, t2))
    if sign is Sign.minus_one:
        pre = _bexp(1j * math.pi / 12, 4, 4, z, (t0, t1, t2, -1), policy)
        rhs_log = (pre + lg((z - t1 - t2) / t0, -t1 / t0, -t2 / t0, -1 / t0)
                   + lg(z / t2, t0 / t2, t1 / t2, -1 / t2)
                   - lg((z - t2) / t1, t0 / t1, -t2 / t1, -1 / t1))
    else:
        pre = _bexp(-1j * math.pi / 12, 4, 4, z, (t0, t1, t2, 1), policy)
        rhs_log = (pre + lg(-z / t0, -t1 / t0, -t2 / t0, -1 / t0)
                   + lg((t0 + t1 - z) / t2, t0 / t2, t1 / t2, -1 / t2)
                   - lg((t0 - z) / t1, t0 / t1, -t2 / t1, -1 / t1))
    return make_report(f"g2_modular_{sign.value}", lhs, cmath.exp(rhs_log), policy.threshold_series,
                       {"z": z, "tau": [t0, t1, t2], "sign": sign.value}, policy)


class SummationKind(str, Enum):
    theta = "theta"
    elliptic_gamma = "elliptic_gamma"


SLOW_RATE = 0.02


def _cos_over_sin(j, w, tau):
    # cos(pi j w) / sin(pi j tau) for Im tau > 0 without overflow
    a, b = math.pi * j * w, math.pi * j * tau
    return -1j * (cmath.exp(1j * (a + b)) + cmath.exp(1j * (b - a))) / (1 - cmath.exp(2j * b))


def _sin_over_sin_sin(j, w, tau, sigma):
    a, b, c = math.pi * j * w, math.pi * j * tau, math.pi * j * sigma
    return 2j * (cmath.exp(1j * (a + b + c)) - cmath.exp(1j * (b + c - a))) / (
        (1 - cmath.exp(2j * b)) * (1 - cmath.exp(2j * c)))


def summation_series(which, z, params, policy: TruncationPolicy = DEFAULT_POLICY) -> tuple[complex, float, int]:
    """Exponent of the trigonometric series for theta0 or the elliptic gamma.

    Returns ``(exponent, tail_bound, terms_used)``.
    """
    which = SummationKind(which)
    z = complex(z)
    if which is SummationKind.theta:
        (tau,) = params
        tau = complex(tau)
        upper = tau.imag
        term = lambda j: -1j * _cos_over_sin(j, 2 * z - tau, tau) / j
    else:
        tau, sigma = (complex(p) for p in params)
        upper = (tau + sigma).imag
        term = lambda j: -0.5j * _sin_over_sin_sin(j, 2 * z - tau - sigma, tau, sigma) / j
    if not 0 < z.imag < upper:
        raise InadmissibleSample("need 0 < Im z < upper bound of the strip")
    rate = 2 * math.pi * min(z.imag, upper - z.imag)
    if rate < SLOW_RATE:
        warnings.warn(f"summation decays like exp(-{rate:.3g} j); convergence will be slow",
                      SlowConvergenceWarning, stacklevel=2)
    total = 0j
    j = 0
    while True:
        j += 1
        if j > policy.max_terms:
            raise ConvergenceError("summation formula did not converge")
        t = term(j)
        total += t
        # geometric tail from the observed decay rate
        if abs(t) < policy.tail_tol * max(1.0, abs(total)):
            tail = abs(t) * math.exp(-rate) / (1 - math.exp(-rate))
            return total, tail, j


@_guard
def check_summation_formula(which, z, params, policy: TruncationPolicy = DEFAULT_POLICY) -> IdentityReport:
    which = SummationKind(which)
    z = complex(z)
    params = [complex(p) for p in params]
    if any(p.imag <= 0 for p in params):
        raise InadmissibleSample("need moduli in the upper half plane")
    expo, tail, n = summation_series(which, z, params, policy)
    if which is SummationKind.theta:
        lhs = theta0(z, params[0], policy).value
    else:
        lhs = elliptic_gamma(z, params[0], params[1], policy).value
    return make_report(f"summation_{which.value}", lhs, cmath.exp(expo), policy.threshold_series,
                       {"z": z, "params": params}, policy, terms=n, tail_bound=tail)


def _lsine(r, w, tau, direction, policy):
    if r == 1:
        return cmath.log(sine_s1(w, tau[0]))
    # right-moving arguments are best served by the lower product, left-moving by the upper
    return log_multiple_sine_product(r, w, tau, "lower_40" if direction > 0 else "upper_39", policy).value


def sine_product_partial(r: int, z, tau: TauVector, K: int, sign: Sign, policy) -> complex:
    """Log of the truncated product (k = 0..K) of multiple sine factors."""
    s = (-1) ** r
    fact = math.factorial(r + 1)
    B = lambda w: multiple_bernoulli_poly(r + 1, r + 1, list(tau))(w)
    if sign is Sign.minus_one:
        out = _bexp(TWO_PI_I / math.factorial(r + 2), r + 2, r + 2, z, list(tau) + [-1], policy)
        right, left = lambda k: z + k + 1, lambda k: z - k
    else:
        out = _bexp(-TWO_PI_I / math.factorial(r + 2), r + 2, r + 2, z, list(tau) + [1], policy)
        right, left = lambda k: z + k, lambda k: z - k - 1
    for k in range(K + 1):
        a, b = right(k), left(k)
        out += s * (_lsine(r + 1, a, tau, 1, policy) + _lsine(r + 1, b, tau, -1, policy))
        out -= 1j * math.pi / fact * (B(a) - B(b))
    return out


@_guard
def check_sine_product_expansion(r: int, z, tau, K: int = 20, sign="minus_one",
                                 policy: TruncationPolicy = DEFAULT_POLICY) -> IdentityReport:
    """G_r(z|tau) as a Bernoulli prefactor times a product over k of S_{r+1} factors.

    The products are truncated at ``K`` and ``K + 5``; the report carries both
    residuals to expose convergence.  The moduli must have pairwise nonreal
    ratios so that S_{r+1} has a product representation.
    """
    sign = Sign(sign)
    tau = TauVector.of(tau)
    z = complex(z)
    if K < 1 or len(tau) != r + 1:
        raise InadmissibleSample("need K >= 1 and r + 1 moduli")
    if any(t.imag <= 0 for t in tau) or not 0 < z.imag < tau.total.imag:
        raise InadmissibleSample("need Im tau_j > 0 and 0 < Im z < Im |tau|")
    _require_nonreal_ratios(list(tau))
    lhs = multiple_elliptic_gamma(r, z, tau, policy).value
    rhs = cmath.exp(sine_product_partial(r, z, tau, K, sign, policy))
    rhs5 = cmath.exp(sine_product_partial(r, z, tau, K + 5, sign, policy))
    return make_report(f"sine_product_{sign.value}", lhs, rhs, policy.threshold_series,
                       {"r": r, "z": z, "tau": list(tau), "K": K, "sign": sign.value}, policy,
                       residual_K_plus_5=residuals(lhs, rhs5)[1])


def equal_period_gamma_log(z, tau, K: int, policy: TruncationPolicy = DEFAULT_POLICY) -> complex:
    z, tau = complex(z), complex(tau)
    out = _bexp(1j * math.pi / 3, 3, 3, z, (tau, tau, -1), policy)
    for k in range(K + 1):
        out += log_psi2((z + k + 1) / tau, policy).value - log_psi2(2 - (z - k) / tau, policy).value
    return out


@_guard
def check_equal_period_gamma(z, tau, K: int = 20, policy: TruncationPolicy = DEFAULT_POLICY) -> IdentityReport:
    """Gamma(z, tau, tau) against its psi_2 product expansion truncated at K.

    ``extra["history"]`` holds the residual at K = 0, 5, 10, ... up to K.
    """
    z, tau = complex(z), complex(tau)
    if tau.imag <= 0 or not 0 < z.imag < 2 * tau.imag:
        raise InadmissibleSample("need Im tau > 0 and 0 < Im z < 2 Im tau")
    lhs = elliptic_gamma(z, tau, tau, policy).value
    # accumulate factors once and record intermediate residuals
    log_acc = _bexp(1j * math.pi / 3, 3, 3, z, (tau, tau, -1), policy)
    history = {}
    for k in range(K + 1):
        log_acc += log_psi2((z + k + 1) / tau, policy).value - log_psi2(2 - (z - k) / tau, policy).value
        if k % 5 == 0 or k == K:
            history[k] = residuals(lhs, cmath.exp(log_acc))[1]
    return make_report("equal_period_gamma", lhs, cmath.exp(log_acc), policy.threshold_quadrature,
                       {"z": z, "tau": tau, "K": K}, policy, history=history)


# lower layers: q-series, sine representations, integral forms

class QRelation(str, Enum):
    inversion = "inversion"
    shift = "shift"
    li_product = "li_product"
    li_reflection = "li_reflection"


@_guard
def check_q_relation(kind, x, q, j: int = 0, policy: TruncationPolicy = DEFAULT_POLICY) -> IdentityReport:
    """Relations of the q-shifted factorial and the q-polylogarithm.

    inversion:      (x; q) (x/q_j; q with q_j inverted) = 1
    shift:          (q_j x; q) (x; q without j) = (x; q)
    li_product:     truncated raw product = exp(-Li(x; q)), needs |x| < 1 and |q_j| < 1
    li_reflection:  Li(x; q) = -Li(x/q_j; q with q_j inverted)
    """
    kind = QRelation(kind)
    x = complex(x)
    q = [complex(v) for v in q]
    qj = q[j]
    inv = q[:j] + [1 / qj] + q[j + 1:]
    F = lambda xx, qq: log_q_shifted_factorial(xx, qq, policy).value
    threshold = policy.threshold_series
    if kind is QRelation.inversion:
        # the direct product keeps the two factors on independent code paths
        try:
            first = cmath.log(q_shifted_factorial_product(x, q, policy).value)
        except ConvergenceError:
            first = F(x, q)
        lhs, rhs = cmath.exp(first + F(x / qj, inv)), 1 + 0j
    elif kind is QRelation.shift:
        lhs = cmath.exp(F(qj * x, q) + F(x, q[:j] + q[j + 1:]))
        rhs = cmath.exp(F(x, q))
    elif kind is QRelation.li_product:
        if abs(x) >= 1 or any(abs(v) >= 1 for v in q):
            raise InadmissibleSample("needs |x| < 1 and every |q_j| < 1")
        try:
            lhs = q_shifted_factorial_product(x, q, policy).value
        except MaxTermsExceeded as exc:
            raise InadmissibleSample(f"direct product too large: {exc}") from exc
        rhs = cmath.exp(-q_polylog(x, q, policy).value)
    else:
        lhs = q_polylog(x, q, policy).value
        rhs = -q_polylog(x / qj, inv, policy).value
    return make_report(f"q_{kind.value}", lhs, rhs, threshold, {"x": x, "q": q, "j": j}, policy)


@_guard
def check_sine_product_variants(r: int, z, omega, policy: TruncationPolicy = DEFAULT_POLICY) -> IdentityReport:
    """The two infinite-product representations of S_r give the same value."""
    up = log_multiple_sine_product(r, z, omega, "upper_39", policy).value
    lo = log_multiple_sine_product(r, z, omega, "lower_40", policy).value
    return make_report("sine_variants", cmath.exp(up), cmath.exp(lo), policy.threshold_series,
                       {"r": r, "z": complex(z), "omega": [complex(w) for w in omega]}, policy)


@_guard
def check_sine_literal(r: int, z, omega, lower: bool = False,
                       policy: TruncationPolicy = DEFAULT_POLICY) -> IdentityReport:
    """Hand-written double/triple sine products against the generic evaluator."""
    omega = [complex(w) for w in omega]
    if r == 2:
        lit = s2_literal(z, *omega, lower=lower)
    elif r == 3:
        lit = s3_literal(z, *omega, lower=lower)
    else:
        raise InadmissibleSample("literal products exist for r = 2, 3")
    gen = cmath.exp(log_multiple_sine_product(r, z, omega, "lower_40" if lower else "upper_39", policy).value)
    return make_report("sine_literal", lit, gen, policy.threshold_series,
                       {"r": r, "z": complex(z), "omega": omega, "lower": lower}, policy)


@_guard
def check_sine_integral(r: int, z, omega, side="plus_i0", policy: TruncationPolicy = DEFAULT_POLICY) -> IdentityReport:
    """Indented-line integral representation of S_r against the product (closed form for r = 1)."""
    omega = [complex(w) for w in omega]
    z = complex(z)
    lv, err = log_multiple_sine_integral(r, z, omega, side, policy)
    if r == 1:
        ref = 2 * cmath.sin(math.pi * z / omega[0])
    else:
        ref = cmath.exp(log_multiple_sine_product(r, z, omega, "upper_39", policy).value)
    return make_report("sine_integral", cmath.exp(lv), ref, policy.threshold_quadrature,
                       {"r": r, "z": z, "omega": omega, "side": getattr(side, "value", side)}, policy, quad_error=err)


@_guard
def check_indent_residue(r: int, z, omega, policy: TruncationPolicy = DEFAULT_POLICY) -> IdentityReport:
    """Difference of the integrals below and above the origin equals 2 pi i B_rr / r!.

    With the notch passing below 0 the contour picks up the residue
    counterclockwise relative to the upper notch.
    """
    omega = [complex(w) for w in omega]
    z = complex(z)
    below = indented_integral(r, z, omega, "minus_i0", policy)
    above = indented_integral(r, z, omega, "plus_i0", policy)
    residue = _bexp(TWO_PI_I / math.factorial(r), r, r, z, omega, policy)
    return make_report("indent_residue", below.value - above.value, residue, policy.threshold_series,
                       {"r": r, "z": z, "omega": omega}, policy, quad_error=below.error + above.error)


@_guard
def check_g_integral(r: int, z, tau, form="c1", policy: TruncationPolicy = DEFAULT_POLICY) -> IdentityReport:
    """Integral representation of G_r against the product definition."""
    form = GIntegralForm(form)
    tau = TauVector.of(tau)
    z = complex(z)
    lv, err = log_g_integral_rep(r, z, tau, form, policy)
    # the Bernoulli prefactor of the line forms also feels the negative-control shift
    if form is not GIntegralForm.c1:
        sgn = -1 if form is GIntegralForm.r_plus_eps_1 else 1
        lv += sgn * TWO_PI_I / math.factorial(r + 2) * policy.prefactor_shift
    ref = multiple_elliptic_gamma(r, z, tau, policy).value
    return make_report(f"g_integral_{form.value}", cmath.exp(lv), ref,
                       policy.threshold_quadrature, {"r": r, "z": z, "tau": list(tau), "form": form.value},
                       policy, quad_error=err)


@_guard
def check_li_contour(z, tau, policy: TruncationPolicy = DEFAULT_POLICY) -> IdentityReport:
    """Contour integral form of the q-polylogarithm against its series."""
    tau = TauVector.of(tau)
    z = complex(z)
    if z.imag <= 0:
        raise InadmissibleSample("need Im z > 0")
    lhs = q_polylog_contour(z, list(tau), policy)
    rhs = q_polylog(cmath.exp(TWO_PI_I * z), tau.nomes, policy).value
    return make_report("li_contour", lhs.value, rhs, policy.threshold_quadrature,
                       {"z": z, "tau": list(tau)}, policy, quad_error=lhs.error)


class Psi2Relation(str, Enum):
    reflection = "reflection"
    s2_direct = "s2_direct"
    s2_reflected = "s2_reflected"


@_guard
def check_psi2_relation(kind, z, policy: TruncationPolicy = DEFAULT_POLICY) -> IdentityReport:
    """psi_2 against Bernoulli exponentials and the equal-period double sine.

    reflection:    psi2(z) psi2(2 - z) = exp(-pi i B22(z|1,1))
    s2_direct:     S2(z|1,1) = exp(-pi i/2 B22(z|1,1)) / psi2(z)
    s2_reflected:  S2(z|1,1) = exp(pi i/2 B22(z|1,1)) psi2(2 - z)
    """
    kind = Psi2Relation(kind)
    z = complex(z)
    p = lambda w: log_psi2(w, policy).value
    if kind is Psi2Relation.reflection:
        lhs_log = p(z) + p(2 - z)
        rhs_log = _bexp(-1j * math.pi, 2, 2, z, (1, 1), policy)
    else:
        lhs_log = log_s2_equal_periods(z, policy).value
        if kind is Psi2Relation.s2_direct:
            rhs_log = _bexp(-0.5j * math.pi, 2, 2, z, (1, 1), policy) - p(z)
        else:
            rhs_log = _bexp(0.5j * math.pi, 2, 2, z, (1, 1), policy) + p(2 - z)
    return make_report(f"psi2_{kind.value}", cmath.exp(lhs_log), cmath.exp(rhs_log),
                       policy.threshold_quadrature, {"z": z}, policy)
