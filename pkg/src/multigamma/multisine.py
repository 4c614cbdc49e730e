"""Multiple sine functions S_r(z | w_1..w_r).

Two evaluation routes are provided:

* infinite products built from q-shifted factorials in the nomes
  ``x_k = e^{2 pi i z/w_k}``, ``q_jk = e^{2 pi i w_j/w_k}`` (requires every
  ratio ``w_j/w_k`` to be nonreal), in an upper and a lower variant;
* the exponential of an integral along the real line indented above or
  below the origin (requires ``Re w_j > 0`` and ``0 < Re z < Re |w|``).

``S_1(z|w) = 2 sin(pi z / w)`` is closed form.
"""

from __future__ import annotations

import cmath
import math
from enum import Enum

import numpy as np

from .bernoulli import PeriodVector, multiple_bernoulli_poly
from .errors import DomainViolation, InadmissibleSample, PoleProximity, RatioOnRealAxis
from .policy import DEFAULT_POLICY, Estimate, TruncationPolicy
from .qseries import EPS, log_q_shifted_factorial
from .quadrature import ContourKind, ContourSpec, exp_over_expm1, integrate_contour
from .report import IdentityReport, make_report

TWO_PI_I = 2j * math.pi


class ProductVariant(str, Enum):
    upper_39 = "upper_39"
    lower_40 = "lower_40"


class IndentSide(str, Enum):
    plus_i0 = "plus_i0"
    minus_i0 = "minus_i0"


def sine_s1(z, omega1) -> complex:
    omega1 = complex(omega1)
    if omega1 == 0:
        raise ValueError("omega1 must be nonzero")
    return 2 * cmath.sin(cmath.pi * complex(z) / omega1)


def _check_ratios(omega: PeriodVector, policy: TruncationPolicy):
    for j, a in enumerate(omega):
        for k, b in enumerate(omega):
            if j != k and abs((a / b).imag) * 2 * math.pi < policy.unit_circle_guard:
                raise RatioOnRealAxis(f"w_{j + 1}/w_{k + 1} = {a / b} is (nearly) real")


def bernoulli_exponent(r: int, z, omega) -> complex:
    """``pi i / r! * B_{r,r}(z|omega)``."""
    return 1j * math.pi / math.factorial(r) * multiple_bernoulli_poly(r, r, omega)(complex(z))


def log_multiple_sine_product(r: int, z, omega, variant="upper_39",
                              policy: TruncationPolicy = DEFAULT_POLICY) -> Estimate:
    """Logarithm (arbitrary branch) of S_r from an infinite-product representation."""
    variant = ProductVariant(variant)
    omega = PeriodVector.of(omega)
    if len(omega) != r:
        raise ValueError(f"expected {r} periods, got {len(omega)}")
    if r < 2:
        raise ValueError("product representations need r >= 2")
    _check_ratios(omega, policy)
    z = complex(z)
    upper = variant is ProductVariant.upper_39
    # the Bernoulli prefactor and the product are kept apart until the end
    sign = (-1) ** r if upper else (-1) ** (r - 1)
    lv = sign * bernoulli_exponent(r, z, omega)
    err = EPS * abs(lv)
    for k, wk in enumerate(omega):
        qk = [cmath.exp(TWO_PI_I * wj / wk) for j, wj in enumerate(omega) if j != k]
        xk = cmath.exp(TWO_PI_I * z / wk)
        if upper:
            v, e = log_q_shifted_factorial(xk, qk, policy)
        else:
            v, e = log_q_shifted_factorial(1 / xk, [1 / q for q in qk], policy)
        lv += v
        err += e
    return Estimate(lv, err)


def multiple_sine_product(r: int, z, omega, variant="upper_39",
                          policy: TruncationPolicy = DEFAULT_POLICY) -> Estimate:
    lv, le = log_multiple_sine_product(r, z, omega, variant, policy)
    v = cmath.exp(lv)
    return Estimate(v, abs(v) * le)


def multiple_sine(r: int, z, omega, policy: TruncationPolicy = DEFAULT_POLICY) -> complex:
    """S_r by the cheapest available route (closed form for r = 1)."""
    omega = PeriodVector.of(omega)
    if r == 1:
        return sine_s1(z, omega[0])
    return multiple_sine_product(r, z, omega, "upper_39", policy).value


def indented_integral(r: int, z, omega, side="plus_i0", policy: TruncationPolicy = DEFAULT_POLICY) -> Estimate:
    """``int e^{zt} / (t prod_j (e^{w_j t} - 1)) dt`` along the indented real line."""
    side = IndentSide(side)
    omega = PeriodVector.of(omega)
    z = complex(z)
    ws = list(omega)
    # the notch must stay inside the first ring of poles 2 pi i n / w_j
    rho = min(policy.quad_rho, 0.5 * min(2 * math.pi / abs(w) for w in ws))
    kind = ContourKind.real_line_indent_above if side is IndentSide.plus_i0 else ContourKind.real_line_indent_below

    def f(t):
        return exp_over_expm1([(1.0, z * t)], [w * t for w in ws]) / t

    spec = ContourSpec(kind, eps=max(policy.quad_eps, 2 * rho), rho=rho, T=policy.quad_T,
                       panel_order=policy.panel_order)
    return integrate_contour(f, spec, policy)


def log_multiple_sine_integral(r: int, z, omega, side="plus_i0",
                               policy: TruncationPolicy = DEFAULT_POLICY) -> Estimate:
    side = IndentSide(side)
    omega = PeriodVector.of(omega)
    if len(omega) != r:
        raise ValueError(f"expected {r} periods, got {len(omega)}")
    z = complex(z)
    if any(w.real <= 0 for w in omega):
        raise DomainViolation("integral representation needs Re w_j > 0")
    if not 0 < z.real < omega.total.real:
        raise DomainViolation("integral representation needs 0 < Re z < Re |w|")
    sign = (-1) ** r if side is IndentSide.plus_i0 else (-1) ** (r - 1)
    v, e = indented_integral(r, z, omega, side, policy)
    return Estimate(sign * bernoulli_exponent(r, z, omega) + (-1) ** r * v, e)


def multiple_sine_integral(r: int, z, omega, side="plus_i0", policy: TruncationPolicy = DEFAULT_POLICY) -> Estimate:
    lv, le = log_multiple_sine_integral(r, z, omega, side, policy)
    v = cmath.exp(lv)
    return Estimate(v, abs(v) * le)


# literal double-sine and triple-sine products, kept independent of the
# generic evaluator above

def _truncation(mags, tol):
    a = max(mags)
    if a >= 1:
        raise DomainViolation("product does not converge for these periods")
    return max(2, math.ceil(math.log(tol) / math.log(a)) + 2)


def s2_literal(z, w1, w2, lower: bool = False, tol: float = 1e-17) -> complex:
    """Double sine from its explicit single products (needs Im(w1/w2) > 0)."""
    z, w1, w2 = complex(z), complex(w1), complex(w2)
    if (w1 / w2).imag <= 0:
        raise DomainViolation("need Im(w1/w2) > 0")
    a, b = w1 / w2, w2 / w1
    N = _truncation([abs(cmath.exp(TWO_PI_I * a)), abs(cmath.exp(-TWO_PI_I * b))], tol)
    j = np.arange(N)
    B22 = multiple_bernoulli_poly(2, 2, (w1, w2))(z)
    if not lower:
        num = 1 - np.exp(TWO_PI_I * (z / w2 + j * a))
        den = 1 - np.exp(TWO_PI_I * (z / w1 - (j + 1) * b))
        pre = 1j * math.pi / 2 * B22
    else:
        num = 1 - np.exp(TWO_PI_I * (-z / w1 - j * b))
        den = 1 - np.exp(TWO_PI_I * (-z / w2 + (j + 1) * a))
        pre = -1j * math.pi / 2 * B22
    return cmath.exp(pre + np.log(num).sum() - np.log(den).sum())


def s3_literal(z, w1, w2, w3, lower: bool = False, tol: float = 1e-17) -> complex:
    """Triple sine from its explicit double products.

    Needs Im(w1/w2), Im(w1/w3), Im(w2/w3) > 0.
    """
    z, w1, w2, w3 = map(complex, (z, w1, w2, w3))
    if min((w1 / w2).imag, (w1 / w3).imag, (w2 / w3).imag) <= 0:
        raise DomainViolation("need Im(w1/w2), Im(w1/w3), Im(w2/w3) > 0")
    mags = [abs(cmath.exp(TWO_PI_I * u)) for u in (-w2 / w1, -w3 / w1, w1 / w3, w2 / w3, w1 / w2, -w3 / w2)]
    N = _truncation(mags, tol)
    j, k = np.meshgrid(np.arange(N), np.arange(N), indexing="ij")
    B33 = multiple_bernoulli_poly(3, 3, (w1, w2, w3))(z)
    e = lambda u: 1 - np.exp(TWO_PI_I * u)
    if not lower:
        f1 = e(z / w1 - (j + 1) * w2 / w1 - (k + 1) * w3 / w1)
        f3 = e(z / w3 + j * w1 / w3 + k * w2 / w3)
        f2 = e(z / w2 + j * w1 / w2 - (k + 1) * w3 / w2)
        pre = -1j * math.pi / 6 * B33
    else:
        f1 = e(-z / w1 - j * w2 / w1 - k * w3 / w1)
        f3 = e(-z / w3 + (j + 1) * w1 / w3 + (k + 1) * w2 / w3)
        f2 = e(-z / w2 + (j + 1) * w1 / w2 - k * w3 / w2)
        pre = 1j * math.pi / 6 * B33
    return cmath.exp(pre + np.log(f1).sum() + np.log(f3).sum() - np.log(f2).sum())


class SineRelation(str, Enum):
    shift = "shift"
    reflection = "reflection"


def check_sine_relations(kind, r: int, z, omega, j: int = 0,
                         policy: TruncationPolicy = DEFAULT_POLICY) -> IdentityReport:
    """shift:      S_r(z + w_j) S_{r-1}(z | w without j) = S_r(z)
    reflection: S_r(z) S_r(|w| - z)^{(-1)^r} = 1
    """
    kind = SineRelation(kind)
    omega = PeriodVector.of(omega)
    z = complex(z)
    S = lambda rr, zz, ww: multiple_sine(rr, zz, ww, policy)
    sample = {"r": r, "z": z, "omega": list(omega), "j": j}
    try:
        if kind is SineRelation.shift:
            lhs = S(r, z + omega[j], omega) * S(r - 1, z, omega.without(j))
            rhs = S(r, z, omega)
        else:
            lhs = S(r, z, omega) * S(r, omega.total - z, omega) ** ((-1) ** r)
            rhs = 1 + 0j
    except (PoleProximity, RatioOnRealAxis) as exc:
        raise InadmissibleSample(str(exc)) from exc
    return make_report(f"sine_{kind.value}", lhs, rhs, policy.threshold_series, sample, policy)
