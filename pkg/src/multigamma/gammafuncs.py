"""Multiple elliptic gamma functions G_r(z | tau_0..tau_r).

    G_r(z|tau) = (x^{-1}; q^{-1})^{(-1)^{r+1}} (x; q)^{(-1)^r},   x = e^{2 pi i z}

G_0 is the theta function theta_0 and G_1 the elliptic gamma function.
``r = -1`` (no moduli) is allowed and equals ``-1/x``; the functional
equations that lower the rank refer to it.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum

from .errors import InadmissibleSample, PoleProximity
from .policy import DEFAULT_POLICY, Estimate, TruncationPolicy
from .qseries import EPS, TauVector, log_q_shifted_factorial
from .report import IdentityReport, make_report

TWO_PI_I = 2j * math.pi


@dataclass(frozen=True)
class GammaEvaluation:
    value: complex
    error_bound: float
    r: int
    z: complex
    tau: TauVector

    def __complex__(self):
        return complex(self.value)


def _as_tau(tau, r: int | None) -> TauVector:
    if isinstance(tau, TauVector):
        t = tau
    elif isinstance(tau, (int, float, complex)):
        t = TauVector((tau,))
    else:
        t = TauVector(tuple(tau))
    if r is not None and len(t) != r + 1:
        raise ValueError(f"G_{r} needs {r + 1} moduli, got {len(t)}")
    return t


def log_multiple_elliptic_gamma(r: int, z, tau, policy: TruncationPolicy = DEFAULT_POLICY,
                                form: str = "inverse") -> Estimate:
    """Logarithm of G_r (arbitrary branch).

    ``form="inverse"`` uses the reciprocal-moduli factor, ``form="shifted"``
    the equivalent ``(x^{-1} q_0...q_r; q)`` factor.
    """
    tau = _as_tau(tau, r)
    z = complex(z)
    if r == -1:
        return Estimate(cmath.pi * 1j - TWO_PI_I * z, 0.0)
    q = tau.nomes
    x = cmath.exp(TWO_PI_I * z)
    sign = -1 if r % 2 else 1
    a, ea = log_q_shifted_factorial(x, q, policy)
    if form == "inverse":
        xinv = cmath.exp(-TWO_PI_I * z)
        b, eb = log_q_shifted_factorial(xinv, [1 / v for v in q], policy)
        val = -sign * b + sign * a
    elif form == "shifted":
        shifted = cmath.exp(TWO_PI_I * (tau.total - z))
        b, eb = log_q_shifted_factorial(shifted, q, policy)
        val = b + sign * a
    else:
        raise ValueError(f"unknown form {form!r}")
    return Estimate(val, ea + eb)


def multiple_elliptic_gamma(r: int, z, tau, policy: TruncationPolicy = DEFAULT_POLICY,
                            form: str = "inverse") -> GammaEvaluation:
    """Evaluate ``G_r(z|tau)``; raises :class:`PoleProximity` on the zero/pole lattice."""
    t = _as_tau(tau, r)
    lv, le = log_multiple_elliptic_gamma(r, z, t, policy, form)
    v = cmath.exp(lv)
    return GammaEvaluation(v, abs(v) * (le + EPS), r, complex(z), t)


def theta0(z, tau, policy: TruncationPolicy = DEFAULT_POLICY) -> GammaEvaluation:
    """theta_0(z, tau) = prod_j (1 - e^{2 pi i((j+1)tau - z)}) (1 - e^{2 pi i(j tau + z)})."""
    return multiple_elliptic_gamma(0, z, (tau,), policy)


def elliptic_gamma(z, tau, sigma, policy: TruncationPolicy = DEFAULT_POLICY) -> GammaEvaluation:
    return multiple_elliptic_gamma(1, z, (tau, sigma), policy)


def G(r, z, tau, policy: TruncationPolicy = DEFAULT_POLICY) -> complex:
    return multiple_elliptic_gamma(r, z, tau, policy).value


class GammaRelation(str, Enum):
    periodicity = "periodicity"
    shift_period = "shift_period"
    inversion = "inversion"
    negation = "negation"
    pair = "pair"


def check_g_functional_equation(kind, r: int, z, tau, j: int = 0,
                                policy: TruncationPolicy = DEFAULT_POLICY) -> IdentityReport:
    """Check one functional equation of G_r at a single point.

    periodicity:   G_r(z+1) = G_r(z)
    shift_period:  G_r(z + tau_j) = G_{r-1}(z | tau without j) G_r(z)
    inversion:     G_r(z) G_r(z - tau_j | tau with tau_j negated) = 1
    negation:      G_r(-z | -tau) G_r(z | tau) = 1
    pair:          G_r(z|tau) G_r(z|tau with tau_j negated) G_{r-1}(z|tau without j) = 1
    """
    kind = GammaRelation(kind)
    tau = _as_tau(tau, r)
    z = complex(z)
    sample = {"r": r, "z": z, "tau": list(tau), "j": j}
    try:
        g = lambda rr, zz, tt: multiple_elliptic_gamma(rr, zz, tt, policy).value
        if kind is GammaRelation.periodicity:
            lhs, rhs = g(r, z + 1, tau), g(r, z, tau)
        elif kind is GammaRelation.shift_period:
            lhs = g(r, z + tau[j], tau)
            rhs = g(r - 1, z, tau.without(j)) * g(r, z, tau)
        elif kind is GammaRelation.inversion:
            lhs = g(r, z, tau)
            rhs = 1 / g(r, z - tau[j], tau.negated(j))
        elif kind is GammaRelation.negation:
            lhs = g(r, -z, -tau) * g(r, z, tau)
            rhs = 1 + 0j
        else:
            lhs = g(r, z, tau) * g(r, z, tau.negated(j))
            rhs = 1 / g(r - 1, z, tau.without(j))
    except PoleProximity as exc:
        raise InadmissibleSample(str(exc)) from exc
    return make_report(f"g_{kind.value}", lhs, rhs, policy.threshold_series, sample, policy)
