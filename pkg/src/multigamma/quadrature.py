"""Contour quadrature with composite Gauss-Legendre panels.

Contours are assembled from straight segments, circular arcs and rays to
infinity.  Each finite piece is covered by panels that are bisected until
the order-n rule and its two-half refinement agree; rays are truncated
where the integrand has decayed below ``tail_tol`` of its peak, and the
neglected tail is bounded from the observed exponential decay rate.

Integrands are vectorized callables ``f(t: ndarray[complex]) -> ndarray``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import Callable

import numpy as np

from .bernoulli import multiple_bernoulli_poly
from .errors import DomainViolation, PoleOnContour, QuadratureFailure
from .policy import DEFAULT_POLICY, Estimate, TruncationPolicy
from .qseries import TauVector, _check_moduli

TWO_PI_I = 2j * math.pi
SPIKE = 1e12
MAX_DEPTH = 40
MAX_RAY = 5000.0


class ContourKind(str, Enum):
    real_line_indent_above = "real_line_indent_above"
    real_line_indent_below = "real_line_indent_below"
    c1_around_positive_integers = "c1_around_positive_integers"
    vertical_from_minus_i_infinity = "vertical_from_minus_i_infinity"
    segment_path = "segment_path"
    horizontal_line = "horizontal_line"
    circle = "circle"


@dataclass(frozen=True)
class ContourSpec:
    """Geometry of an integration path.

    ``eps`` is the offset of the horizontal legs from the real axis (C1 and
    the shifted line), ``rho`` the radius of the notch around the origin.
    ``vertices`` is used by ``segment_path``; ``anchor`` is the finite end of
    the vertical path and the center of ``circle`` (radius ``rho``).
    """

    kind: ContourKind
    eps: float = 0.25
    rho: float = 0.1
    T: float | None = None
    panel_order: int = 32
    vertices: tuple[complex, ...] = ()
    anchor: complex = 0j

    def __post_init__(self):
        object.__setattr__(self, "kind", ContourKind(self.kind))
        if self.kind is not ContourKind.circle and not 0 < self.rho < self.eps:
            raise ValueError("need 0 < rho < eps")
        if self.T is not None and self.T <= 1:
            raise ValueError("T must exceed 1")
        if self.panel_order < 8:
            raise ValueError("panel_order must be at least 8")


@lru_cache(maxsize=None)
def _gauss(n: int):
    x, w = np.polynomial.legendre.leggauss(n)
    return x, w


@dataclass
class _Seg:
    a: complex
    b: complex

    def length(self):
        return abs(self.b - self.a)

    def map(self, s):  # s in [-1, 1]
        return 0.5 * (self.a + self.b) + 0.5 * (self.b - self.a) * s, 0.5 * (self.b - self.a)


@dataclass
class _Arc:
    c: complex
    R: float
    th0: float
    th1: float

    def length(self):
        return abs(self.th1 - self.th0) * self.R

    def map(self, s):
        th = 0.5 * (self.th0 + self.th1) + 0.5 * (self.th1 - self.th0) * s
        e = np.exp(1j * th)
        return self.c + self.R * e, 0.5 * (self.th1 - self.th0) * 1j * self.R * e


@dataclass
class _Ray:
    """Path from ``p`` toward ``p + inf*d`` (``inward`` reverses orientation)."""

    p: complex
    d: complex
    inward: bool = False


@dataclass
class _Budget:
    panels: int = 0
    limit: int = 20_000
    errors: list = field(default_factory=list)


def _eval(f, t):
    with np.errstate(all="ignore"):
        v = np.asarray(f(t), dtype=complex)
    if v.shape != t.shape:
        v = np.broadcast_to(v, t.shape).astype(complex)
    return v


def _panel(f, piece, lo, hi, n):
    x, w = _gauss(n)
    s = 0.5 * (lo + hi) + 0.5 * (hi - lo) * x
    t, dt = piece.map(s)
    v = _eval(f, t)
    if not np.all(np.isfinite(v)):
        raise PoleOnContour(f"integrand not finite near t = {t[np.argmax(~np.isfinite(v))]}")
    mag = np.abs(v)
    med = np.median(mag)
    if mag.max() > SPIKE * max(med, 1e-300) and mag.max() > 1e-200:
        raise PoleOnContour(f"integrand spikes near t = {t[np.argmax(mag)]}")
    h = 0.5 * (hi - lo)
    return h * np.sum(w * v * dt), abs(h) * np.sum(w * mag * np.abs(dt))


def _adaptive(f, piece, lo, hi, n, tol, budget, depth=0):
    whole, _ = _panel(f, piece, lo, hi, n)
    mid = 0.5 * (lo + hi)
    left, a1 = _panel(f, piece, lo, mid, n)
    right, a2 = _panel(f, piece, mid, hi, n)
    fine = left + right
    err = abs(whole - fine)
    budget.panels += 3
    # below this the difference is rounding noise
    noise = 64 * np.finfo(float).eps * (a1 + a2)
    if err <= max(tol, noise):
        return [fine], [err + noise]
    if depth >= MAX_DEPTH or budget.panels > budget.limit:
        raise QuadratureFailure(f"no convergence on panel [{lo}, {hi}] (estimated error {err:.3g})")
    v1, e1 = _adaptive(f, piece, lo, mid, n, tol / 2, budget, depth + 1)
    v2, e2 = _adaptive(f, piece, mid, hi, n, tol / 2, budget, depth + 1)
    return v1 + v2, e1 + e2


def _integrate_finite(f, piece, n, tol_density, budget, h0=1.0):
    L = piece.length()
    if L == 0:
        return [], []
    m = max(1, math.ceil(L / h0))
    edges = np.linspace(-1.0, 1.0, m + 1)
    vals, errs = [], []
    for lo, hi in zip(edges[:-1], edges[1:]):
        sub, slo, shi = piece, lo, hi
        if isinstance(piece, _Seg):
            # reparameterize locally so node rounding scales with the panel, not the whole leg
            sub, slo, shi = _Seg(piece.map(lo)[0], piece.map(hi)[0]), -1.0, 1.0
        v, e = _adaptive(f, sub, slo, shi, n, tol_density * L / m, budget)
        vals += v
        errs += e
    return vals, errs


def _window_max(f, p, d, a, b, k=24):
    s = np.linspace(a, b, k)
    return float(np.abs(_eval(f, p + d * s)).max())


def _ray_length(f, ray: _Ray, policy: TruncationPolicy, fixed: float | None):
    """Choose the truncation length and bound the neglected tail."""
    p, d = ray.p, ray.d
    peak = _window_max(f, p, d, 0.0, 4.0, 64)
    if fixed is not None:
        L = fixed
    else:
        L = 8.0
        while _window_max(f, p, d, L - 1.0, L) > policy.tail_tol * max(peak, 1e-300) * 1e-2:
            L *= 1.5
            if L > MAX_RAY:
                raise QuadratureFailure("integrand does not decay along an infinite leg")
            peak = max(peak, _window_max(f, p, d, L / 1.5, L, 64))
    m1 = _window_max(f, p, d, L - 2.0, L - 1.0)
    m2 = _window_max(f, p, d, L - 1.0, L)
    if m2 == 0.0:
        return L, 0.0
    if m1 <= m2:
        if fixed is None:
            raise QuadratureFailure("integrand does not decay along an infinite leg")
        return L, float("inf")
    rate = math.log(m1 / m2)
    return L, m2 / rate


def _pieces(spec: ContourSpec):
    k = spec.kind
    eps, rho = spec.eps, spec.rho
    if k is ContourKind.real_line_indent_above:
        return [_Ray(-rho + 0j, -1 + 0j, inward=True), _Arc(0j, rho, math.pi, 0.0), _Ray(rho + 0j, 1 + 0j)]
    if k is ContourKind.real_line_indent_below:
        return [_Ray(-rho + 0j, -1 + 0j, inward=True), _Arc(0j, rho, math.pi, 2 * math.pi), _Ray(rho + 0j, 1 + 0j)]
    if k is ContourKind.horizontal_line:
        return [_Ray(1j * eps, -1 + 0j, inward=True), _Ray(1j * eps, 1 + 0j)]
    if k is ContourKind.c1_around_positive_integers:
        top, bot = 0.5 + 1j * eps, 0.5 - 1j * eps
        return [_Ray(top, 1 + 0j, inward=True), _Seg(top, bot), _Ray(bot, 1 + 0j)]
    if k is ContourKind.vertical_from_minus_i_infinity:
        return [_Ray(complex(spec.anchor), -1j, inward=True)]
    if k is ContourKind.segment_path:
        v = [complex(u) for u in spec.vertices]
        return [_Seg(a, b) for a, b in zip(v[:-1], v[1:])]
    if k is ContourKind.circle:
        return [_Arc(complex(spec.anchor), spec.rho, 0.0, 2 * math.pi)]
    raise ValueError(k)



def integrate_contour(f: Callable, spec: ContourSpec, policy: TruncationPolicy = DEFAULT_POLICY) -> Estimate:
    """Integrate ``f`` along ``spec``; returns the value and an error bound."""
    budget = _Budget(limit=policy.max_panels)
    n = spec.panel_order
    pieces = _pieces(spec)
    finite = []
    tails = 0.0
    for pc in pieces:
        if isinstance(pc, _Ray):
            fixed = None
            if spec.T is not None:
                fixed = max(spec.T - abs(pc.p), 1.0)
            L, tail = _ray_length(f, pc, policy, fixed)
            tails += tail
            seg = _Seg(pc.p + pc.d * L, pc.p) if pc.inward else _Seg(pc.p, pc.p + pc.d * L)
            finite.append(seg)
        else:
            finite.append(pc)
    total_len = sum(pc.length() for pc in finite)
    density = policy.quad_tol / max(total_len, 1e-300)
    vals, errs = [], []
    for pc in finite:
        h0 = 1.0 if isinstance(pc, _Seg) else max(pc.length() / 4, 1e-3)
        v, e = _integrate_finite(f, pc, n, density, budget, h0)
        vals += v
        errs += e
    # numpy's sum is pairwise and ordered by panel index
    value = complex(np.sum(np.array(vals, dtype=complex))) if vals else 0j
    return Estimate(value, float(np.sum(errs) + tails + 1e-16 * np.sum(np.abs(vals))))


# ---------------------------------------------------------------------------
# numerically safe building blocks

def exp_over_expm1(num, dens):
    """``sum_m c_m e^{a_m} / prod_j (e^{w_j} - 1)`` without overflow.

    ``num`` is a list of ``(c_m, a_m)`` pairs, ``dens`` a list of arrays.
    """
    shift = 0
    factor = 1.0
    for w in dens:
        big = w.real > 0
        with np.errstate(all="ignore"):
            ew = np.exp(np.where(big, -w, w))
            # for Re w > 0: 1/(e^w - 1) = e^{-w} / (1 - e^{-w})
            factor = factor * np.where(big, 1.0 / (1.0 - ew), -1.0 / (1.0 - ew))
        shift = shift + np.where(big, -w, 0)
    out = 0
    with np.errstate(all="ignore"):
        for c, a in num:
            out = out + c * np.exp(a + shift)
    return out * factor


def _eps_for(tau: TauVector, eps: float) -> float:
    """Keep the shifted legs clear of the poles m / tau_j."""
    gap = min(abs(t.imag) / abs(t) ** 2 for t in tau)
    return min(eps, 0.5 * gap)


def _spec(policy: TruncationPolicy, kind, **kw) -> ContourSpec:
    eps = kw.pop("eps", policy.quad_eps)
    rho = kw.pop("rho", min(policy.quad_rho, 0.5 * eps))
    return ContourSpec(kind, eps=eps, rho=rho, T=policy.quad_T, panel_order=policy.panel_order, **kw)


def q_polylog_contour(x_or_z, q_tau, policy: TruncationPolicy = DEFAULT_POLICY, *, z_given: bool = True) -> Estimate:
    """The generalized q-polylogarithm as a contour integral around 1, 2, 3, ...

    Arguments are ``z`` (``x = e^{2 pi i z}``, ``Im z > 0``) and the moduli
    ``tau_j``; the integral is ``-int_{C1} e^{2pi i z t} / (t (1 - e^{2pi i t})
    prod (1 - e^{2pi i tau_j t})) dt``.
    """
    z = complex(x_or_z)
    tau = TauVector.of(q_tau)
    if z.imag <= 0:
        raise DomainViolation("need Im z > 0")
    _check_moduli(tau.nomes, policy)
    r = len(tau) - 1
    sign = -1 if r % 2 else 1

    def f(t):
        dens = [TWO_PI_I * t] + [TWO_PI_I * tj * t for tj in tau]
        return sign * exp_over_expm1([(1.0, TWO_PI_I * z * t)], dens) / t

    spec = _spec(policy, ContourKind.c1_around_positive_integers, eps=_eps_for(tau, policy.quad_eps))
    v, e = integrate_contour(f, spec, policy)
    return Estimate(-v, e)


class GIntegralForm(str, Enum):
    c1 = "c1"
    r_plus_eps_1 = "r_plus_eps_1"
    r_plus_eps_2 = "r_plus_eps_2"


def log_g_integral_rep(r: int, z, tau, form="c1", policy: TruncationPolicy = DEFAULT_POLICY) -> Estimate:
    """Exponent of one of the three integral representations of ``G_r(z|tau)``."""
    form = GIntegralForm(form)
    tau = TauVector.of(tau)
    if len(tau) != r + 1:
        raise ValueError(f"expected {r + 1} moduli")
    z = complex(z)
    if any(t.imag <= 0 for t in tau):
        raise DomainViolation("integral representations need Im tau_j > 0")
    if not 0 < z.imag < tau.total.imag:
        raise DomainViolation("need 0 < Im z < Im |tau|")
    T = tau.total
    s = -1 if r % 2 else 1
    eps = _eps_for(tau, policy.quad_eps)
    fact = math.factorial(r + 2)
    taus = list(tau)

    if form is GIntegralForm.c1:
        def f(t):
            dens = [TWO_PI_I * t] + [TWO_PI_I * tj * t for tj in taus]
            num = [(1.0, TWO_PI_I * z * t), (s, TWO_PI_I * (T + 1 - z) * t)]
            return exp_over_expm1(num, dens) / t
        v, e = integrate_contour(f, _spec(policy, ContourKind.c1_around_positive_integers, eps=eps), policy)
        return Estimate(v, e)

    if form is GIntegralForm.r_plus_eps_1:
        pre = -TWO_PI_I / fact * multiple_bernoulli_poly(r + 2, r + 2, taus + [1])(z)

        def f(t):
            dens = [TWO_PI_I * t] + [TWO_PI_I * tj * t for tj in taus]
            num = [(-1.0, TWO_PI_I * z * t), (-s, TWO_PI_I * (T + 1 - z) * t)]
            return exp_over_expm1(num, dens) / t
    else:
        pre = TWO_PI_I / fact * multiple_bernoulli_poly(r + 2, r + 2, taus + [-1])(z)

        def f(t):
            dens = [-TWO_PI_I * t] + [TWO_PI_I * tj * t for tj in taus]
            num = [(1.0, TWO_PI_I * z * t), (s, TWO_PI_I * (T - 1 - z) * t)]
            return exp_over_expm1(num, dens) / t
    v, e = integrate_contour(f, _spec(policy, ContourKind.horizontal_line, eps=eps), policy)
    return Estimate(pre + v, e)


def g_integral_rep(r: int, z, tau, form="c1", policy: TruncationPolicy = DEFAULT_POLICY) -> Estimate:
    lv, le = log_g_integral_rep(r, z, tau, form, policy)
    v = cmath.exp(lv)
    return Estimate(v, abs(v) * le)


def _psi2_integrand(t):
    u = t - 1
    with np.errstate(all="ignore"):
        out = u / np.expm1(TWO_PI_I * u)
    # removable point at t = 1
    return np.where(np.abs(u) < 1e-300, 1 / TWO_PI_I, out)


def _nearest_bad_integer(w: complex, exclude: int = 1):
    n = round(w.real)
    cands = [n - 1, n, n + 1]
    cands = [m for m in cands if m != exclude]
    return min(cands, key=lambda m: abs(w - m))


def log_psi2(z, policy: TruncationPolicy = DEFAULT_POLICY) -> Estimate:
    """``2 pi i int_{-i inf}^{z} (t - 1) / (e^{2 pi i t} - 1) dt``."""
    z = complex(z)
    rho = policy.quad_rho
    n = _nearest_bad_integer(z)
    if abs(z - n) < rho:
        raise PoleOnContour(f"psi2 argument {z} within {rho} of the singular point {n}")
    total = 0j
    err = 0.0
    a = z
    if abs(z.real - n) < rho and z.imag > -rho:
        # vertical path would pass the singularity at n: go up beside it
        side = 1.0 if z.real >= n else -1.0
        a = complex(n + 0.5 * side, z.imag)
        v, e = integrate_contour(_psi2_integrand, _spec(policy, ContourKind.segment_path, vertices=(a, z)), policy)
        total += v
        err += e
    v, e = integrate_contour(_psi2_integrand, _spec(policy, ContourKind.vertical_from_minus_i_infinity, anchor=a), policy)
    total += v
    err += e
    return Estimate(TWO_PI_I * total, 2 * math.pi * err)


def psi2(z, policy: TruncationPolicy = DEFAULT_POLICY) -> Estimate:
    lv, le = log_psi2(z, policy)
    v = cmath.exp(lv)
    return Estimate(v, abs(v) * le)


def log_s2_equal_periods(z, policy: TruncationPolicy = DEFAULT_POLICY) -> Estimate:
    """``-int_1^z pi (t - 1) cot(pi t) dt`` along the straight segment."""
    z = complex(z)
    if z == 1:
        return Estimate(0j, 0.0)
    # distance from the segment [1, z] to the nonzero integers (in u = t - 1)
    u_end = z - 1
    for m in range(math.floor(min(0, u_end.real)) - 1, math.ceil(max(0, u_end.real)) + 2):
        if m == 0:
            continue
        s = max(0.0, min(1.0, (m * u_end.conjugate()).real / abs(u_end) ** 2))
        if abs(s * u_end - m) < policy.quad_rho:
            raise PoleOnContour(f"segment from 1 to {z} passes near the pole at {m + 1}")

    def f(t):
        u = t - 1
        with np.errstate(all="ignore"):
            out = np.pi * u / np.tan(np.pi * u)
        return np.where(np.abs(u) < 1e-300, 1.0, out)

    v, e = integrate_contour(f, _spec(policy, ContourKind.segment_path, vertices=(1 + 0j, z)), policy)
    return Estimate(-v, e)


def s2_equal_periods(z, policy: TruncationPolicy = DEFAULT_POLICY) -> Estimate:
    lv, le = log_s2_equal_periods(z, policy)
    v = cmath.exp(lv)
    return Estimate(v, abs(v) * le)
