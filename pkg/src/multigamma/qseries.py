"""q-shifted factorials and generalized q-polylogarithms.

The q-shifted factorial with moduli q_0..q_r is the (r+1)-fold product
``prod (1 - x q_0^{j_0} ... q_r^{j_r})``.  Moduli outside the unit disk are
handled by the inversion rule, which maps them inside at the cost of an
argument shift and a reciprocal.  Inside the disk the product is the
exponential of ``-Li_{r+2}(x; q)`` whenever ``|x| < 1``.

All evaluators work with logarithms internally; the branch of a returned
logarithm is arbitrary, only its exponential is meaningful.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import DivergentInput, IllConditioned, MaxTermsExceeded, PoleProximity
from .policy import DEFAULT_POLICY, Estimate, TruncationPolicy

EPS = np.finfo(float).eps
TWO_PI_I = 2j * math.pi


def nome(tau: complex) -> complex:
    return cmath.exp(TWO_PI_I * complex(tau))


@dataclass(frozen=True)
class TauVector:
    """Ordered tuple of nonreal moduli tau_0..tau_r."""

    entries: tuple[complex, ...]

    def __post_init__(self):
        entries = tuple(complex(t) for t in self.entries)
        if any(t.imag == 0 for t in entries):
            raise IllConditioned("moduli must have nonzero imaginary part")
        object.__setattr__(self, "entries", entries)

    @classmethod
    def of(cls, tau) -> "TauVector":
        if isinstance(tau, cls):
            return tau
        if isinstance(tau, (int, float, complex)):
            return cls((tau,))
        return cls(tuple(tau))

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, j):
        return self.entries[j]

    @property
    def r(self) -> int:
        return len(self.entries) - 1

    @property
    def nomes(self) -> tuple[complex, ...]:
        return tuple(nome(t) for t in self.entries)

    @property
    def total(self) -> complex:
        return sum(self.entries, 0j)

    def without(self, j: int) -> "TauVector":
        return TauVector(self.entries[:j] + self.entries[j + 1:])

    def negated(self, j: int) -> "TauVector":
        e = list(self.entries)
        e[j] = -e[j]
        return TauVector(tuple(e))

    def __neg__(self) -> "TauVector":
        return TauVector(tuple(-t for t in self.entries))


def _check_moduli(q: Sequence[complex], policy: TruncationPolicy) -> list[complex]:
    q = [complex(v) for v in q]
    for v in q:
        if abs(abs(v) - 1) < policy.unit_circle_guard:
            raise IllConditioned(f"|q| = {abs(v):.6g} is within {policy.unit_circle_guard:g} of 1")
    return q


def _reciprocal_factors(q: complex, n: np.ndarray) -> np.ndarray:
    """1 / (1 - q**n) without overflow for |q| > 1."""
    if abs(q) < 1:
        return 1.0 / (1.0 - q ** n)
    p = (1.0 / q) ** n
    return -p / (1.0 - p)


def _li_constant(q: Sequence[complex], n: int) -> float:
    c = 1.0
    for v in q:
        a = abs(v)
        c *= 1.0 / (1.0 - a ** n) if a < 1 else 1.0 / (a ** n - 1.0)
    return c


def q_polylog(x, q: Sequence[complex], policy: TruncationPolicy = DEFAULT_POLICY) -> Estimate:
    """Generalized q-polylogarithm ``sum_n x^n / (n prod_j (1 - q_j^n))``.

    The returned error combines a geometric bound on the neglected tail with
    an estimate of the rounding in the partial sum.
    """
    x = complex(x)
    q = _check_moduli(q, policy)
    ax = abs(x)
    if ax >= 1:
        raise DivergentInput(f"|x| = {ax:.6g} >= 1")
    if x == 0:
        return Estimate(0j, 0.0)
    total = 0j
    abs_total = 0.0
    start = 1
    chunk = 64
    while True:
        if start > policy.max_terms:
            raise MaxTermsExceeded(f"q-polylog needed more than {policy.max_terms} terms")
        n = np.arange(start, start + chunk, dtype=float)
        terms = x ** n / n
        for v in q:
            terms = terms * _reciprocal_factors(v, n)
        total += terms.sum()
        abs_total += np.abs(terms).sum()
        nxt = start + chunk
        tail = _li_constant(q, nxt) * ax ** nxt / (nxt * (1 - ax))
        if tail < policy.tail_tol * max(1.0, abs(total)):
            break
        start = nxt
        chunk = min(2 * chunk, 1 << 16)
    return Estimate(complex(total), float(tail + 4 * EPS * abs_total))


def _log_one_minus(w: complex, policy: TruncationPolicy) -> tuple[complex, float]:
    d = abs(1 - w)
    if d < 2 * math.pi * policy.pole_guard:
        raise PoleProximity(f"factor 1 - {w} vanishes to working precision")
    return complex(np.log1p(-w)), 2 * EPS * (1 + abs(w) / d)


def _log_inside(x: complex, q: list[complex], policy: TruncationPolicy, budget: list[int]) -> tuple[complex, float]:
    # every |q_j| < 1 here
    if not q:
        return _log_one_minus(x, policy)
    ax = abs(x)
    if ax < policy.fast_path_radius:
        li, err = q_polylog(x, q, policy)
        return -li, err
    k = min(range(len(q)), key=lambda i: abs(q[i]))
    qk = q[k]
    rest = q[:k] + q[k + 1:]
    m = max(1, math.ceil(math.log(policy.fast_path_radius / ax) / math.log(abs(qk))))
    budget[0] += m
    if budget[0] > policy.max_terms:
        raise MaxTermsExceeded("too many explicit factors in q-factorial reduction")
    val = 0j
    err = 0.0
    w = x
    for _ in range(m):
        v, e = _log_inside(w, rest, policy, budget)
        val += v
        err += e
        w *= qk
    v, e = _log_inside(w, q, policy, budget)
    return val + v, err + e


def canonical_reduction(x, q: Sequence[complex]) -> tuple[complex, list[complex], int]:
    """Map every modulus into the unit disk.

    Returns ``(x', q', k)`` with ``(x; q) = (x'; q')^{(-1)^k}``.
    Moduli are sorted canonically first; the product is symmetric in them.
    """
    q = sorted((complex(v) for v in q), key=lambda v: (abs(v) > 1, abs(v), cmath.phase(v)))
    x = complex(x)
    out = []
    k = 0
    for v in q:
        if abs(v) > 1:
            x /= v
            out.append(1 / v)
            k += 1
        else:
            out.append(v)
    return x, out, k


def log_q_shifted_factorial(x, q: Sequence[complex], policy: TruncationPolicy = DEFAULT_POLICY) -> Estimate:
    """Logarithm of ``(x; q)^{(r)}_inf`` for arbitrary moduli off the unit circle."""
    q = _check_moduli(q, policy)
    xr, qr, k = canonical_reduction(x, q)
    val, err = _log_inside(xr, qr, policy, [0])
    return Estimate(-val if k % 2 else val, err)


def q_shifted_factorial(x, q: Sequence[complex], policy: TruncationPolicy = DEFAULT_POLICY) -> Estimate:
    """``(x; q_0..q_r)^{(r)}_inf`` with the inversion rule for ``|q_j| > 1``.

    With an empty modulus list this is ``1 - x``.
    """
    lv, le = log_q_shifted_factorial(x, q, policy)
    v = cmath.exp(lv)
    return Estimate(v, abs(v) * le)


def q_shifted_factorial_product(x, q: Sequence[complex], policy: TruncationPolicy = DEFAULT_POLICY,
                                max_size: int = 50_000_000) -> Estimate:
    """Direct truncated multiple product; an independent reference for small r."""
    q = _check_moduli(q, policy)
    xr, qr, k = canonical_reduction(x, q)
    if not qr:
        val = 1 - xr
        return Estimate(val ** (-1 if k % 2 else 1), EPS)
    mags = [abs(v) for v in qr]
    denom = float(np.prod([1 - a for a in mags]))
    target = policy.tail_tol * denom / max(abs(xr), 1e-300)
    cut = []
    for a in mags:
        if a == 0:
            cut.append(1)
        else:
            cut.append(max(1, math.ceil(math.log(min(target, 0.5)) / math.log(a))))
    size = math.prod(cut)
    if size > max_size:
        raise MaxTermsExceeded(f"direct product would need {size} factors")
    grid = np.array([xr], dtype=complex)
    for v, nv in zip(qr, cut):
        grid = np.multiply.outer(grid, v ** np.arange(nv)).ravel()
    d = np.abs(1 - grid)
    if d.min() < 2 * math.pi * policy.pole_guard:
        raise PoleProximity("a factor of the product vanishes")
    logv = np.log1p(-grid).sum()
    if k % 2:
        logv = -logv
    val = cmath.exp(logv)
    tail = abs(xr) * max(a ** n for a, n in zip(mags, cut)) * len(cut) / denom
    return Estimate(val, abs(val) * (tail + 4 * EPS * size ** 0.5 + EPS * np.abs(np.log1p(-grid)).sum()))


def zero_pole_lattice(r: int, tau, window: tuple[float, float, float, float]) -> list[tuple[complex, int]]:
    """Zeros (positive order) and poles (negative order) of ``G_r(.|tau)`` in a window.

    ``window`` is ``(re_min, re_max, im_min, im_max)``; all ``Im tau_j > 0``.
    """
    tau = TauVector.of(tau)
    if len(tau) != r + 1:
        raise ValueError(f"expected {r + 1} moduli, got {len(tau)}")
    if any(t.imag <= 0 for t in tau):
        raise ValueError("zero_pole_lattice needs Im tau_j > 0")
    re0, re1, im0, im1 = window
    if not (re1 > re0 and im1 > im0):
        raise ValueError("degenerate window")
    found: dict[tuple[float, float], list] = {}

    def emit(base: complex, order: int):
        for m in range(math.ceil(re0 - base.real), math.floor(re1 - base.real) + 1):
            p = base + m
            if im0 <= p.imag <= im1:
                key = (round(p.real, 9), round(p.imag, 9))
                slot = found.setdefault(key, [p, 0])
                slot[1] += order

    def walk(j: int, acc: complex, lo: int, sign: int, order: int):
        if j == len(tau):
            emit(acc, order)
            return
        c = lo
        while True:
            p = acc + sign * c * tau[j]
            # imaginary parts move monotonically away from the real axis
            if sign < 0 and p.imag < im0 - 1e-12:
                break
            if sign > 0 and p.imag > im1 + 1e-12:
                break
            walk(j + 1, p, lo, sign, order)
            c += 1

    walk(0, 0j, 0, -1, 1 if r % 2 == 0 else -1)
    walk(0, 0j, 1, +1, 1)
    pts = [(complex(p), o) for p, o in found.values() if o != 0]
    return sorted(pts, key=lambda t: (t[0].imag, t[0].real))
