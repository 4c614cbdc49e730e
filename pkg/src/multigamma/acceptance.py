"""The acceptance suite: eight criteria with configurable sample counts.

``run_all(scale=1.0)`` runs every criterion at full size; ``selftest`` in
the CLI uses a reduced scale.  Each criterion catches library errors and
reports them as failures, so a tampered policy produces red verdicts rather
than a crash.
"""

from __future__ import annotations

import cmath
import math
import time
import warnings
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np
from numpy.polynomial import Polynomial

from . import identities as idt
from .bernoulli import multiple_bernoulli_poly, q_cubic, q_cubic_coeffs
from .errors import MultigammaError, SlowConvergenceWarning
from .policy import DEFAULT_POLICY, TruncationPolicy
from .quadrature import psi2
from .registry import sweep

COEFF_TOL = 1e-12


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    metrics: dict[str, Any] = field(default_factory=dict)
    failures: list[str] = field(default_factory=list)
    seconds: float = 0.0

    def line(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        return f"[{verdict}] criterion {self.number}: {self.title} ({self.seconds:.1f}s)"

    def as_dict(self) -> dict[str, Any]:
        return {"criterion": self.number, "title": self.title, "pass": self.passed,
                "metrics": self.metrics, "failures": self.failures[:20], "seconds": round(self.seconds, 3)}


def _n(count: int, scale: float, floor: int = 3) -> int:
    return max(floor, int(round(count * scale)))


class _Tally:
    def __init__(self):
        self.metrics: dict[str, Any] = {}
        self.failures: list[str] = []

    def bound(self, key: str, value: float, limit: float):
        old = self.metrics.get(key, {"max": 0.0, "limit": limit})
        old["max"] = max(old["max"], float(value))
        self.metrics[key] = old
        if not value < limit:
            self.failures.append(f"{key}: {value:.3g} >= {limit:g}")

    def require(self, key: str, ok: bool, note: str = ""):
        self.metrics.setdefault(key, True)
        if not ok:
            self.metrics[key] = False
            self.failures.append(f"{key}{': ' + note if note else ''}")

    def guard(self, key: str, fn: Callable[[], None]):
        try:
            fn()
        except MultigammaError as exc:
            self.failures.append(f"{key}: {type(exc).__name__}: {exc}")


def _timed(number: int, title: str, body: Callable[[_Tally], None]) -> CriterionResult:
    t0 = time.perf_counter()
    tally = _Tally()
    try:
        body(tally)
    except MultigammaError as exc:
        tally.failures.append(f"{type(exc).__name__}: {exc}")
    return CriterionResult(number, title, not tally.failures, tally.metrics, tally.failures,
                           time.perf_counter() - t0)


# --- polynomial helpers ------------------------------------------------------

def _poly(r, n, omega) -> Polynomial:
    return Polynomial(np.array(multiple_bernoulli_poly(r, n, list(omega)).coeffs, dtype=complex))


def coeff_gap(a: Polynomial, b: Polynomial) -> float:
    """Largest coefficient difference relative to the largest coefficient."""
    n = max(len(a.coef), len(b.coef))
    ca = np.zeros(n, complex)
    cb = np.zeros(n, complex)
    ca[:len(a.coef)] = a.coef
    cb[:len(b.coef)] = b.coef
    return float(np.max(np.abs(ca - cb)) / max(1.0, np.max(np.abs(ca)), np.max(np.abs(cb))))


def _affine(a, b) -> Polynomial:
    """The polynomial ``a + b z``."""
    return Polynomial(np.array([a, b], dtype=complex))


def _periods(rng, r):
    return [rng.uniform(0.5, 2.0) * cmath.exp(1j * rng.uniform(0, 2 * math.pi)) for _ in range(r)]


# --- criteria ------------------------------------------------------------------

def criterion_1(scale: float = 1.0, seed: int = 0, policy: TruncationPolicy = DEFAULT_POLICY) -> CriterionResult:
    """Bernoulli relations as exact coefficient identities."""
    def body(t: _Tally):
        rng = np.random.default_rng([seed, 1])
        for _ in range(_n(20, scale)):
            full = _periods(rng, 4)
            c = rng.uniform(0.5, 2.0) * cmath.exp(1j * rng.uniform(0, 2 * math.pi))
            for r in range(1, 5):
                om = full[:r]
                tot = sum(om)
                for n in range(0, 7):
                    B = _poly(r, n, om)
                    # homogeneity
                    scaled = _poly(r, n, [c * w for w in om])(_affine(0, c))
                    t.bound("homogeneity", coeff_gap(scaled, c ** (n - r) * B), COEFF_TOL)
                    t.bound("reflection", coeff_gap(B(_affine(tot, -1)), (-1) ** n * B), COEFF_TOL)
                    if n >= 1:
                        t.bound("derivative", coeff_gap(B.deriv(), n * _poly(r, n - 1, om)), COEFF_TOL)
                    for j in range(r):
                        rest = om[:j] + om[j + 1:]
                        neg = om[:j] + [-om[j]] + om[j + 1:]
                        lower = n * _poly(r - 1, n - 1, rest) if n >= 1 else Polynomial([0j])
                        shifted = B(_affine(om[j], 1))
                        t.bound("shift", coeff_gap(shifted - B, lower), COEFF_TOL)
                        t.bound("sign_flip", coeff_gap(_poly(r, n, neg), -shifted), COEFF_TOL)
                        t.bound("sum_rule", coeff_gap(B + _poly(r, n, neg), -lower), COEFF_TOL)
                    perm = list(rng.permutation(r))
                    t.bound("permutation", coeff_gap(_poly(r, n, [om[p] for p in perm]), B), COEFF_TOL)
            w1, w2, w3 = full[:3]
            printed = {
                "B11": (_poly(1, 1, [w1]), Polynomial([-0.5, 1 / w1])),
                "B22": (_poly(2, 2, [w1, w2]), Polynomial([
                    (w1 ** 2 + w2 ** 2 + 3 * w1 * w2) / (6 * w1 * w2), -(w1 + w2) / (w1 * w2), 1 / (w1 * w2)])),
                "B33": (_poly(3, 3, [w1, w2, w3]), Polynomial([
                    -(w1 + w2 + w3) * (w1 * w2 + w2 * w3 + w3 * w1) / (4 * w1 * w2 * w3),
                    (w1 ** 2 + w2 ** 2 + w3 ** 2 + 3 * (w1 * w2 + w2 * w3 + w3 * w1)) / (2 * w1 * w2 * w3),
                    -3 * (w1 + w2 + w3) / (2 * w1 * w2 * w3),
                    1 / (w1 * w2 * w3)])),
            }
            for key, (a, b) in printed.items():
                t.bound(f"printed_{key}", coeff_gap(a, b), COEFF_TOL)
        # equal periods: falling factorial and the recurrence in r
        for r in range(1, 5):
            ones = [1.0] * (r + 1)
            falling = Polynomial([1.0])
            for k in range(1, r + 1):
                falling = falling * Polynomial([-k, 1.0])
            t.bound("falling_factorial", coeff_gap(_poly(r + 1, r, ones), falling), COEFF_TOL)
            for n in range(1, 7):
                lhs = r * _poly(r + 1, n, ones)(_affine(1, 1))
                rhs = (r - n) * _poly(r, n, ones[:r]) + n * Polynomial([0, 1.0]) * _poly(r, n - 1, ones[:r])
                t.bound("equal_period_recurrence", coeff_gap(lhs, rhs), COEFF_TOL)
    return _timed(1, "Bernoulli relations are exact coefficient identities", body)


def criterion_2(scale: float = 1.0, seed: int = 0, policy: TruncationPolicy = DEFAULT_POLICY) -> CriterionResult:
    """The explicit cubic equals -B33(z|tau,sigma,-1)/3."""
    def body(t: _Tally):
        rng = np.random.default_rng([seed, 2])
        for _ in range(_n(50, scale)):
            tau, sigma = _periods(rng, 2)
            z = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
            q = q_cubic(z, tau, sigma)
            b = -multiple_bernoulli_poly(3, 3, (tau, sigma, -1))(z) / 3
            t.bound("relative", abs(q - b) / max(abs(q), abs(b)), 1e-12)
            b_coeffs = -np.array(multiple_bernoulli_poly(3, 3, (tau, sigma, -1)).coeffs) / 3
            t.bound("coefficients", coeff_gap(Polynomial(q_cubic_coeffs(tau, sigma)), Polynomial(b_coeffs)), 1e-12)
    return _timed(2, "cubic exponent equals -B33/3", body)


def _sweep_bound(t: _Tally, key: str, name: str, count: int, seed: int, policy, limit: float, **opts):
    res = sweep(name, count, seed, policy, **opts)
    t.bound(key, res.max_residual, limit)
    t.require(f"{key}_verdicts", res.passed, f"{res.pass_count}/{res.count}")
    return res


def criterion_3(scale: float = 1.0, seed: int = 0, policy: TruncationPolicy = DEFAULT_POLICY) -> CriterionResult:
    """q-series relations at >= 100 samples each, r <= 3, mixed moduli."""
    def body(t: _Tally):
        count = _n(100, scale)
        for kind in idt.QRelation:
            res = None

            def run():
                nonlocal res
                res = _sweep_bound(t, kind.value, "q_relations", count, seed, policy, 1e-9, kind=kind.value)
            t.guard(kind.value, run)
            if res is not None and kind is not idt.QRelation.li_product:
                outside = sum(any(abs(complex(v)) > 1 for v in r.sample["q"]) for r in res.reports)
                t.metrics[f"{kind.value}_samples_with_outer_modulus"] = outside
                t.require(f"{kind.value}_mixed_moduli", outside > 0)
                t.metrics[f"{kind.value}_max_r"] = max(len(r.sample["q"]) - 1 for r in res.reports)
    return _timed(3, "q-series relations and product vs exp(-Li)", body)


def criterion_4(scale: float = 1.0, seed: int = 0, policy: TruncationPolicy = DEFAULT_POLICY) -> CriterionResult:
    """Upper and lower product representations of S_r; literal S_2/S_3."""
    def body(t: _Tally):
        for r in (2, 3):
            t.guard(f"variants_r{r}", lambda r=r: _sweep_bound(
                t, f"variants_r{r}", "sine_variants", _n(100, scale), seed, policy, 1e-9, r=r))
            t.guard(f"literal_r{r}", lambda r=r: _sweep_bound(
                t, f"literal_r{r}", "sine_literal", _n(50, scale), seed, policy, 1e-10, r=r))
    return _timed(4, "product representations of S_r agree", body)


def criterion_5(scale: float = 1.0, seed: int = 0, policy: TruncationPolicy = DEFAULT_POLICY) -> CriterionResult:
    """Indented-line integrals of S_r against the products; residue of the notch."""
    def body(t: _Tally):
        for r in (1, 2, 3):
            t.guard(f"integral_r{r}", lambda r=r: _sweep_bound(
                t, f"integral_r{r}", "sine_integral", _n(20, scale), seed, policy, 1e-6, r=r))
        t.guard("residue", lambda: _sweep_bound(t, "residue", "indent_residue", _n(20, scale), seed, policy, 1e-8))
    return _timed(5, "integral vs product for S_r, notch residue", body)


MODULAR_SWEEPS = (
    [("gamma_product", {"r": 2}), ("gamma_product", {"r": 3})]
    + [("modular", {"r": r, "sign": s}) for r in (0, 1, 2) for s in ("minus_one", "plus_one")]
    + [("jacobi", {}), ("felder_varchenko", {})]
    + [("g2_modular", {"sign": s}) for s in ("minus_one", "plus_one")]
)


def _label(name, opts):
    return name + "".join(f"_{k}{v}" for k, v in opts.items())


def criterion_6(scale: float = 1.0, seed: int = 0, policy: TruncationPolicy = DEFAULT_POLICY) -> CriterionResult:
    """Modular theorems at 50-sample sweeps."""
    def body(t: _Tally):
        for name, opts in MODULAR_SWEEPS:
            key = _label(name, opts)
            t.guard(key, lambda name=name, opts=opts, key=key: _sweep_bound(
                t, key, name, _n(50, scale), seed, policy, policy.threshold_series, **opts))
    return _timed(6, "modular theorems pass seeded sweeps", body)


def _decreasing(history: dict[int, float], floor: float = 1e-13) -> bool:
    vals = [history[k] for k in sorted(history)]
    return all(b < a or (a <= floor and b <= floor) for a, b in zip(vals, vals[1:]))


def criterion_7(scale: float = 1.0, seed: int = 0, policy: TruncationPolicy = DEFAULT_POLICY) -> CriterionResult:
    """Integral forms of G_r, summation formulas, psi_2, and Gamma(z, tau, tau)."""
    def body(t: _Tally):
        for r in (0, 1):
            for form in ("c1", "r_plus_eps_1", "r_plus_eps_2"):
                key = f"g_integral_r{r}_{form}"
                t.guard(key, lambda r=r, form=form, key=key: _sweep_bound(
                    t, key, "g_integral", _n(20, scale), seed, policy, 1e-6, r=r, form=form))
        for which in ("theta", "elliptic_gamma"):
            key = f"summation_{which}"
            t.guard(key, lambda which=which, key=key: _sweep_bound(
                t, key, "summation", _n(20, scale), seed, policy, 1e-9, which=which))

        def psi_one():
            v = psi2(1.0, policy).value
            t.bound("psi2_at_1", abs(v - cmath.exp(1j * math.pi / 12)), 1e-9)
        t.guard("psi2_at_1", psi_one)
        for kind in ("s2_direct", "s2_reflected"):
            t.guard(kind, lambda kind=kind: _sweep_bound(
                t, f"psi2_{kind}", "psi2", _n(20, scale), seed, policy, 1e-8, kind=kind))

        def tau_tau():
            samples = [(0.3 + 0.8j, 1j)]
            res = sweep("equal_period_gamma", _n(10, scale), seed, policy, K=20)
            samples += [(r.sample["z"], r.sample["tau"]) for r in res.reports]
            for z, tau in samples:
                rep = idt.check_equal_period_gamma(z, tau, 20, policy)
                t.bound("gamma_tau_tau_final", rep.rel_residual, 1e-5)
                t.require("gamma_tau_tau_decreasing", _decreasing(rep.extra["history"]),
                          f"z={z}, tau={tau}: {rep.extra['history']}")
        t.guard("gamma_tau_tau", tau_tau)
    return _timed(7, "integral forms of G_r, summation formulas, psi_2 layer", body)


NEGATIVE_CONTROLS = (
    list(MODULAR_SWEEPS)
    + [("sine_product", {"r": r, "sign": s}) for r in (0, 1) for s in ("minus_one", "plus_one")]
    + [("equal_period_gamma", {}), ("indent_residue", {})]
    + [("psi2", {"kind": k}) for k in ("reflection", "s2_direct", "s2_reflected")]
    + [("g_integral", {"r": r, "form": f}) for r in (0, 1) for f in ("r_plus_eps_1", "r_plus_eps_2")]
)


def criterion_8(scale: float = 1.0, seed: int = 0, policy: TruncationPolicy = DEFAULT_POLICY) -> CriterionResult:
    """A 1e-4 shift of the constant term in every Bernoulli exponent must fail every sample."""
    tampered = policy.with_(prefactor_shift=1e-4)

    def body(t: _Tally):
        for name, opts in NEGATIVE_CONTROLS:
            key = _label(name, opts)

            def run(name=name, opts=opts, key=key):
                res = sweep(name, _n(50, scale), seed, tampered, **opts)
                t.metrics[key] = f"{res.pass_count}/{res.count}"
                t.require(f"{key}_all_fail", res.pass_count == 0, f"{res.pass_count}/{res.count} passed")
            t.guard(key, run)
    return _timed(8, "negative controls fail every sample", body)


CRITERIA = (criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7, criterion_8)


def run_all(scale: float = 1.0, seed: int = 0, policy: TruncationPolicy = DEFAULT_POLICY,
            progress: Callable[[CriterionResult], None] | None = None) -> list[CriterionResult]:
    out = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", SlowConvergenceWarning)
        for crit in CRITERIA:
            res = crit(scale, seed, policy)
            out.append(res)
            if progress:
                progress(res)
    return out
