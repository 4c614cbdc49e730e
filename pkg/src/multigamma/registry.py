"""Named identity checks with seeded random samplers for sweeps.

Each entry couples a check function with a sampler that draws keyword
arguments from a box in parameter space.  Samples that fail a precondition
(sampler returns ``None`` or the check raises :class:`InadmissibleSample`)
are redrawn, so a sweep of ``count`` samples always reports ``count``
verdicts.  Sample ``i`` of a sweep with seed ``s`` uses the generator
``numpy.random.default_rng([s, i])``, which makes every report reproducible
on its own.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

from . import identities as idt
from .errors import InadmissibleSample
from .gammafuncs import GammaRelation, check_g_functional_equation
from .multisine import SineRelation, check_sine_relations
from .policy import DEFAULT_POLICY, TruncationPolicy
from .report import IdentityReport

MAX_ATTEMPTS = 500
# values this small sit next to a zero of one side; their residuals say
# nothing about relative accuracy
MAGNITUDE_FLOOR = 1e-2


def _c(rng, re, im) -> complex:
    return complex(rng.uniform(*re), rng.uniform(*im))


def _upper(rng, re=(-0.5, 0.5), im=(0.6, 1.4)) -> complex:
    return _c(rng, re, im)


def _polar(rng, mod=(0.7, 1.4), arg=(0.0, 2 * math.pi)) -> complex:
    return rng.uniform(*mod) * complex(math.cos(a := rng.uniform(*arg)), math.sin(a))


def _ratios_ok(vals, margin) -> bool:
    return all(abs((a / b).imag) >= margin for i, a in enumerate(vals) for j, b in enumerate(vals) if i != j)


def _pick(rng, opt, choices, index):
    """An explicit option wins; otherwise cycle through ``choices`` by sample index."""
    if opt is not None:
        return opt
    return choices[index % len(choices)]


# samplers: (rng, index, options) -> kwargs or None

def _s_gamma_product(rng, i, o):
    r = int(_pick(rng, o.get("r"), (2, 3), i))
    om = [_polar(rng) for _ in range(r)]
    if not _ratios_ok(om, 0.2):
        return None
    return dict(r=r, z=_c(rng, (-0.6, 0.6), (-0.6, 0.6)), omega=om)


def _s_modular(rng, i, o):
    r = int(_pick(rng, o.get("r"), (0, 1, 2), i))
    sign = _pick(rng, o.get("sign"), ("minus_one", "plus_one"), i // 3 if o.get("r") is None else i)
    tau = [_upper(rng) * (-1 if rng.uniform() < 0.25 else 1) for _ in range(r + 1)]
    if not _ratios_ok(tau, 0.15):
        return None
    return dict(r=r, z=_c(rng, (-0.5, 0.5), (-0.4, 0.4)), tau=tau, sign=sign)


def _s_jacobi(rng, i, o):
    tau = _upper(rng)
    return dict(z=_c(rng, (-0.5, 0.5), (0.05 * tau.imag, 0.95 * tau.imag)), tau=tau)


def _s_fv(rng, i, o):
    tau, sigma = _upper(rng), _upper(rng)
    if (tau / sigma).imag < 0.1:
        return None
    hi = (tau + sigma).imag
    return dict(z=_c(rng, (-0.5, 0.5), (0.1 * hi, 0.9 * hi)), tau=tau, sigma=sigma)


def _s_g2(rng, i, o):
    t = sorted((_upper(rng, re=(-0.8, 0.8)) for _ in range(3)), key=lambda v: -math.atan2(v.imag, v.real))
    if min((t[0] / t[1]).imag, (t[0] / t[2]).imag, (t[1] / t[2]).imag) < 0.1:
        return None
    hi = sum(t).imag
    sign = _pick(rng, o.get("sign"), ("minus_one", "plus_one"), i)
    return dict(z=_c(rng, (-0.5, 0.5), (0.1 * hi, 0.9 * hi)), tau=t, sign=sign)


def _s_summation(rng, i, o):
    which = _pick(rng, o.get("which"), ("theta", "elliptic_gamma"), i)
    params = [_upper(rng)] if which == "theta" else [_upper(rng), _upper(rng)]
    hi = sum(params).imag
    return dict(which=which, z=_c(rng, (-0.5, 0.5), (0.15 * hi, 0.85 * hi)), params=params)


def _s_sine_product(rng, i, o):
    r = int(_pick(rng, o.get("r"), (0, 1), i))
    sign = _pick(rng, o.get("sign"), ("minus_one", "plus_one"), i // 2 if o.get("r") is None else i)
    tau = [_upper(rng, im=(0.8, 1.6)) for _ in range(r + 1)]
    if not _ratios_ok(tau, 0.15):
        return None
    hi = sum(tau).imag
    return dict(r=r, z=_c(rng, (-0.5, 0.5), (0.1 * hi, 0.9 * hi)), tau=tau,
                K=int(o.get("K") or 20), sign=sign)


def _s_equal_period(rng, i, o):
    tau = _upper(rng, im=(0.7, 1.3))
    return dict(z=_c(rng, (-0.5, 0.5), (0.2 * tau.imag, 1.8 * tau.imag)), tau=tau, K=int(o.get("K") or 20))


def _mixed_tau(rng, n):
    return [_upper(rng) * (-1 if rng.uniform() < 0.3 else 1) for _ in range(n)]


def _s_g_functional(rng, i, o):
    kind = _pick(rng, o.get("kind"), [k.value for k in GammaRelation], i)
    r = int(_pick(rng, o.get("r"), (0, 1, 2), i // len(GammaRelation)))
    if kind in ("shift_period", "pair") and r == 0:
        r = 1
    tau = _mixed_tau(rng, r + 1)
    return dict(kind=kind, r=r, z=_c(rng, (-0.5, 0.5), (-0.5, 0.5)), tau=tau, j=int(rng.integers(r + 1)))


def _s_sine_relations(rng, i, o):
    kind = _pick(rng, o.get("kind"), [k.value for k in SineRelation], i)
    r = int(_pick(rng, o.get("r"), (2, 3), i // 2))
    om = [_polar(rng) for _ in range(r)]
    if not _ratios_ok(om, 0.15):
        return None
    return dict(kind=kind, r=r, z=_c(rng, (-0.8, 0.8), (-0.8, 0.8)), omega=om, j=int(rng.integers(r)))


def _q_moduli(rng, n, small_only=False, hi=0.7):
    out = []
    for _ in range(n):
        q = _polar(rng, mod=(0.1, hi))
        out.append(q if small_only or rng.uniform() < 0.6 else 1 / q)
    return out


def _s_q_relation(rng, i, o):
    kind = _pick(rng, o.get("kind"), [k.value for k in idt.QRelation], i)
    r = int(_pick(rng, o.get("r"), (0, 1, 2, 3), i // len(idt.QRelation)))
    if kind == "li_product":
        q = _q_moduli(rng, r + 1, small_only=True, hi=0.35 if r == 3 else 0.7)
        x = _polar(rng, mod=(0.05, 0.85))
    elif kind == "li_reflection":
        q = _q_moduli(rng, r + 1)
        x = _polar(rng, mod=(0.05, 0.85))
    else:
        q = _q_moduli(rng, r + 1)
        x = _polar(rng, mod=(0.1, 3.0))
    if kind in ("inversion", "shift") and r and all(abs(v) < 1 for v in q):
        # make sure mixed sign patterns are exercised
        q[0] = 1 / q[0]
    return dict(kind=kind, x=x, q=q, j=int(rng.integers(r + 1)))


def _s_sine_variants(rng, i, o):
    r = int(_pick(rng, o.get("r"), (2, 3), i))
    om = [_polar(rng) for _ in range(r)]
    if not _ratios_ok(om, 0.15):
        return None
    return dict(r=r, z=_c(rng, (-1.0, 1.0), (-1.0, 1.0)), omega=om)


def _s_sine_literal(rng, i, o):
    # the literal products want Im(w_j/w_k) > 0 for j < k: decreasing arguments within a half turn
    r = int(_pick(rng, o.get("r"), (2, 3), i))
    base = rng.uniform(0, 2 * math.pi)
    args = sorted(rng.uniform(0, math.pi, r), reverse=True)
    om = [_polar(rng, arg=(base + a, base + a)) for a in args]
    if not _ratios_ok(om, 0.15):
        return None
    return dict(r=r, z=_c(rng, (-1.0, 1.0), (-1.0, 1.0)), omega=om, lower=bool(i % 2))


def _right_half_periods(rng, r):
    om = [_polar(rng, mod=(0.8, 1.3), arg=(-1.0, 1.0)) for _ in range(r)]
    if r > 1 and not _ratios_ok(om, 0.15):
        return None
    return om


def _s_sine_integral(rng, i, o):
    r = int(_pick(rng, o.get("r"), (1, 2, 3), i))
    om = _right_half_periods(rng, r)
    if om is None:
        return None
    re = sum(om).real
    return dict(r=r, z=_c(rng, (0.15 * re, 0.85 * re), (-0.3, 0.3)), omega=om,
                side=_pick(rng, o.get("side"), ("plus_i0", "minus_i0"), i // 3))


def _s_indent(rng, i, o):
    d = _s_sine_integral(rng, i, o)
    if d is not None:
        d.pop("side")
    return d


def _s_g_integral(rng, i, o):
    r = int(_pick(rng, o.get("r"), (0, 1), i))
    form = _pick(rng, o.get("form"), ("c1", "r_plus_eps_1", "r_plus_eps_2"), i // 2)
    tau = [_upper(rng) for _ in range(r + 1)]
    hi = sum(tau).imag
    return dict(r=r, z=_c(rng, (-0.5, 0.5), (0.15 * hi, 0.85 * hi)), tau=tau, form=form)


def _s_li_contour(rng, i, o):
    r = int(_pick(rng, o.get("r"), (0, 1, 2), i))
    tau = [_upper(rng) * (-1 if rng.uniform() < 0.3 else 1) for _ in range(r + 1)]
    return dict(z=_c(rng, (-0.5, 0.5), (0.05, 0.8)), tau=tau)


def _s_psi2(rng, i, o):
    kind = _pick(rng, o.get("kind"), [k.value for k in idt.Psi2Relation], i)
    return dict(kind=kind, z=_c(rng, (0.15, 1.85), (-0.5, 0.5)))


@dataclass(frozen=True)
class IdentityEntry:
    name: str
    check: Callable[..., IdentityReport]
    sampler: Callable[[Any, int, dict], dict | None]
    summary: str
    aliases: tuple[str, ...] = ()
    options: tuple[str, ...] = ()
    quadrature: bool = False
    # additive identities have no zero to stay away from
    floor: float = MAGNITUDE_FLOOR


REGISTRY: dict[str, IdentityEntry] = {}
ALIASES: dict[str, str] = {}


def _register(entry: IdentityEntry):
    REGISTRY[entry.name] = entry
    for a in entry.aliases:
        ALIASES[a] = entry.name


for _e in (
    IdentityEntry("gamma_product", idt.check_gamma_product_identity, _s_gamma_product,
                  "product of G_{r-2} over period ratios equals a Bernoulli exponential",
                  ("thm4.1",), ("r",)),
    IdentityEntry("modular", idt.check_modular_transformation, _s_modular,
                  "modular transformation of G_r with period -1 or +1 appended", ("thm4.2",), ("r", "sign")),
    IdentityEntry("jacobi", idt.check_jacobi, _s_jacobi, "theta transformation under tau -> -1/tau"),
    IdentityEntry("felder_varchenko", idt.check_felder_varchenko, _s_fv,
                  "three-term modular relation of the elliptic gamma function", ("fv",)),
    IdentityEntry("g2_modular", idt.check_g2_modular, _s_g2, "three-factor modular formula for G_2",
                  ("g2",), ("sign",)),
    IdentityEntry("summation", idt.check_summation_formula, _s_summation,
                  "trigonometric series for theta0 and the elliptic gamma", (), ("which",)),
    IdentityEntry("sine_product", idt.check_sine_product_expansion, _s_sine_product,
                  "G_r as a product of multiple sine factors", ("thm5.6",), ("r", "sign", "K")),
    IdentityEntry("equal_period_gamma", idt.check_equal_period_gamma, _s_equal_period,
                  "Gamma(z, tau, tau) as a psi_2 product", ("gamma_tau_tau",), ("K",), True),
    IdentityEntry("g_functional", check_g_functional_equation, _s_g_functional,
                  "functional equations of G_r", (), ("kind", "r")),
    IdentityEntry("sine_relations", check_sine_relations, _s_sine_relations,
                  "shift and reflection of S_r", (), ("kind", "r")),
    IdentityEntry("q_relations", idt.check_q_relation, _s_q_relation,
                  "q-shifted factorial and q-polylogarithm relations", (), ("kind", "r")),
    IdentityEntry("sine_variants", idt.check_sine_product_variants, _s_sine_variants,
                  "upper and lower product representations of S_r agree", (), ("r",)),
    IdentityEntry("sine_literal", idt.check_sine_literal, _s_sine_literal,
                  "literal double/triple sine products against the generic evaluator", (), ("r",)),
    IdentityEntry("sine_integral", idt.check_sine_integral, _s_sine_integral,
                  "indented-line integral of S_r against the product", (), ("r", "side"), True),
    IdentityEntry("indent_residue", idt.check_indent_residue, _s_indent,
                  "notch-side difference of the S_r integral equals the residue", (), ("r",), True, 0.0),
    IdentityEntry("g_integral", idt.check_g_integral, _s_g_integral,
                  "integral representations of G_r against the product", (), ("r", "form"), True),
    IdentityEntry("li_contour", idt.check_li_contour, _s_li_contour,
                  "contour integral of the q-polylogarithm against its series", (), ("r",), True, 0.0),
    IdentityEntry("psi2", idt.check_psi2_relation, _s_psi2,
                  "psi_2 reflection and equal-period double sine relations", (), ("kind",), True),
):
    _register(_e)


def resolve(name: str) -> IdentityEntry:
    key = ALIASES.get(name, name)
    try:
        return REGISTRY[key]
    except KeyError:
        raise KeyError(f"unknown identity {name!r}") from None


@dataclass
class SweepResult:
    identity: str
    seed: int
    reports: list[IdentityReport] = field(default_factory=list)
    redraws: int = 0

    @property
    def count(self) -> int:
        return len(self.reports)

    @property
    def pass_count(self) -> int:
        return sum(r.passed for r in self.reports)

    @property
    def max_residual(self) -> float:
        return max((r.rel_residual for r in self.reports), default=0.0)

    @property
    def passed(self) -> bool:
        return self.pass_count == self.count

    def summary(self) -> dict[str, Any]:
        return {"identity": self.identity, "count": self.count, "pass_count": self.pass_count,
                "max_residual": self.max_residual, "seed": self.seed, "redraws": self.redraws}


def draw(entry: IdentityEntry, seed: int, index: int, policy: TruncationPolicy = DEFAULT_POLICY,
         options: dict | None = None) -> tuple[IdentityReport, int]:
    """Draw admissible sample ``index`` and check it; returns (report, redraws)."""
    options = {k: v for k, v in (options or {}).items() if v is not None}
    rng = np.random.default_rng([seed, index])
    for attempt in range(MAX_ATTEMPTS):
        kwargs = entry.sampler(rng, index, options)
        if kwargs is None:
            continue
        try:
            rep = entry.check(**kwargs, policy=policy)
        except InadmissibleSample:
            continue
        if min(abs(rep.lhs), abs(rep.rhs)) < entry.floor:
            continue
        rep.sample.update(seed=seed, index=index)
        return rep, attempt
    raise InadmissibleSample(f"no admissible sample for {entry.name} after {MAX_ATTEMPTS} draws")


def sweep(identity: str, count: int, seed: int = 0, policy: TruncationPolicy = DEFAULT_POLICY,
          **options) -> SweepResult:
    """Check ``identity`` at ``count`` seeded admissible samples."""
    if count < 1:
        raise ValueError("count must be at least 1")
    entry = resolve(identity)
    unknown = set(k for k, v in options.items() if v is not None) - set(entry.options)
    if unknown:
        raise ValueError(f"{entry.name} does not take options {sorted(unknown)}")
    res = SweepResult(entry.name, seed)
    for i in range(count):
        rep, redraws = draw(entry, seed, i, policy, options)
        res.reports.append(rep)
        res.redraws += redraws
    return res
