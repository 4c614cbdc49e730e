"""Multiple Bernoulli polynomials.

``B_{r,n}(z | w_1..w_r)`` is defined by the generating function

    t^r e^{zt} / prod_j (e^{w_j t} - 1) = sum_n B_{r,n}(z|w) t^n / n!

Each factor ``w t / (e^{w t} - 1)`` is expanded with the classical
Bernoulli numbers, which are seeded as exact rationals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .errors import TruncationCapacity

MAX_CLASSICAL = 64
DEFAULT_MAX_ORDER = 16


@dataclass(frozen=True)
class PeriodVector:
    """Ordered tuple of nonzero complex quasi-periods."""

    entries: tuple[complex, ...]

    def __post_init__(self):
        entries = tuple(complex(w) for w in self.entries)
        if any(w == 0 for w in entries):
            raise ValueError("periods must be nonzero")
        object.__setattr__(self, "entries", entries)

    @classmethod
    def of(cls, omega: "PeriodVector | Iterable[complex] | complex") -> "PeriodVector":
        if isinstance(omega, cls):
            return omega
        if isinstance(omega, (int, float, complex)):
            return cls((omega,))
        return cls(tuple(omega))

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, j):
        return self.entries[j]

    @property
    def total(self) -> complex:
        return sum(self.entries, 0j)

    def without(self, j: int) -> "PeriodVector":
        return PeriodVector(self.entries[:j] + self.entries[j + 1:])

    def negated(self, j: int) -> "PeriodVector":
        e = list(self.entries)
        e[j] = -e[j]
        return PeriodVector(tuple(e))

    def scaled(self, c: complex) -> "PeriodVector":
        return PeriodVector(tuple(c * w for w in self.entries))

    def appended(self, w: complex) -> "PeriodVector":
        return PeriodVector(self.entries + (complex(w),))


@dataclass(frozen=True)
class BernoulliPoly:
    """Coefficients of ``B_{r,n}(z|w)`` in ascending powers of z."""

    r: int
    n: int
    coeffs: tuple[complex, ...]

    def __call__(self, z):
        return horner(self.coeffs, z)

    def derivative(self) -> tuple[complex, ...]:
        return tuple(k * c for k, c in enumerate(self.coeffs))[1:]


def horner(coeffs: Sequence[complex], z):
    acc = 0j
    for c in reversed(coeffs):
        acc = acc * z + c
    return acc


@lru_cache(maxsize=1)
def _classical_table() -> tuple[Fraction, ...]:
    table = [Fraction(1)]
    for m in range(1, MAX_CLASSICAL + 1):
        # sum_{j<=m} C(m+1, j) B_j = 0
        s = sum(math.comb(m + 1, j) * table[j] for j in range(m))
        table.append(-s / (m + 1))
    return tuple(table)


def classical_bernoulli_numbers(k_max: int) -> tuple[Fraction, ...]:
    """Exact Bernoulli numbers ``B_0..B_{k_max}`` with ``B_1 = -1/2``."""
    if not 0 <= k_max <= MAX_CLASSICAL:
        raise ValueError(f"k_max must lie in [0, {MAX_CLASSICAL}], got {k_max}")
    return _classical_table()[: k_max + 1]


def _series_coefficients(omega: Sequence[complex], n: int) -> list[complex]:
    """Coefficients c_0..c_n of prod_j w_j t/(e^{w_j t}-1) in powers of t."""
    bern = classical_bernoulli_numbers(n)
    base = [float(bern[k]) / math.factorial(k) for k in range(n + 1)]
    out = [1 + 0j] + [0j] * n
    for w in omega:
        factor = [base[k] * w ** k for k in range(n + 1)]
        out = [sum(out[i] * factor[m - i] for i in range(m + 1)) for m in range(n + 1)]
    return out


def multiple_bernoulli_poly(r: int, n: int, omega, max_order: int = DEFAULT_MAX_ORDER) -> BernoulliPoly:
    """Build ``B_{r,n}(.|omega)``.

    ``r = 0`` (empty period vector) is accepted and gives ``z**n``; the
    relations that lower r need it.
    """
    omega = tuple(omega) if not isinstance(omega, PeriodVector) else omega.entries
    if len(omega) != r:
        raise ValueError(f"expected {r} periods, got {len(omega)}")
    if any(complex(w) == 0 for w in omega):
        raise ValueError("periods must be nonzero")
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n > max_order:
        raise TruncationCapacity(f"order {n} exceeds the configured maximum {max_order}")
    omega = [complex(w) for w in omega]
    c = _series_coefficients(omega, n)
    scale = 1 / np.prod(omega) if omega else 1.0
    nfact = math.factorial(n)
    coeffs = tuple(
        complex(scale * nfact * c[n - p] / math.factorial(p)) for p in range(n + 1)
    )
    return BernoulliPoly(r, n, coeffs)


def eval_multiple_bernoulli(r: int, n: int, z, omega) -> complex:
    return multiple_bernoulli_poly(r, n, omega)(z)


def q_cubic(z, tau, sigma) -> complex:
    """The cubic exponent of the elliptic gamma modular formula.

    Coded from its explicit coefficients; it coincides with
    ``-B_{3,3}(z | tau, sigma, -1) / 3``.
    """
    tau = complex(tau)
    sigma = complex(sigma)
    if tau == 0 or sigma == 0:
        raise ValueError("tau and sigma must be nonzero")
    ts = tau * sigma
    return (
        z ** 3 / (3 * ts)
        - (tau + sigma - 1) / (2 * ts) * z ** 2
        + (tau ** 2 + sigma ** 2 + 1 + 3 * ts - 3 * tau - 3 * sigma) / (6 * ts) * z
        - (tau + sigma - 1) * (ts - tau - sigma) / (12 * ts)
    )


def q_cubic_coeffs(tau, sigma) -> tuple[complex, ...]:
    tau = complex(tau)
    sigma = complex(sigma)
    ts = tau * sigma
    return (
        -(tau + sigma - 1) * (ts - tau - sigma) / (12 * ts),
        (tau ** 2 + sigma ** 2 + 1 + 3 * ts - 3 * tau - 3 * sigma) / (6 * ts),
        -(tau + sigma - 1) / (2 * ts),
        1 / (3 * ts),
    )
