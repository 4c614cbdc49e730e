from __future__ import annotations

from dataclasses import asdict, dataclass, replace
from typing import NamedTuple


@dataclass(frozen=True)
class TruncationPolicy:
    """Cutoffs and tolerances used by the series, products and quadratures.

    ``fast_path_radius`` is the largest ``|x|`` for which the q-factorial is
    evaluated through the polylogarithm series; larger arguments are first
    pulled inside that radius by explicit factors.
    ``prefactor_shift`` is added to the constant coefficient of every
    Bernoulli polynomial that appears inside an exponential prefactor of an
    identity check. It is zero in normal use and exists for negative controls.
    """

    tail_tol: float = 1e-14
    max_terms: int = 1_000_000
    unit_circle_guard: float = 1e-3
    pole_guard: float = 1e-8
    fast_path_radius: float = 0.9
    quad_eps: float = 0.25
    quad_rho: float = 0.1
    quad_T: float | None = None
    panel_order: int = 32
    quad_tol: float = 1e-12
    max_panels: int = 20_000
    threshold_series: float = 1e-8
    threshold_quadrature: float = 1e-6
    prefactor_shift: float = 0.0

    def __post_init__(self):
        if not self.tail_tol > 0:
            raise ValueError("tail_tol must be positive")
        if not self.unit_circle_guard > 0:
            raise ValueError("unit_circle_guard must be positive")
        if not 0 < self.quad_rho < self.quad_eps:
            raise ValueError("need 0 < quad_rho < quad_eps")
        if self.panel_order < 8:
            raise ValueError("panel_order must be at least 8")
        if not 0 < self.fast_path_radius < 1:
            raise ValueError("fast_path_radius must lie in (0, 1)")
        if self.quad_T is not None and self.quad_T <= 1:
            raise ValueError("quad_T must exceed 1")

    def with_(self, **changes) -> "TruncationPolicy":
        return replace(self, **changes)

    def snapshot(self) -> dict:
        return asdict(self)


DEFAULT_POLICY = TruncationPolicy()


class Estimate(NamedTuple):
    """A value together with an absolute error bound."""

    value: complex
    error: float

    def __complex__(self):
        return complex(self.value)
