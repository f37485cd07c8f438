"""q-homotopy analysis: ``u_r = chi_r u_{r-1} + h J(R_r)`` and the ``(1/n)^j`` weighted sum."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import ConfigurationError, ContractError
from .models import ProblemSpec, initial_condition, qham_residual
from .nim import DEFAULT_PRECISION, check_component, working_problem
from .series import DEFAULT_POWER_CAP, FracSeries, series_add, series_frac_integral, series_scale, series_sum


@dataclass(frozen=True)
class QhamConfig:
    orders: int = 3
    h: float = -1.0
    n: int = 1
    power_cap: int = DEFAULT_POWER_CAP
    stencil_order: int = 8
    precision: int | None = DEFAULT_PRECISION

    def __post_init__(self):
        if int(self.orders) != self.orders or self.orders < 1:
            raise ConfigurationError(f"orders must be an integer >= 1, got {self.orders!r}")
        if not math.isfinite(self.h) or self.h == 0:
            raise ConfigurationError("h must be finite and non-zero")
        if int(self.n) != self.n or self.n < 1:
            raise ConfigurationError(f"n must be an integer >= 1, got {self.n!r}")
        if self.orders > self.power_cap:
            raise ConfigurationError("orders cannot exceed the power cap")


def chi_factor(r: int, n: int) -> int:
    """0 for ``r <= 1``, ``n`` otherwise."""
    if r < 1:
        raise ContractError(f"chi is defined for r >= 1, got {r}")
    return 0 if r <= 1 else n


def qham_components(p: ProblemSpec, cfg: QhamConfig = QhamConfig()) -> list[FracSeries]:
    p = working_problem(p, cfg.stencil_order, cfg.precision)
    cap = cfg.power_cap
    comps = [check_component(initial_condition(p), "u_0")]
    for r in range(1, cfg.orders + 1):
        corr = series_scale(series_frac_integral(qham_residual(comps, r, p, cap), cap), cfg.h)
        chi = chi_factor(r, cfg.n)
        nxt = series_add(series_scale(comps[-1], chi), corr) if chi else corr
        comps.append(check_component(nxt, f"u_{r}"))
    return comps


def qham_partial_sum(components: list[FracSeries], n: int, upto: int) -> FracSeries:
    """``u_0 + sum_{j=1}^{upto} u_j n**-j``."""
    if not (0 <= upto < len(components)):
        raise IndexError(f"partial sum U_{upto} needs {upto + 1} components, have {len(components)}")
    if n < 1:
        raise ConfigurationError("n must be >= 1")
    parts = [components[0]]
    for j in range(1, upto + 1):
        parts.append(series_scale(components[j], Fraction(1, n**j)))
    return series_sum(parts)
