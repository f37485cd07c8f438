"""New Iterative Method: ``u_{m+1} = J(L u_m) + J(N(S_m)) - J(N(S_{m-1}))``."""

from __future__ import annotations

from dataclasses import dataclass, replace

from .errors import ConfigurationError, NumericalFailure
from .grid import Grid1D
from .models import ProblemSpec, full_rhs, initial_condition, linear_rhs, nonlinear_rhs
from .series import DEFAULT_POWER_CAP, FracSeries, series_add, series_frac_integral, series_scale, series_sum

DEFAULT_PRECISION = 256


@dataclass(frozen=True)
class NimConfig:
    iterations: int = 2
    power_cap: int = DEFAULT_POWER_CAP
    stencil_order: int = 8
    precision: int | None = DEFAULT_PRECISION

    def __post_init__(self):
        if int(self.iterations) != self.iterations or self.iterations < 1:
            raise ConfigurationError(f"iterations must be an integer >= 1, got {self.iterations!r}")
        if self.power_cap < 1:
            raise ConfigurationError("power cap must be >= 1")
        if self.iterations > self.power_cap:
            raise ConfigurationError("iterations cannot exceed the power cap")


def working_problem(p: ProblemSpec, stencil_order: int, precision: int | None) -> ProblemSpec:
    """The problem re-sampled on a grid with the solver's stencil order and precision."""
    g = p.grid
    if isinstance(g, Grid1D):
        if (g.accuracy, g.precision) != (stencil_order, precision):
            return p.on(replace(g, accuracy=stencil_order, precision=precision))
    return p


def check_component(s: FracSeries, name: str) -> FracSeries:
    if not s.is_finite():
        raise NumericalFailure(f"non-finite coefficient in {name}")
    return s


def nim_components(p: ProblemSpec, cfg: NimConfig = NimConfig()) -> list[FracSeries]:
    p = working_problem(p, cfg.stencil_order, cfg.precision)
    cap = cfg.power_cap
    u0 = check_component(initial_condition(p), "u_0")
    comps = [u0]
    u1 = series_frac_integral(full_rhs(p, u0, cap), cap)
    comps.append(check_component(u1, "u_1"))
    partial = [u0, series_add(u0, u1)]
    n_prev = nonlinear_rhs(p, partial[0], cap)
    for m in range(1, cfg.iterations):
        n_curr = nonlinear_rhs(p, partial[m], cap)
        integrand = series_sum([linear_rhs(p, comps[m]), n_curr, series_scale(n_prev, -1)])
        nxt = check_component(series_frac_integral(integrand, cap), f"u_{m + 1}")
        comps.append(nxt)
        partial.append(series_add(partial[m], nxt))
        n_prev = n_curr
    return comps


def nim_partial_sum(components: list[FracSeries], upto: int) -> FracSeries:
    """``U_upto = u_0 + ... + u_upto``."""
    if not (0 <= upto < len(components)):
        raise IndexError(f"partial sum U_{upto} needs {upto + 1} components, have {len(components)}")
    return series_sum(components[: upto + 1])
