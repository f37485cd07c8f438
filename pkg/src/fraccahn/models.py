"""Fourth- and sixth-order time-fractional Cahn-Hilliard right-hand sides.

Both equations are written as ``D^alpha u = linear(u) + nonlinear(u)``:

* CH4: ``mu u_x - u_xx - u_xxxx`` plus ``6 u u_x**2 + 3 u**2 u_xx``.
* CH6: ``u_xxxx + u_xxxxxx`` plus
  ``mu u u_x - 18 u u_xx**2 - 36 u_x**2 u_xx - 24 u u_x u_xxx - 3 u**2 u_xxxx``.

The advection term of CH6 belongs to the nonlinear part, as the iterative
scheme splits it that way.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import Sequence

import gmpy2

from .errors import ConfigurationError, ContractError, DomainError
from .grid import Grid1D, Space, sample
from .jets import exp_jet, tanh_jet
from .series import (
    DEFAULT_POWER_CAP,
    FracSeries,
    check_alpha,
    constant_series,
    series_add,
    series_caputo,
    series_dx,
    series_mul,
    series_scale,
    series_sum,
    zero_series,
)


class Equation(str, Enum):
    CH4 = "ch4"
    CH6 = "ch6"


class ICKind(str, Enum):
    TANH = "tanh"
    EXP = "exp"


def _is_binary64(x) -> bool:
    return isinstance(x, (int, float))


@dataclass(frozen=True)
class TanhKink:
    """``u(x, 0) = tanh(x / sqrt 2)``."""

    kind = ICKind.TANH

    def __call__(self, x):
        if _is_binary64(x):
            return math.tanh(x / math.sqrt(2.0))
        return gmpy2.tanh(x / gmpy2.sqrt(2))

    def jet(self, x0, length: int, space: Space):
        return tanh_jet(x0, length, space)


@dataclass(frozen=True)
class ExpLambda:
    """``u(x, 0) = exp(lam * x)``."""

    lam: float = 0.1
    kind = ICKind.EXP

    def __post_init__(self):
        if not math.isfinite(self.lam):
            raise ConfigurationError("lambda must be finite")

    def __call__(self, x):
        if _is_binary64(x):
            return math.exp(self.lam * x)
        return gmpy2.exp(gmpy2.mpfr(self.lam) * x)

    def jet(self, x0, length: int, space: Space):
        return exp_jet(x0, length, space, self.lam)


def make_ic(kind: ICKind | str, lam: float | None = None):
    kind = ICKind(kind)
    if kind is ICKind.TANH:
        return TanhKink()
    return ExpLambda(0.1 if lam is None else float(lam))


DEFAULT_DOMAINS = {ICKind.TANH: (-8.0, 8.0, 801), ICKind.EXP: (-4.0, 4.0, 801)}


def default_grid(ic: ICKind | str, accuracy: int = 8, precision: int | None = None) -> Grid1D:
    lo, hi, n = DEFAULT_DOMAINS[ICKind(ic)]
    return Grid1D(lo, hi, n, accuracy=accuracy, precision=precision)


@dataclass(frozen=True)
class ProblemSpec:
    equation: Equation
    alpha: float
    mu: float
    ic: TanhKink | ExpLambda
    grid: Space

    def __post_init__(self):
        object.__setattr__(self, "equation", Equation(self.equation))
        try:
            check_alpha(self.alpha)
        except DomainError as exc:
            raise ConfigurationError(str(exc)) from exc
        if not (math.isfinite(self.mu) and self.mu >= 0):
            raise ConfigurationError(f"mu must be finite and >= 0, got {self.mu!r}")

    def on(self, grid: Space) -> ProblemSpec:
        return replace(self, grid=grid)


def initial_condition(p: ProblemSpec) -> FracSeries:
    return constant_series(p.alpha, sample(p.grid, p.ic))


def _derivs(u: FracSeries, orders) -> dict[int, FracSeries]:
    out = {0: u}
    for o in sorted(orders):
        out[o] = series_dx(u, o)
    return out


def ch4_linear_rhs(u: FracSeries, mu: float) -> FracSeries:
    d = _derivs(u, (1, 2, 4))
    return series_sum([series_scale(d[1], mu), series_scale(d[2], -1), series_scale(d[4], -1)])


def ch4_nonlinear_rhs(u: FracSeries, cap: int = DEFAULT_POWER_CAP) -> FracSeries:
    d = _derivs(u, (1, 2))
    a = series_mul(u, series_mul(d[1], d[1], cap), cap)
    b = series_mul(series_mul(u, u, cap), d[2], cap)
    return series_add(series_scale(a, 6), series_scale(b, 3))


def ch6_linear_rhs(u: FracSeries) -> FracSeries:
    d = _derivs(u, (4, 6))
    return series_add(d[4], d[6])


def ch6_nonlinear_rhs(u: FracSeries, mu: float, cap: int = DEFAULT_POWER_CAP) -> FracSeries:
    d = _derivs(u, (1, 2, 3, 4))

    def mul(*fs):
        acc = fs[0]
        for f in fs[1:]:
            acc = series_mul(acc, f, cap)
        return acc

    return series_sum(
        [
            series_scale(mul(u, d[1]), mu),
            series_scale(mul(u, d[2], d[2]), -18),
            series_scale(mul(d[1], d[1], d[2]), -36),
            series_scale(mul(u, d[1], d[3]), -24),
            series_scale(mul(u, u, d[4]), -3),
        ]
    )


def linear_rhs(p: ProblemSpec, u: FracSeries) -> FracSeries:
    if p.equation is Equation.CH4:
        return ch4_linear_rhs(u, p.mu)
    return ch6_linear_rhs(u)


def nonlinear_rhs(p: ProblemSpec, u: FracSeries, cap: int = DEFAULT_POWER_CAP) -> FracSeries:
    if p.equation is Equation.CH4:
        return ch4_nonlinear_rhs(u, cap)
    return ch6_nonlinear_rhs(u, p.mu, cap)


def full_rhs(p: ProblemSpec, u: FracSeries, cap: int = DEFAULT_POWER_CAP) -> FracSeries:
    return series_add(linear_rhs(p, u), nonlinear_rhs(p, u, cap))


def convolve2(a: Sequence[FracSeries], b: Sequence[FracSeries], top: int, cap: int) -> FracSeries:
    """``sum_{k=0}^{top} a_k b_{top-k}``."""
    parts = [series_mul(a[k], b[top - k], cap) for k in range(top + 1)]
    return series_sum(parts)


def convolve3(a, b, c, top: int, cap: int) -> FracSeries:
    """``sum_{k=0}^{top} sum_{j=0}^{k} a_j b_{k-j} c_{top-k}``."""
    parts = [series_mul(convolve2(a, b, k, cap), c[top - k], cap) for k in range(top + 1)]
    return series_sum(parts)


def qham_residual(history: Sequence[FracSeries], m: int, p: ProblemSpec, cap: int = DEFAULT_POWER_CAP) -> FracSeries:
    """Residual ``R_m`` built from the deformation terms ``u_0 .. u_{m-1}``."""
    if m < 1:
        raise ContractError(f"residual index must be >= 1, got {m}")
    if len(history) != m:
        raise ContractError(f"R_{m} needs exactly {m} previous terms, got {len(history)}")
    top = m - 1
    last = history[top]
    orders = (1, 2, 4) if p.equation is Equation.CH4 else (1, 2, 3, 4, 6)
    # derivative ladders of every history term, in q-index order
    ds = [_derivs(u, orders) for u in history]
    lad = {o: [d[o] for d in ds] for o in (0, *orders)}
    res = series_caputo(last)
    if p.equation is Equation.CH4:
        pieces = [
            series_scale(lad[1][top], -p.mu),
            series_scale(convolve3(lad[0], lad[1], lad[1], top, cap), -6),
            series_scale(convolve3(lad[0], lad[0], lad[2], top, cap), -3),
            lad[2][top],
            lad[4][top],
        ]
    else:
        pieces = [
            series_scale(convolve2(lad[0], lad[1], top, cap), -p.mu),
            series_scale(convolve3(lad[0], lad[2], lad[2], top, cap), 18),
            series_scale(convolve3(lad[1], lad[1], lad[2], top, cap), 36),
            series_scale(convolve3(lad[0], lad[1], lad[3], top, cap), 24),
            series_scale(convolve3(lad[0], lad[0], lad[4], top, cap), 3),
            series_scale(lad[4][top], -1),
            series_scale(lad[6][top], -1),
        ]
    return series_sum([res, *pieces]) if pieces else res


__all__ = [
    "Equation",
    "ICKind",
    "TanhKink",
    "ExpLambda",
    "ProblemSpec",
    "initial_condition",
    "ch4_linear_rhs",
    "ch4_nonlinear_rhs",
    "ch6_linear_rhs",
    "ch6_nonlinear_rhs",
    "qham_residual",
    "zero_series",
]
