"""Truncated fractional power series ``sum_k c_k(x) t**(k*alpha)``.

Exponents are tracked by the integer index ``k`` only.  Series values are
immutable; every operation returns a new series with trailing all-zero
coefficient fields trimmed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DomainError, StructuralError
from .grid import CoefField, Space, zero_field

DEFAULT_POWER_CAP = 12


def check_alpha(alpha: float) -> float:
    alpha = float(alpha)
    if not (math.isfinite(alpha) and 0 < alpha <= 1):
        raise DomainError(f"alpha must lie in (0, 1], got {alpha!r}")
    return alpha


@dataclass(frozen=True)
class FracSeries:
    alpha: float
    grid: Space
    terms: tuple[CoefField, ...] = ()
    truncated: bool = False

    def __post_init__(self):
        check_alpha(self.alpha)
        terms = tuple(self.terms)
        for t in terms:
            if t.grid is not self.grid and t.grid != self.grid:
                raise StructuralError("every term of a series must live on the series grid")
        while terms and terms[-1].is_zero():
            terms = terms[:-1]
        object.__setattr__(self, "terms", terms)

    @property
    def order(self) -> int:
        """Highest retained index ``K`` (``-1`` for the zero series)."""
        return len(self.terms) - 1

    def term(self, k: int) -> CoefField:
        if 0 <= k < len(self.terms):
            return self.terms[k]
        return zero_field(self.grid)

    def coefficients(self, k: int) -> np.ndarray:
        """Binary64 values of the ``t**(k alpha)`` coefficient at the points."""
        return self.term(k).at_points()

    def __add__(self, other: FracSeries) -> FracSeries:
        return series_add(self, other)

    def __sub__(self, other: FracSeries) -> FracSeries:
        return series_add(self, series_scale(other, -1))

    def __neg__(self) -> FracSeries:
        return series_scale(self, -1)

    def __mul__(self, c) -> FracSeries:
        return series_scale(self, c)

    __rmul__ = __mul__

    def is_finite(self) -> bool:
        return all(t.is_finite() for t in self.terms)


def _check_pair(a: FracSeries, b: FracSeries):
    if a.alpha != b.alpha:
        raise StructuralError(f"series orders differ: {a.alpha} vs {b.alpha}")
    if a.grid is not b.grid and a.grid != b.grid:
        raise StructuralError("series live on different grids")


def zero_series(alpha: float, grid: Space) -> FracSeries:
    return FracSeries(alpha, grid, ())


def constant_series(alpha: float, fld: CoefField) -> FracSeries:
    return FracSeries(alpha, fld.grid, (fld,))


def series_add(a: FracSeries, b: FracSeries) -> FracSeries:
    _check_pair(a, b)
    n = max(len(a.terms), len(b.terms))
    terms = []
    for k in range(n):
        if k >= len(a.terms):
            terms.append(b.terms[k])
        elif k >= len(b.terms):
            terms.append(a.terms[k])
        else:
            terms.append(a.terms[k] + b.terms[k])
    return FracSeries(a.alpha, a.grid, tuple(terms), a.truncated or b.truncated)


def series_sum(items: Sequence[FracSeries]) -> FracSeries:
    it = iter(items)
    acc = next(it)
    for s in it:
        acc = series_add(acc, s)
    return acc


def series_scale(s: FracSeries, c) -> FracSeries:
    return FracSeries(s.alpha, s.grid, tuple(t * c for t in s.terms), s.truncated)


def series_mul(a: FracSeries, b: FracSeries, cap: int = DEFAULT_POWER_CAP) -> FracSeries:
    """Cauchy product keeping indices ``0..cap``; the flag records dropped powers."""
    _check_pair(a, b)
    if cap < 0:
        raise DomainError("power cap must be non-negative")
    truncated = a.truncated or b.truncated
    if not a.terms or not b.terms:
        return FracSeries(a.alpha, a.grid, (), truncated)
    top = a.order + b.order
    if top > cap:
        truncated = True
        top = cap
    nz_a = [k for k, t in enumerate(a.terms) if not t.is_zero()]
    nz_b = [k for k, t in enumerate(b.terms) if not t.is_zero()]
    sums: dict[int, list[CoefField]] = {}
    for i in nz_a:
        for j in nz_b:
            if i + j <= top:
                sums.setdefault(i + j, []).append(a.terms[i] * b.terms[j])
    terms = []
    grid = a.grid
    for m in range(top + 1):
        parts = sums.get(m)
        if not parts:
            terms.append(zero_field(grid))
        elif len(parts) == 1:
            terms.append(parts[0])
        else:
            terms.append(CoefField(grid, grid.sum([p.values for p in parts])))
    return FracSeries(a.alpha, grid, tuple(terms), truncated)


def _gamma_ratio(space: Space, alpha: float, k_num: int, k_den: int):
    """``Gamma(k_num alpha + 1) / Gamma(k_den alpha + 1)`` in the working precision."""
    key = (space.precision, alpha, k_num, k_den)
    cache = _RATIO_CACHE
    if key not in cache:
        with space.arith():
            cache[key] = space.gamma(k_num * alpha + 1.0) / space.gamma(k_den * alpha + 1.0)
    return cache[key]


_RATIO_CACHE: dict = {}


def series_frac_integral(s: FracSeries, cap: int = DEFAULT_POWER_CAP) -> FracSeries:
    """Riemann-Liouville ``J^alpha``: term ``k`` moves to ``k+1`` with a Gamma ratio."""
    truncated = s.truncated
    terms = [zero_field(s.grid)]
    for k, t in enumerate(s.terms):
        if k + 1 > cap:
            if not t.is_zero():
                truncated = True
            break
        terms.append(t * _gamma_ratio(s.grid, s.alpha, k, k + 1))
    if not s.terms:
        terms = []
    return FracSeries(s.alpha, s.grid, tuple(terms), truncated)


def series_caputo(s: FracSeries) -> FracSeries:
    """Caputo ``D^alpha``: drops term 0, term ``k`` moves to ``k-1``."""
    terms = [t * _gamma_ratio(s.grid, s.alpha, k, k - 1) for k, t in enumerate(s.terms) if k >= 1]
    return FracSeries(s.alpha, s.grid, tuple(terms), s.truncated)


def series_dx(s: FracSeries, order: int) -> FracSeries:
    """Spatial derivative applied to every coefficient field."""
    from .grid import derivative

    return FracSeries(s.alpha, s.grid, tuple(derivative(t, order) for t in s.terms), s.truncated)


def series_eval(s: FracSeries, t: float) -> CoefField:
    """Pointwise ``sum_k c_k t**(k alpha)``, accumulated in ascending ``k``."""
    t = float(t)
    if not math.isfinite(t) or t < 0:
        raise DomainError(f"series can only be evaluated at finite t >= 0, got {t!r}")
    grid = s.grid
    if not s.terms:
        return zero_field(grid)
    if t == 0:
        return s.terms[0]
    with grid.arith():
        tw = grid.convert(t)
        alpha = grid.convert(s.alpha)
        parts = [s.terms[0].values]
        for k in range(1, len(s.terms)):
            parts.append(s.terms[k].values * tw ** (k * alpha))
        return CoefField(grid, grid.sum(parts))


def series_trimmed_to(s: FracSeries, top: int) -> FracSeries:
    """Keep indices ``0..top`` only."""
    return FracSeries(s.alpha, s.grid, s.terms[: top + 1], s.truncated)
