"""Uniform grids, sampled coefficient fields and finite-difference derivatives.

Fields can be held either in binary64 or in MPFR arithmetic (``gmpy2``)
at a chosen bit precision.  The solvers nest spatial derivatives deeply
(``u_3`` of the sixth-order problem contains eighteenth derivatives of the
initial profile), and binary64 roundoff amplified by ``dx**-d`` at every
level swamps the result long before the stencil truncation error does.
"""

from __future__ import annotations

import math
from contextlib import contextmanager
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Callable

import gmpy2
import numpy as np

from .errors import ConfigurationError, SamplingError, StructuralError

STENCIL_ORDERS = (2, 4, 6, 8)
MIN_POINTS = 25
MAX_DERIVATIVE = 6


@lru_cache(maxsize=None)
def fd_weights(offsets: tuple[int, ...], order: int) -> tuple[Fraction, ...]:
    """Exact weights of the ``order``-th derivative on integer ``offsets`` (unit spacing).

    Fornberg's recursion carried out in rational arithmetic.
    """
    n = len(offsets)
    if order >= n:
        raise ConfigurationError(f"{n} points cannot resolve a derivative of order {order}")
    # c[j][k]: weight of node j for derivative k
    c = [[Fraction(0)] * (order + 1) for _ in range(n)]
    c[0][0] = Fraction(1)
    c1 = Fraction(1)
    for i in range(1, n):
        mn = min(i, order)
        c2 = Fraction(1)
        xi = offsets[i]
        for j in range(i):
            c3 = Fraction(xi - offsets[j])
            c2 *= c3
            if j == i - 1:
                for k in range(mn, 0, -1):
                    c[i][k] = c1 * (k * c[i - 1][k - 1] - (offsets[i - 1]) * c[i - 1][k]) / c2
                c[i][0] = -c1 * offsets[i - 1] * c[i - 1][0] / c2
            for k in range(mn, 0, -1):
                c[j][k] = (xi * c[j][k] - k * c[j][k - 1]) / c3
            c[j][0] = xi * c[j][0] / c3
        c1 = c2
    return tuple(c[j][order] for j in range(n))


def central_half_width(order: int, accuracy: int) -> int:
    return (order + accuracy - 1) // 2


@dataclass(frozen=True)
class Stencil:
    """Offsets (relative to the target node) and exact weights, unit spacing."""

    offsets: tuple[int, ...]
    weights: tuple[Fraction, ...]


def _stencils(order: int, accuracy: int, n_points: int) -> tuple[list[Stencil], Stencil, list[Stencil]]:
    m = central_half_width(order, accuracy)
    central_offsets = tuple(range(-m, m + 1))
    central = Stencil(central_offsets, fd_weights(central_offsets, order))
    width = order + accuracy
    left, right = [], []
    for i in range(m):
        offs = tuple(j - i for j in range(width))
        left.append(Stencil(offs, fd_weights(offs, order)))
        offs_r = tuple(-o for o in reversed(offs))
        right.append(Stencil(offs_r, fd_weights(offs_r, order)))
    # right[i] serves the node i places from the right end
    return left, central, right


def neumaier_sum(terms) -> np.ndarray:
    """Compensated elementwise sum of a sequence of equal-shape float arrays."""
    it = iter(terms)
    s = np.array(next(it), dtype=float)
    comp = np.zeros_like(s)
    for a in it:
        t = s + a
        big = np.abs(s) >= np.abs(a)
        comp += np.where(big, (s - t) + a, (a - t) + s)
        s = t
    return s + comp


class Space:
    """Common interface of the discretizations a :class:`CoefField` lives on."""

    precision: int | None

    @property
    def dtype(self):
        return float if self.precision is None else object

    @contextmanager
    def arith(self):
        if self.precision is None:
            yield
        else:
            with gmpy2.context(gmpy2.get_context(), precision=self.precision):
                yield

    @property
    def fn(self):
        """Scalar elementary functions of the working number type."""
        return math if self.precision is None else gmpy2

    def convert(self, value):
        """Bring a scalar into the working number type."""
        if self.precision is None:
            return float(value)
        with self.arith():
            if isinstance(value, Fraction):
                return gmpy2.mpfr(value.numerator) / value.denominator
            return gmpy2.mpfr(value)

    def gamma(self, z):
        """Gamma function in the working precision (argument given as float)."""
        if self.precision is None:
            from .gamma_kernel import gamma

            return gamma(z)
        with self.arith():
            return gmpy2.gamma(gmpy2.mpfr(z))

    def to_float(self, values) -> np.ndarray:
        return np.asarray(values, dtype=float)

    def finite(self, values) -> bool:
        if self.precision is None:
            return bool(np.all(np.isfinite(values)))
        return all(gmpy2.is_finite(v) for v in np.ravel(values))

    def add(self, a, b):
        with self.arith():
            return a + b

    def sum(self, arrays):
        if self.precision is None:
            return neumaier_sum(arrays)
        with self.arith():
            it = iter(arrays)
            acc = next(it)
            for a in it:
                acc = acc + a
            return acc


@dataclass(frozen=True)
class Grid1D(Space):
    """Uniform grid ``x_i = x_min + i*dx``, ``i = 0 .. n_points-1``."""

    x_min: float
    x_max: float
    n_points: int
    accuracy: int = 8
    precision: int | None = None

    def __post_init__(self):
        if not (math.isfinite(self.x_min) and math.isfinite(self.x_max)) or self.x_max <= self.x_min:
            raise ConfigurationError(f"need finite x_min < x_max, got [{self.x_min}, {self.x_max}]")
        if int(self.n_points) != self.n_points or self.n_points < MIN_POINTS:
            raise ConfigurationError(f"a grid needs at least {MIN_POINTS} points, got {self.n_points}")
        if self.accuracy not in STENCIL_ORDERS:
            raise ConfigurationError(f"stencil accuracy must be one of {STENCIL_ORDERS}")
        if self.precision is not None and (int(self.precision) != self.precision or self.precision < 53):
            raise ConfigurationError("precision must be None (binary64) or an integer number of bits >= 53")

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / (self.n_points - 1)

    @cached_property
    def work_dx(self):
        if self.precision is None:
            return self.dx
        with self.arith():
            return (gmpy2.mpfr(self.x_max) - gmpy2.mpfr(self.x_min)) / (self.n_points - 1)

    @cached_property
    def nodes(self) -> np.ndarray:
        """Nodes in binary64."""
        return self.x_min + np.arange(self.n_points) * self.dx

    @cached_property
    def work_nodes(self) -> np.ndarray:
        """Nodes in the working number type."""
        if self.precision is None:
            return self.nodes
        with self.arith():
            x0 = gmpy2.mpfr(self.x_min)
            h = self.work_dx
            return np.array([x0 + i * h for i in range(self.n_points)], dtype=object)

    def zeros(self) -> np.ndarray:
        if self.precision is None:
            return np.zeros(self.n_points)
        with self.arith():
            z = gmpy2.mpfr(0)
        return np.full(self.n_points, z, dtype=object)

    def sample(self, f: Callable) -> np.ndarray:
        out = np.empty(self.n_points, dtype=self.dtype)
        with self.arith():
            for i, x in enumerate(self.work_nodes):
                try:
                    v = f(x)
                except (OverflowError, ValueError) as exc:
                    raise SamplingError(f"sampled function fails at node {i} (x = {float(x)!r}): {exc}") from exc
                if self.precision is None:
                    v = float(v)
                    ok = math.isfinite(v)
                else:
                    v = gmpy2.mpfr(v)
                    ok = gmpy2.is_finite(v)
                if not ok:
                    raise SamplingError(f"sampled function is not finite at node {i} (x = {float(x)!r})")
                out[i] = v
        return out

    def point_values(self, values) -> np.ndarray:
        return values

    def mul(self, a, b):
        with self.arith():
            return a * b

    def _converted(self, order: int):
        cache = self.__dict__.setdefault("_stencil_cache", {})
        if order not in cache:
            left, central, right = _stencils(order, self.accuracy, self.n_points)
            conv = lambda st: (st.offsets, [self.convert(w) for w in st.weights])  # noqa: E731
            scale = self.convert(1) / self.work_dx**order if self.precision else self.dx**-order
            cache[order] = ([conv(s) for s in left], conv(central), [conv(s) for s in right], scale)
        return cache[order]

    def diff(self, values, order: int):
        if not (1 <= order <= MAX_DERIVATIVE):
            raise ConfigurationError(f"derivative order must lie in 1..{MAX_DERIVATIVE}, got {order}")
        if self.n_points < order + self.accuracy + 1:
            raise ConfigurationError(
                f"{self.n_points} points are too few for order {order} at accuracy {self.accuracy}"
            )
        left, (offs, w), right, scale = self._converted(order)
        m = offs[-1]
        n = self.n_points
        with self.arith():
            out = np.empty(n, dtype=self.dtype)
            # interior: one shifted slice per tap, taps summed in a fixed order
            out[m : n - m] = self.sum(wj * values[m + o : n - m + o] for o, wj in zip(offs, w))
            for i, (so, sw) in enumerate(left):
                out[i] = self.sum([wj * values[i + o] for o, wj in zip(so, sw)])
            for i, (so, sw) in enumerate(right):
                j = n - 1 - i
                out[j] = self.sum([wj * values[j + o] for o, wj in zip(so, sw)])
            return out * scale


@dataclass(frozen=True)
class CoefField:
    """One spatial coefficient function sampled on a space."""

    grid: Space
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        expected = getattr(self.grid, "n_points", None)
        if expected is not None and len(self.values) != expected:
            raise StructuralError(f"field has {len(self.values)} values for a {expected}-point grid")

    def _check(self, other: CoefField):
        if other.grid != self.grid:
            raise StructuralError("fields live on different grids")

    def __add__(self, other: CoefField) -> CoefField:
        self._check(other)
        with self.grid.arith():
            return CoefField(self.grid, self.grid.add(self.values, other.values))

    def __sub__(self, other: CoefField) -> CoefField:
        return self + (-other)

    def __neg__(self) -> CoefField:
        with self.grid.arith():
            return CoefField(self.grid, -self.values)

    def __mul__(self, other) -> CoefField:
        if isinstance(other, CoefField):
            self._check(other)
            return CoefField(self.grid, self.grid.mul(self.values, other.values))
        c = self.grid.convert(other)
        with self.grid.arith():
            return CoefField(self.grid, self.values * c)

    __rmul__ = __mul__

    def at_points(self) -> np.ndarray:
        """Binary64 values at the grid nodes (or jet base points)."""
        return self.grid.to_float(self.grid.point_values(self.values))

    def is_finite(self) -> bool:
        return self.grid.finite(self.values)

    def is_zero(self) -> bool:
        vals = np.ravel(self.values)
        return bool(all(v == 0 for v in vals))

    def max_abs(self) -> float:
        pts = self.at_points()
        return float(np.max(np.abs(pts))) if pts.size else 0.0


def zero_field(grid: Space) -> CoefField:
    return CoefField(grid, grid.zeros())


def constant_field(grid: Space, c) -> CoefField:
    return CoefField(grid, grid.zeros() + grid.convert(c))


def sample(grid: Space, f: Callable) -> CoefField:
    """Field with ``values[i] = f(x_i)``."""
    return CoefField(grid, grid.sample(f))


def derivative(fld: CoefField, order: int) -> CoefField:
    """``order``-th spatial derivative of a field."""
    if int(order) != order:
        raise ConfigurationError(f"derivative order must be an integer, got {order!r}")
    return CoefField(fld.grid, fld.grid.diff(fld.values, int(order)))
