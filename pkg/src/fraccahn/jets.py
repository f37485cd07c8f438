"""Truncated Taylor jets at a batch of base points.

A field on a :class:`JetSpace` stores, at each base point ``x0``, the Taylor
coefficients ``a_0 .. a_{L-1}`` of the spatial function about ``x0``.
Products are truncated Cauchy products and ``d/dx`` shifts the jet, so
derivatives are exact up to roundoff.  Each derivative shortens the jet;
the engine stays exact as long as the total derivative depth is below the
initial jet length.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import ConfigurationError
from .grid import Space


@dataclass(frozen=True)
class JetSpace(Space):
    points: tuple[float, ...]
    degree: int = 40
    precision: int | None = 256

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(float(p) for p in self.points))
        if not self.points:
            raise ConfigurationError("a jet space needs at least one base point")
        if self.degree < 1:
            raise ConfigurationError("jet degree must be positive")

    @property
    def length(self) -> int:
        return self.degree + 1

    @property
    def nodes(self) -> np.ndarray:
        return np.array(self.points)

    def zeros(self) -> np.ndarray:
        z = self.convert(0)
        return np.full((len(self.points), self.length), z, dtype=self.dtype)

    def sample(self, f: Callable) -> np.ndarray:
        jet = getattr(f, "jet", None)
        if jet is None:
            raise ConfigurationError("sampling on a jet space needs a profile with a .jet method")
        with self.arith():
            rows = [jet(self.convert(p), self.length, self) for p in self.points]
        out = np.empty((len(self.points), self.length), dtype=self.dtype)
        for i, r in enumerate(rows):
            out[i, :] = r
        return out

    def point_values(self, values) -> np.ndarray:
        return values[:, 0]

    def add(self, a, b):
        n = min(a.shape[1], b.shape[1])
        with self.arith():
            return a[:, :n] + b[:, :n]

    def sum(self, arrays):
        arrays = list(arrays)
        n = min(a.shape[1] for a in arrays)
        return super().sum([a[:, :n] for a in arrays])

    def mul(self, a, b):
        n = min(a.shape[1], b.shape[1])
        with self.arith():
            out = np.empty((a.shape[0], n), dtype=self.dtype)
            for m in range(n):
                acc = a[:, 0] * b[:, m]
                for k in range(1, m + 1):
                    acc = acc + a[:, k] * b[:, m - k]
                out[:, m] = acc
            return out

    def diff(self, values, order: int):
        n = values.shape[1] - order
        if n < 1:
            raise ConfigurationError("jet exhausted: raise the jet degree")
        with self.arith():
            factors = [self.convert(math.perm(j + order, order)) for j in range(n)]
            out = np.empty((values.shape[0], n), dtype=self.dtype)
            for j in range(n):
                out[:, j] = values[:, j + order] * factors[j]
            return out


def tanh_jet(x0, length: int, space: Space, scale=None) -> list:
    """Taylor coefficients of ``tanh(s*x)`` about ``x0`` (``s = 1/sqrt2`` by default).

    Uses ``T' = s (1 - T**2)`` coefficientwise.
    """
    s = space.convert(scale) if scale is not None else 1 / space.fn.sqrt(space.convert(2))
    t0 = space.fn.tanh(s * x0)
    a = [t0]
    for j in range(length - 1):
        sq = sum((a[i] * a[j - i] for i in range(j + 1)), space.convert(0))
        rhs = (1 if j == 0 else 0) - sq
        a.append(s * rhs / (j + 1))
    return a


def exp_jet(x0, length: int, space: Space, lam=1.0) -> list:
    """Taylor coefficients of ``exp(lam*x)`` about ``x0``."""
    lam = space.convert(lam)
    a = [space.fn.exp(lam * x0)]
    for j in range(1, length):
        a.append(a[-1] * lam / j)
    return a
