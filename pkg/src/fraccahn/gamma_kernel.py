"""Gamma function and the exact action of J^alpha and Caputo D^alpha on t^gamma.

Only positive real Gamma arguments occur in this package (they are always of
the form k*alpha + 1), so no reflection formula is needed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError

GAMMA_MAX_ARG = 171.0  # math.gamma overflows beyond ~171.62


@dataclass(frozen=True)
class Monomial:
    """``coef * t**exponent`` with a non-negative exponent."""

    coef: float
    exponent: float

    def __post_init__(self):
        if not math.isfinite(self.coef):
            raise DomainError(f"monomial coefficient must be finite, got {self.coef!r}")
        if not (math.isfinite(self.exponent) and self.exponent >= 0):
            raise DomainError(f"monomial exponent must be >= 0, got {self.exponent!r}")


def gamma(z: float) -> float:
    """Gamma function for real ``z > 0``.

    Backed by :func:`math.gamma` (a Lanczos-type approximation in CPython),
    whose relative error is a few ulp on the range used here.
    """
    z = float(z)
    if not math.isfinite(z) or z <= 0:
        raise DomainError(f"gamma requires a finite positive argument, got {z!r}")
    if z >= GAMMA_MAX_ARG:
        raise DomainError(f"gamma({z}) overflows double precision")
    return math.gamma(z)


def gamma_ratio(num: float, den: float) -> float:
    """``gamma(num) / gamma(den)``."""
    return gamma(num) / gamma(den)


def _check_order(alpha: float, upper: float | None = None) -> float:
    alpha = float(alpha)
    if not math.isfinite(alpha) or alpha <= 0 or (upper is not None and alpha > upper):
        bound = f"(0, {upper}]" if upper is not None else "(0, inf)"
        raise DomainError(f"fractional order must lie in {bound}, got {alpha!r}")
    return alpha


def riemann_liouville_monomial(m: Monomial, alpha: float) -> Monomial:
    """Apply J^alpha to ``m``: tau -> tau + alpha, coef * G(tau+1)/G(tau+1+alpha)."""
    alpha = _check_order(alpha)
    tau = m.exponent
    return Monomial(m.coef * gamma_ratio(tau + 1.0, tau + 1.0 + alpha), tau + alpha)


def caputo_monomial(m: Monomial, alpha: float) -> Monomial | None:
    """Apply the Caputo derivative of order ``0 < alpha <= 1`` to ``m``.

    Returns ``None`` for a constant (the derivative vanishes). Exponents in
    ``(0, alpha)`` cannot come from a valid series and raise
    :class:`DomainError`.
    """
    alpha = _check_order(alpha, upper=1.0)
    g = m.exponent
    if g == 0:
        return None
    if g < alpha * (1.0 - 1e-12):
        raise DomainError(f"Caputo derivative of t^{g} with order {alpha} is not a monomial")
    # clamp roundoff so that t^alpha maps onto t^0 exactly
    new_exp = max(g - alpha, 0.0)
    return Monomial(m.coef * gamma_ratio(g + 1.0, new_exp + 1.0), new_exp)
