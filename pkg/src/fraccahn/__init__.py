"""Fractional-power series solutions of time-fractional Cahn-Hilliard equations.

Two semi-analytic engines (NIM and q-HAM) build ``u(x, t) = sum_k c_k(x) t**(k alpha)``
on a finite-difference grid; :mod:`fraccahn.reference` holds the published
closed forms they are checked against.
"""

from .errors import (
    ConfigurationError,
    ContractError,
    DomainError,
    FracCahnError,
    NumericalFailure,
    SamplingError,
    StructuralError,
)
from .gamma_kernel import Monomial, caputo_monomial, gamma, riemann_liouville_monomial
from .grid import CoefField, Grid1D, derivative, sample
from .models import Equation, ExpLambda, ICKind, ProblemSpec, TanhKink, initial_condition, make_ic
from .nim import NimConfig, nim_components, nim_partial_sum
from .qham import QhamConfig, chi_factor, qham_components, qham_partial_sum
from .reference import KNOWN_DEVIATIONS, Method, RefCase, known_deviation, ref_eval, ref_exact
from .series import FracSeries, series_add, series_caputo, series_eval, series_frac_integral, series_mul

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
