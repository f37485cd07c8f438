import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fraccahn.errors import DomainError
from fraccahn.gamma_kernel import Monomial, caputo_monomial, gamma, gamma_ratio, riemann_liouville_monomial


def rel(a, b):
    return abs(a - b) / max(abs(b), 1e-300)


@pytest.mark.parametrize("z, expected", [(1, 1.0), (5, 24.0), (0.5, 1.7724538509055160)])
def test_gamma_values(z, expected):
    assert rel(gamma(z), expected) <= 1e-13


@pytest.mark.parametrize("z", [0.1, 0.5, 1.7, 10.2])
def test_gamma_recurrence(z):
    assert rel(gamma(z + 1), z * gamma(z)) <= 1e-12


@given(st.floats(min_value=1e-3, max_value=59.0))
def test_gamma_recurrence_random(z):
    assert rel(gamma(z + 1), z * gamma(z)) <= 1e-12


@pytest.mark.parametrize("z", [0.0, -1.0, -0.5, math.inf, math.nan, 200.0])
def test_gamma_rejects(z):
    with pytest.raises(DomainError):
        gamma(z)


def test_gamma_ratio():
    assert rel(gamma_ratio(6, 4), 20.0) < 1e-14


def test_monomial_validation():
    with pytest.raises(DomainError):
        Monomial(1.0, -0.1)
    with pytest.raises(DomainError):
        Monomial(math.nan, 1.0)


def test_rl_examples():
    m = riemann_liouville_monomial(Monomial(1, 0), 0.5)
    assert rel(m.coef, 1.1283791670955126) < 1e-14 and m.exponent == 0.5
    m = riemann_liouville_monomial(Monomial(1, 1), 1)
    assert (m.coef, m.exponent) == (0.5, 2)
    for a in (0.2, 0.5, 0.9, 1.0):
        m = riemann_liouville_monomial(Monomial(1, a), a)
        assert rel(m.coef, gamma(a + 1) / gamma(2 * a + 1)) < 1e-14
        assert m.exponent == pytest.approx(2 * a)


@pytest.mark.parametrize("alpha", [0.0, -0.3, math.nan])
def test_rl_rejects_order(alpha):
    with pytest.raises(DomainError):
        riemann_liouville_monomial(Monomial(1, 0), alpha)


def test_caputo_examples():
    assert caputo_monomial(Monomial(3.0, 0), 0.4) is None
    m = caputo_monomial(Monomial(1, 0.5), 0.5)
    assert rel(m.coef, 0.8862269254527580) < 1e-14 and m.exponent == 0
    m = caputo_monomial(Monomial(1, 1), 1)
    assert (m.coef, m.exponent) == (1.0, 0.0)


def test_caputo_rejects():
    with pytest.raises(DomainError):
        caputo_monomial(Monomial(1, 0.2), 0.5)
    with pytest.raises(DomainError):
        caputo_monomial(Monomial(1, 1), 1.5)


@pytest.mark.parametrize("tau", [0, 0.3, 1, 2.5])
@pytest.mark.parametrize("a", [0.3, 0.5, 1])
@pytest.mark.parametrize("b", [0.3, 0.5, 1])
def test_semigroup(tau, a, b):
    m = Monomial(1.7, tau)
    ab = riemann_liouville_monomial(riemann_liouville_monomial(m, a), b)
    ba = riemann_liouville_monomial(riemann_liouville_monomial(m, b), a)
    once = riemann_liouville_monomial(m, a + b)
    for other in (ba, once):
        assert rel(ab.coef, other.coef) <= 1e-12
        assert ab.exponent == pytest.approx(other.exponent, rel=1e-15)


@given(
    st.floats(min_value=-1e3, max_value=1e3, allow_subnormal=False),
    st.floats(min_value=0, max_value=8),
    st.floats(min_value=0.01, max_value=1.0),
)
def test_left_inverse(coef, tau, alpha):
    m = Monomial(coef, tau)
    back = caputo_monomial(riemann_liouville_monomial(m, alpha), alpha)
    assert back.exponent == pytest.approx(tau, abs=1e-12)
    assert abs(back.coef - coef) <= 1e-12 * max(abs(coef), 1e-300)
