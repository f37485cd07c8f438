import math

import mpmath
import numpy as np
import pytest

from fraccahn.errors import ConfigurationError
from fraccahn.grid import CoefField, derivative, sample
from fraccahn.jets import JetSpace, exp_jet, tanh_jet
from fraccahn.models import ExpLambda, TanhKink


def taylor(f, x0, n):
    with mpmath.workdps(50):
        return [float(c) for c in mpmath.taylor(f, x0, n)]


@pytest.mark.parametrize("precision", [None, 256])
def test_tanh_jet_matches_taylor(precision):
    sp = JetSpace((0.7,), degree=12, precision=precision)
    with sp.arith():
        got = [float(v) for v in tanh_jet(sp.convert(0.7), 13, sp)]
    want = taylor(lambda x: mpmath.tanh(x / mpmath.sqrt(2)), 0.7, 12)
    assert np.allclose(got, want, rtol=1e-13, atol=1e-15)


def test_exp_jet():
    sp = JetSpace((1.5,), degree=6, precision=None)
    got = exp_jet(1.5, 7, sp, 0.3)
    assert np.allclose(got, [math.exp(0.45) * 0.3**j / math.factorial(j) for j in range(7)], rtol=1e-15)


def test_jet_derivative_and_product():
    sp = JetSpace((-1.0, 0.0, 2.0), degree=10, precision=None)
    u = sample(sp, TanhKink())
    d2 = derivative(u, 2)
    assert d2.values.shape == (3, 9)
    assert d2.at_points()[1] == pytest.approx(0.0, abs=1e-15)
    sq = u * u
    x = np.array(sp.points)
    assert np.allclose(sq.at_points(), np.tanh(x / math.sqrt(2)) ** 2, rtol=1e-14)
    # first derivative of tanh(x/sqrt2) is sech^2/sqrt2
    d1 = derivative(u, 1).at_points()
    assert np.allclose(d1, (1 - np.tanh(x / math.sqrt(2)) ** 2) / math.sqrt(2), rtol=1e-14)


def test_jet_sum_truncates_to_shortest():
    sp = JetSpace((0.0,), degree=6, precision=None)
    u = sample(sp, ExpLambda(1.0))
    s = u + derivative(u, 3)
    assert s.values.shape == (1, 4)
    assert s.at_points()[0] == pytest.approx(2.0)


def test_jet_exhaustion():
    sp = JetSpace((0.0,), degree=3, precision=None)
    u = sample(sp, TanhKink())
    with pytest.raises(ConfigurationError, match="jet exhausted"):
        derivative(derivative(u, 2), 2)


def test_jet_sampling_needs_jet_method():
    sp = JetSpace((0.0,), degree=3)
    with pytest.raises(ConfigurationError):
        sample(sp, math.sin)
    with pytest.raises(ConfigurationError):
        JetSpace(())
