"""Scalar special functions against independent oracles."""

import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from excised_rmt.special import (
    EULER_GAMMA,
    GLAISHER,
    STIELTJES_GAMMA1,
    adaptive_simpson,
    digamma,
    sin_ratio,
    sinc2pi,
)


def test_constants_match_oracle():
    assert abs(EULER_GAMMA - float(mpmath.euler)) < 1e-15
    assert abs(STIELTJES_GAMMA1 - float(mpmath.stieltjes(1))) < 1e-14
    assert abs(GLAISHER - float(mpmath.glaisher)) < 1e-15


@pytest.mark.parametrize("x", [0.1, 0.5, 1.0, 1.5, 2.0, 3.7, 10.0, 47.25, -0.3, -2.7])
def test_digamma_matches_oracle(x):
    assert abs(digamma(x) - float(mpmath.digamma(x))) < 1e-12


def test_digamma_half_integer_values():
    # psi(1) = -gamma, psi(1/2) = -gamma - 2 log 2 are classical identities
    assert abs(digamma(1.0) + EULER_GAMMA) < 1e-14
    assert abs(digamma(0.5) + EULER_GAMMA + 2.0 * math.log(2.0)) < 1e-13


@given(st.floats(min_value=0.05, max_value=50.0))
@settings(max_examples=60, deadline=None)
def test_digamma_recurrence(x):
    # psi(x + 1) = psi(x) + 1/x
    assert digamma(x + 1.0) == pytest.approx(digamma(x) + 1.0 / x, abs=1e-11)


def test_adaptive_simpson_known_integrals():
    assert adaptive_simpson(math.sin, 0.0, math.pi) == pytest.approx(2.0, abs=1e-10)
    assert adaptive_simpson(lambda t: math.exp(-t), 0.0, 50.0) == pytest.approx(1.0, abs=1e-9)
    assert adaptive_simpson(lambda t: t**3 - t, -1.0, 1.0) == pytest.approx(0.0, abs=1e-12)


def test_adaptive_simpson_oscillatory_vs_oracle():
    target = float(mpmath.quad(lambda t: mpmath.sin(40 * t) ** 2 / (1 + t * t), [0, 3]))
    assert adaptive_simpson(lambda t: math.sin(40 * t) ** 2 / (1 + t * t), 0.0, 3.0) == pytest.approx(
        target, abs=1e-8
    )


@given(st.floats(min_value=-20.0, max_value=20.0))
@settings(max_examples=80, deadline=None)
def test_sinc2pi_matches_direct(tau):
    if abs(tau) > 1e-6:
        assert sinc2pi(tau) == pytest.approx(
            math.sin(2 * math.pi * tau) / (2 * math.pi * tau), rel=1e-12
        )


def test_sinc2pi_at_zero():
    assert sinc2pi(0.0) == 1.0
    assert sinc2pi(1e-10) == pytest.approx(1.0, abs=1e-15)


@pytest.mark.parametrize("m", [2, 3, 7, 19, 20, 21])
def test_sin_ratio_matches_direct(m):
    theta = np.linspace(0.05, 2 * math.pi - 0.05, 97)
    theta = theta[np.abs(np.sin(theta)) > 1e-3]
    direct = np.sin(m * theta) / np.sin(theta)
    assert np.allclose(sin_ratio(m, theta), direct, atol=1e-10)


@pytest.mark.parametrize("m", [2, 3, 7, 20])
@pytest.mark.parametrize("s", [0, 1, 2])
def test_sin_ratio_at_multiples_of_pi(m, s):
    # limit of sin(m t)/sin(t) at t = s*pi is m * (-1)^(s(m-1))
    expected = m * (-1) ** (s * (m - 1))
    assert sin_ratio(m, s * math.pi) == pytest.approx(expected, abs=1e-9)
    assert sin_ratio(m, s * math.pi + 1e-10) == pytest.approx(expected, abs=1e-6)
