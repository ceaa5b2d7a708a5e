import math

import numpy as np
import pytest
from conftest import FIGURES, params, rel
from hypothesis import given, settings
from hypothesis import strategies as st

from levy2d.geometry import DomainError, Region
from levy2d.integrand import (
    SERIES_THRESHOLD,
    inner_integrand,
    inner_integrand_arrays,
    inner_oracle,
    inner_terms,
    literal_x_enabled,
    log_kernel,
    x_value,
    xi,
)
from levy2d.verification import random_params, sample_points_in_F

# closed form at the three figure instances, cross-checked against inner_oracle
FIGURE_VALUES = [5.119095263740881, 3.6016171534081654, 4.545429528315322]


@pytest.mark.parametrize("inst,value", list(zip(FIGURES, FIGURE_VALUES)))
def test_figure_instances(inst, value):
    a, b, _ = inst
    closed = inner_integrand(a, b)
    assert closed == pytest.approx(value, rel=1e-12)
    assert rel(closed, inner_oracle(a, b)) < 1e-6


@pytest.mark.parametrize("region", [1, 2, 3])
@settings(max_examples=15)
@given(data=st.data())
def test_closed_form_matches_oracle(region, data):
    a, b = data.draw(params(region=region, margin=1e-4))
    closed = inner_integrand(a, b)
    assert closed > 0
    assert rel(closed, inner_oracle(a, b)) < 1e-6


def test_arrays_match_scalar(rng):
    for reg in Region:
        a, b = random_params(rng, 200, int(reg))
        vec = inner_integrand_arrays(a.real, a.imag, b, int(reg))
        scal = np.array([inner_integrand(z, bb) for z, bb in zip(a, b)])
        assert np.allclose(vec, scal, rtol=1e-13, atol=0)


@pytest.mark.parametrize("inst", FIGURES)
def test_log_matches_unsubstituted_form(inst):
    a, b, _ = inst
    a2b = a.imag * b
    for _, _, t in inner_terms(a, b):
        x = x_value(t, a2b)
        assert abs(x) < 1

        def L(tau):
            q = t.phi_plus - 2 * a2b * tau - t.phi_minus * tau * tau
            return math.log(q / (math.sqrt(t.D) + a2b + t.phi_minus * tau) ** 2)

        assert math.log((1 - x) / (1 + x)) == pytest.approx(L(t.tau_plus) - L(t.tau_minus), abs=1e-10)


@given(params())
def test_x_inside_unit_interval(ab):
    a, b = ab
    for _, _, t in inner_terms(a, b):
        assert abs(t.x) < 1
        assert t.D > 0


def test_literal_x_breaks_the_closed_form():
    a, b, _ = FIGURES[1]
    with pytest.raises(DomainError):
        inner_integrand(a, b, literal_x=True)


def test_literal_x_environment_flag(monkeypatch):
    a, b, _ = FIGURES[1]
    monkeypatch.setenv("LEVY2D_LITERAL_X", "1")
    assert literal_x_enabled()
    with pytest.raises(DomainError):
        inner_integrand(a, b)
    assert inner_integrand(a, b, literal_x=False) == pytest.approx(FIGURE_VALUES[1], rel=1e-12)
    monkeypatch.setenv("LEVY2D_LITERAL_X", "0")
    assert not literal_x_enabled()


def test_log_kernel_limits():
    assert log_kernel(0.0) == -2.0
    x = np.array([0.5, -0.5, 0.9])
    assert np.allclose(log_kernel(x), np.log((1 - x) / (1 + x)) / x, rtol=1e-14)
    assert np.array_equal(log_kernel(x), log_kernel(-x))


def test_log_kernel_series_is_continuous():
    t = SERIES_THRESHOLD
    below = log_kernel(np.nextafter(t, 0))
    at = log_kernel(t)
    assert abs(below - at) < 1e-15
    # the series agrees with the direct form across the switch to 1e-15
    xs = np.geomspace(1e-8, 1e-3, 200)
    direct = -2 * np.arctanh(xs) / xs
    assert np.allclose(log_kernel(xs), direct, rtol=2e-15, atol=0)


@given(st.floats(-0.999999, 0.999999))
def test_log_kernel_even_and_negative(x):
    v = log_kernel(x)
    assert v <= -2.0
    assert v == log_kernel(-x)


@pytest.mark.parametrize("x", [1.0, -1.0, 1.5, math.nan])
def test_log_kernel_domain(x):
    with pytest.raises(DomainError):
        log_kernel(x)


def test_xi_bound_on_F(rng):
    a, b = random_params(rng, 20_000)
    c1, c3 = sample_points_in_F(rng, a, b)
    assert np.min(xi(a, b, c1, c3)) > 1 / 24


def test_xi_domain():
    with pytest.raises(DomainError):
        xi(0.3j, 0.3, 1.2, 0.0)


def test_invalid_parameters():
    with pytest.raises(DomainError):
        inner_integrand(complex(0.5, 0.5), 0.3)
    with pytest.raises(DomainError):
        inner_oracle(0.3j, 1.0)
