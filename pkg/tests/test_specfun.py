import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cnoma_ihs.specfun import OracleFailure, expint_e1_quadrature, expint_ei, scaled_e1

# reference values from 30-digit quadrature of int_x^inf exp(-t)/t dt
E1_REF = {
    0.01: 4.03792957653811381117712962355,
    0.1: 1.822923958419390615852346906,
    0.5: 0.559773594776160811746795939315,
    1.0: 0.21938393439552027367716377546,
    2.0: 0.0489005107080611195672398352281,
    5.0: 0.00114829559127532579733056196982,
    10.0: 4.15696892968532427740285981028e-06,
    30.0: 3.02155201068881254481582504515e-15,
}


def test_ei_minus_one():
    assert expint_ei(-1.0) == pytest.approx(-0.2193839344, abs=1e-10)


def test_ei_minus_ten():
    assert expint_ei(-10.0) == pytest.approx(-4.15697e-6, rel=1e-5)


@pytest.mark.parametrize("x, ref", sorted(E1_REF.items()))
def test_ei_negative_against_reference(x, ref):
    assert expint_ei(-x) == pytest.approx(-ref, rel=1e-13)


def test_asymptotic_leading_term():
    x = 50.0
    assert -expint_ei(-x) * math.exp(x) == pytest.approx(1 / x, rel=0.021)


def test_ei_zero_is_domain_error():
    with pytest.raises(ValueError):
        expint_ei(0.0)


@pytest.mark.parametrize("x", [1e-6, 0.3, 1.0, 7.5, 20.0, 45.0, 60.0])
def test_ei_positive_matches_derivative_integral(x):
    # Ei(x) - Ei(a) = int_a^x e^t/t dt, checked from a = 1e-6 with the series value there
    from scipy import integrate

    a = 1e-6
    base = 0.5772156649015329 + math.log(a) + a
    val, _ = integrate.quad(lambda t: math.exp(t) / t, a, x, epsrel=1e-13, limit=500)
    assert expint_ei(x) == pytest.approx(base + val, rel=1e-9, abs=1e-9)


def test_quadrature_examples():
    r = expint_e1_quadrature(1.0, 1e-12)
    assert r.value == pytest.approx(0.2193839344, abs=1e-10)
    assert 0 <= r.abs_error_estimate <= 1e-12
    assert expint_e1_quadrature(0.5, 1e-12).value == pytest.approx(0.5597735948, abs=1e-10)


def test_quadrature_decreasing_to_zero():
    vals = [expint_e1_quadrature(x, 1e-14).value for x in (1, 5, 10, 20, 40)]
    assert all(b < a for a, b in zip(vals, vals[1:]))
    assert vals[-1] < 1e-18


def test_quadrature_error_bound_holds():
    for x, ref in E1_REF.items():
        r = expint_e1_quadrature(x, 1e-10 * ref)
        assert abs(r.value - ref) <= max(r.abs_error_estimate, 1e-15 * ref)


@pytest.mark.filterwarnings("ignore::scipy.integrate.IntegrationWarning")
def test_quadrature_reports_unreachable_tolerance():
    with pytest.raises(OracleFailure):
        expint_e1_quadrature(1.0, 1e-30)


def test_quadrature_rejects_bad_input():
    with pytest.raises(ValueError):
        expint_e1_quadrature(-1.0, 1e-8)
    with pytest.raises(ValueError):
        expint_e1_quadrature(1.0, 0.0)


@given(st.floats(min_value=1e-4, max_value=40.0))
def test_ei_matches_quadrature_oracle(x):
    q = expint_e1_quadrature(x, 1e-11 * math.exp(-x) / (x + 1))
    assert expint_ei(-x) == pytest.approx(-q.value, rel=1e-9)


@given(st.floats(min_value=1e-3, max_value=40.0), st.floats(min_value=1e-3, max_value=5.0))
def test_e1_positive_and_decreasing(x, dx):
    a, b = -expint_ei(-x), -expint_ei(-(x + dx))
    assert a > b > 0


@pytest.mark.parametrize("x", [-0.5, -1.0, -2.0])
def test_derivative_by_finite_differences(x):
    h = 1e-5
    fd = (expint_ei(x + h) - expint_ei(x - h)) / (2 * h)
    exact = math.exp(x) / x
    assert abs(fd - exact) / abs(exact) < 1e-6


@pytest.mark.parametrize("x", [0.999, 1.0, 1.001])
def test_series_continued_fraction_crossover(x):
    assert -expint_ei(-x) == pytest.approx(
        expint_e1_quadrature(x, 1e-14).value, rel=1e-13)


def test_scaled_form_no_overflow():
    for x in (800.0, 1e5, 1e8):
        v = scaled_e1(x)
        assert math.isfinite(v)
        assert v * x == pytest.approx(1.0, rel=2 / x)
