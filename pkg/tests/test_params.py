import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cnoma_ihs.params import (
    ParameterError,
    SystemParams,
    channel_variance,
    check,
    derive_power_allocation,
    parse_config_text,
    params_from_mapping,
    validate,
)

rates = st.floats(min_value=0.01, max_value=3.0)


def test_power_allocation_half_rates():
    pa = derive_power_allocation(0.5, 0.5)
    assert pa.p_n == pytest.approx(1 / 3, rel=1e-15)
    assert pa.p_f == pytest.approx(2 / 3, rel=1e-15)


def test_power_allocation_figure3_rates():
    pa = derive_power_allocation(0.3, 0.3)
    assert pa.p_n == pytest.approx(0.39750105926564, rel=1e-12)
    assert pa.p_f == pytest.approx(0.60249894073436, rel=1e-12)


def test_power_allocation_vanishing_near_rate():
    assert derive_power_allocation(1e-12, 0.3).p_n < 1e-11


def test_power_allocation_rejects_ordering_violation():
    # large near-user rate pushes p_n above 1/2
    with pytest.raises(ParameterError, match="ordering"):
        derive_power_allocation(2.0, 0.1)


def test_power_allocation_rejects_nonpositive_rate():
    with pytest.raises(ParameterError):
        derive_power_allocation(0.0, 0.3)


@given(rates, rates, st.floats(min_value=1e-3, max_value=0.5))
def test_power_allocation_monotone_in_near_rate(r1, r2, dr):
    try:
        lo = derive_power_allocation(r1, r2)
        hi = derive_power_allocation(r1 + dr, r2)
    except ParameterError:
        return
    assert hi.p_n > lo.p_n
    assert lo.p_n + lo.p_f == 1.0


@given(st.floats(min_value=1e-3, max_value=5.0))
def test_equal_rates_simplification(r):
    pa = derive_power_allocation(r, r)
    assert pa.p_n == pytest.approx(1 / (2 ** (2 * r) + 1), rel=1e-12)
    assert pa.p_n < 0.5


@pytest.mark.parametrize("d, v, lam", [(1.0, 2, 1.0), (0.6, 2, 2.7777777777777777), (0.4, 2, 6.25)])
def test_channel_variance(d, v, lam):
    assert channel_variance(d, v) == pytest.approx(lam, rel=1e-14)


def test_channel_variance_rejects_nonpositive_distance():
    with pytest.raises(ParameterError):
        channel_variance(0.0, 2)


def test_figure3_set_is_valid(fig3):
    assert fig3.lam_s1 == pytest.approx(1 / 0.36)
    assert fig3.lam_12 == pytest.approx(6.25)
    assert fig3.rho == pytest.approx(10 ** 1.5)
    assert fig3.params.d_12_effective == pytest.approx(0.4)


def test_theta_out_of_range_reported():
    errs = check(SystemParams(theta=1.2))
    assert ("theta", "theta out of (0,1)") in errs


def test_relay_ordering_reported():
    errs = check(SystemParams(d_s1=1.5, d_s2=1.0, d_12=0.5))
    assert any(f == "d_s1" and "relay ordering violated" in m for f, m in errs)


def test_validate_collects_all_errors():
    with pytest.raises(ParameterError) as exc:
        validate(SystemParams(theta=1.2, delta=-0.1, eta=0, beta=2, r_th1=-1))
    fields = {f for f, _ in exc.value.errors}
    assert {"theta", "delta", "eta", "beta", "r_th1"} <= fields


@given(st.floats(0.05, 0.95), st.floats(0.05, 0.9))
def test_lambda_order_follows_distance(d1, frac):
    d2 = d1 + frac * (1 - d1) + 1e-3
    p = validate(SystemParams(d_s1=d1, d_s2=d2))
    assert p.lam_s1 > p.lam_s2


def test_lambda_overrides():
    p = validate(SystemParams(lambda_s1=3.0, lambda_s2=0.5, lambda_12=2.0))
    assert (p.lam_s1, p.lam_s2, p.lam_12) == (3.0, 0.5, 2.0)


def test_validated_params_immutable(fig3):
    with pytest.raises(Exception):
        fig3.theta = 0.5


def test_config_parsing():
    text = """
    # comment
    theta = 0.3   # trailing
    rho-db = 20
    d_12 = auto
    """
    values = parse_config_text(text)
    p = params_from_mapping(values)
    assert p.theta == 0.3 and p.rho_db == 20 and p.d_12 is None


def test_config_parsing_errors():
    with pytest.raises(ParameterError):
        parse_config_text("theta 0.3")
    with pytest.raises(ParameterError):
        params_from_mapping({"theta": "abc"})


def test_replace_revalidates(fig3):
    q = fig3.replace(rho_db=0.0)
    assert q.rho == 1.0 and math.isclose(q.p_n, fig3.p_n)
    with pytest.raises(ParameterError):
        fig3.replace(theta=1.0)
