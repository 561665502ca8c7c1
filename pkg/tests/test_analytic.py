import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cnoma_ihs import montecarlo
from cnoma_ihs.analytic import (
    all_closed_forms,
    ergodic_c1_closed_form,
    ergodic_c2_closed_form,
    ergodic_c2_numeric_oracle,
    ergodic_c2_printed,
    ergodic_sum_closed_form,
    log1p_exp_mean,
    mean_ln1p_exponential_quad,
    theorem_inputs,
)
from cnoma_ihs.channel import SeedSpec
from cnoma_ihs.params import SystemParams, validate
from cnoma_ihs.schemes import SchemeId


def test_unit_term_value():
    # theta = 0.4, g = 1: prefactor 0.6/(3 ln 2) times e E1(1)
    assert log1p_exp_mean(1.0) == pytest.approx(0.5963473623231941, rel=1e-14)
    term = 0.6 / (3 * math.log(2)) * log1p_exp_mean(1.0)
    assert term == pytest.approx(0.17206947645417718, rel=1e-13)


@settings(max_examples=40, deadline=None)
@given(st.floats(min_value=1e-3, max_value=1e4))
def test_log1p_mean_identity_against_quadrature(k):
    assert log1p_exp_mean(k) == pytest.approx(mean_ln1p_exponential_quad(k), rel=1e-8)


def test_theorem_input_l_at_figure3(fig3):
    t = theorem_inputs(fig3)
    # 1 / (0.6^-2 * 10^1.5 * 0.6) = 0.6 / (10^1.5)
    assert t.l == pytest.approx(0.6 / 10 ** 1.5, rel=1e-14)
    assert t.l == pytest.approx(0.01897, abs=1e-5)


def test_c1_vanishes_as_theta_to_one():
    p = validate(SystemParams(theta=1 - 1e-12))
    assert ergodic_c1_closed_form(p) < 1e-10


def test_c1_increasing_in_snr():
    vals = [ergodic_c1_closed_form(validate(SystemParams(rho_db=r))) for r in range(0, 35, 5)]
    assert all(b > a for a, b in zip(vals, vals[1:]))


def test_printed_c2_theta_term_vanishes():
    # with theta -> 0 only the bracket survives
    p = validate(SystemParams(theta=1e-14))
    t = theorem_inputs(p)
    from cnoma_ihs.specfun import scaled_e1
    bracket = (scaled_e1(t.l + t.q) - scaled_e1(t.r + t.s)) / (3 * math.log(2))
    assert ergodic_c2_printed(p) == pytest.approx(bracket, rel=1e-12)


def test_oracle_vanishes_with_signal():
    p = validate(SystemParams(rho_db=-60))
    assert ergodic_c2_numeric_oracle(p) < 1e-5


def test_oracle_increasing_in_theta():
    vals = [ergodic_c2_numeric_oracle(validate(SystemParams(theta=t / 10))) for t in range(1, 10)]
    assert all(b > a for a, b in zip(vals, vals[1:]))


@pytest.mark.parametrize("rho_db", [0.0, 15.0, 30.0])
def test_closed_forms_against_monte_carlo(rho_db):
    p = validate(SystemParams(rho_db=rho_db))
    est = montecarlo.estimate(SchemeId.CNOMA_IHS, p, 300_000, SeedSpec(99))
    c1, c2 = est["c_ue1"], est["c_ue2"]
    assert abs(ergodic_c1_closed_form(p) - c1.mean) < 3 * c1.std_error
    assert abs(ergodic_c2_numeric_oracle(p) - c2.mean) < 3 * c2.std_error


@pytest.mark.parametrize("beta", [0.0, 0.5])
def test_oracle_with_imperfect_sic_parameter(beta):
    p = validate(SystemParams(beta=beta, rho_db=10))
    est = montecarlo.estimate(SchemeId.CNOMA_IHS, p, 300_000, SeedSpec(5))
    c2 = est["c_ue2"]
    assert abs(ergodic_c2_numeric_oracle(p) - c2.mean) < 3 * c2.std_error


def test_printed_c2_deviation_is_reported(fig3):
    audit = ergodic_c2_closed_form(fig3)
    assert audit.oracle == pytest.approx(ergodic_c2_numeric_oracle(fig3))
    assert audit.rel_deviation == pytest.approx(abs(audit.printed - audit.oracle) / audit.oracle)
    assert audit.consistent is (audit.rel_deviation <= 1e-3)


def test_sum_additivity(fig3):
    s = all_closed_forms(fig3)
    assert ergodic_sum_closed_form(fig3, "printed") == s.c1 + s.c2_printed
    assert ergodic_sum_closed_form(fig3, "validated") == s.c1 + s.c2_oracle
    with pytest.raises(ValueError):
        ergodic_sum_closed_form(fig3, "other")


def test_sum_reduces_to_theta_term_near_one():
    p = validate(SystemParams(theta=1 - 1e-10))
    direct = p.theta * mean_ln1p_exponential_quad(p.lam_s2 * p.rho) / math.log(2)
    assert ergodic_sum_closed_form(p) == pytest.approx(direct, rel=1e-8)
