"""Per-realization SINRs and capacities for CNOMA-IHS and the compared schemes.

Evaluators are vectorized: a ChannelRealization may hold arrays of gains and
every output field then has the same shape.

The four conventional schemes (CNOMA-HS, CNOMA-PS, CNOMA-TS, WP-CNOMA) are
reconstructions in the same notation. None of them carries the bonus symbols
x1/x4; each sends x2 (to UE1) and x3 (to UE2, relayed by UE1) over two
equal information slots.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, fields

import numpy as np

from . import energy
from .channel import ChannelRealization
from .params import ValidatedParams


class SchemeId(str, enum.Enum):
    CNOMA_IHS = "CNOMA_IHS"
    CNOMA_HS = "CNOMA_HS"
    CNOMA_PS = "CNOMA_PS"
    CNOMA_TS = "CNOMA_TS"
    WP_CNOMA = "WP_CNOMA"
    OMA_IHS = "OMA_IHS"

    def __str__(self) -> str:
        return self.value


BASELINES = (SchemeId.CNOMA_HS, SchemeId.CNOMA_PS, SchemeId.CNOMA_TS, SchemeId.WP_CNOMA)
TS_BASED = (SchemeId.CNOMA_IHS, SchemeId.CNOMA_HS, SchemeId.WP_CNOMA, SchemeId.CNOMA_TS)


class SinrMode(str, enum.Enum):
    # x2 SINR with the printed extra denominator (1-delta)+1
    AS_PRINTED = "printed"
    # x2 SINR = (1-delta) rho g_s1 p_N, the variable used by the ergodic C1 formula
    THEOREM_CONSISTENT = "theorem"


@dataclass(frozen=True)
class SinrBreakdown:
    gamma_x1: np.ndarray | None
    gamma_x2: np.ndarray
    gamma_x3_sic: np.ndarray
    gamma_x3_direct: np.ndarray | None
    gamma_x3_relay: np.ndarray
    gamma_x4: np.ndarray | None


@dataclass(frozen=True)
class CapacityReport:
    c_x1: np.ndarray
    c_x2: np.ndarray
    c_x3: np.ndarray
    c_x4: np.ndarray
    c_ue1: np.ndarray
    c_ue2: np.ndarray
    c_sum: np.ndarray
    relay_power: np.ndarray
    total_power: np.ndarray
    ee: np.ndarray


REPORT_FIELDS = tuple(f.name for f in fields(CapacityReport))


def _report(scheme, p, c_x1, c_x2, c_x3, c_x4, relay_power, ee_variant) -> CapacityReport:
    c_ue1 = c_x2 + c_x4
    c_ue2 = c_x1 + c_x3
    c_sum = c_ue1 + c_ue2
    total = energy.total_power(scheme, p, relay_power, ee_variant)
    return CapacityReport(c_x1, c_x2, c_x3, c_x4, c_ue1, c_ue2, c_sum,
                          relay_power, total, c_sum / total)


def _x2_sinr(p: ValidatedParams, g_s1, delta: float, mode: SinrMode):
    a = (1.0 - delta) * p.rho * g_s1 * p.p_n
    if SinrMode(mode) is SinrMode.AS_PRINTED:
        return a / ((1.0 - delta) + 1.0)
    return a


def _sic_sinr(p: ValidatedParams, g_s1, delta: float):
    """SINR of x3 decoded at UE1 before SIC, residual interference beta."""
    s = (1.0 - delta) * p.rho * g_s1
    return s * p.p_f / (p.beta ** 2 * s * p.p_n + 1.0)


def _direct_x3_sinr(p: ValidatedParams, g_s2):
    s = p.rho * g_s2
    return s * p.p_f / (s * p.p_n + 1.0)


def cnoma_ihs_sinrs(p: ValidatedParams, ch: ChannelRealization,
                    sinr_mode: SinrMode = SinrMode.THEOREM_CONSISTENT) -> SinrBreakdown:
    p1 = energy.relay_power_ihs(p, ch.g_s1)
    return SinrBreakdown(
        gamma_x1=p.rho * np.asarray(ch.g_s2, dtype=float),
        gamma_x2=_x2_sinr(p, ch.g_s1, p.delta, sinr_mode),
        gamma_x3_sic=_sic_sinr(p, ch.g_s1, p.delta),
        gamma_x3_direct=_direct_x3_sinr(p, ch.g_s2),
        gamma_x3_relay=ch.g_12 * p1,
        gamma_x4=p.p_n * ch.g_s1 * p.rho,
    )


def eval_cnoma_ihs(p: ValidatedParams, ch: ChannelRealization,
                   sinr_mode: SinrMode = SinrMode.THEOREM_CONSISTENT,
                   ee_variant: str = "literal") -> CapacityReport:
    s = cnoma_ihs_sinrs(p, ch, sinr_mode)
    seg = (1.0 - p.theta) / 3.0
    m = np.minimum(np.minimum(s.gamma_x3_sic, s.gamma_x3_direct), s.gamma_x3_relay)
    return _report(
        SchemeId.CNOMA_IHS, p,
        c_x1=p.theta * np.log2(1.0 + s.gamma_x1),
        c_x2=seg * np.log2(1.0 + s.gamma_x2),
        c_x3=seg * np.log2(1.0 + m),
        c_x4=seg * np.log2(1.0 + s.gamma_x4),
        relay_power=energy.relay_power_ihs(p, ch.g_s1),
        ee_variant=ee_variant,
    )


def oma_ihs_sinrs(p: ValidatedParams, ch: ChannelRealization) -> SinrBreakdown:
    # Each printed "rho ... P" product is read as the linear SNR rho (sigma^2 = 1);
    # x4 is an S->UE1 symbol so its SINR uses |h_S1|^2.
    g_s1 = np.asarray(ch.g_s1, dtype=float)
    ps = (1.0 - p.delta) * p.rho * g_s1
    return SinrBreakdown(
        gamma_x1=p.rho * np.asarray(ch.g_s2, dtype=float),
        gamma_x2=ps,
        gamma_x3_sic=ps,
        gamma_x3_direct=None,
        gamma_x3_relay=ch.g_12 * energy.relay_power_oma(p, g_s1),
        gamma_x4=p.rho * g_s1,
    )


def eval_oma_ihs(p: ValidatedParams, ch: ChannelRealization,
                 ee_variant: str = "literal") -> CapacityReport:
    s = oma_ihs_sinrs(p, ch)
    slot = 1.0 / 6.0
    return _report(
        SchemeId.OMA_IHS, p,
        c_x1=slot * np.log2(1.0 + s.gamma_x1),
        c_x2=slot * np.log2(1.0 + s.gamma_x2),
        c_x3=slot * np.log2(1.0 + np.minimum(s.gamma_x3_sic, s.gamma_x3_relay)),
        c_x4=slot * np.log2(1.0 + s.gamma_x4),
        relay_power=energy.relay_power_oma(p, ch.g_s1),
        ee_variant=ee_variant,
    )


def baseline_layout(scheme: SchemeId, p: ValidatedParams) -> tuple[float, float]:
    """(information-slot prefactor, effective PS ratio) of a two-slot baseline."""
    scheme = SchemeId(scheme)
    if scheme is SchemeId.CNOMA_HS:
        return (1.0 - p.theta) / 2.0, p.delta
    if scheme in (SchemeId.CNOMA_TS, SchemeId.WP_CNOMA):
        return (1.0 - p.theta) / 2.0, 0.0
    if scheme is SchemeId.CNOMA_PS:
        return 0.5, p.delta
    raise ValueError(f"{scheme} is not a baseline scheme")


def baseline_sinrs(scheme: SchemeId, p: ValidatedParams, ch: ChannelRealization,
                   sinr_mode: SinrMode = SinrMode.THEOREM_CONSISTENT) -> SinrBreakdown:
    _, delta = baseline_layout(scheme, p)
    return SinrBreakdown(
        gamma_x1=None,
        gamma_x2=_x2_sinr(p, ch.g_s1, delta, sinr_mode),
        gamma_x3_sic=_sic_sinr(p, ch.g_s1, delta),
        gamma_x3_direct=_direct_x3_sinr(p, ch.g_s2),
        gamma_x3_relay=ch.g_12 * energy.relay_power_baseline(scheme, p, ch.g_s1),
        gamma_x4=None,
    )


def eval_baseline(scheme: SchemeId, p: ValidatedParams, ch: ChannelRealization,
                  sinr_mode: SinrMode = SinrMode.THEOREM_CONSISTENT,
                  ee_variant: str = "literal") -> CapacityReport:
    scheme = SchemeId(scheme)
    pref, _ = baseline_layout(scheme, p)
    s = baseline_sinrs(scheme, p, ch, sinr_mode)
    m = np.minimum(np.minimum(s.gamma_x3_sic, s.gamma_x3_direct), s.gamma_x3_relay)
    zero = np.zeros_like(np.asarray(m, dtype=float))
    return _report(
        scheme, p,
        c_x1=zero,
        c_x2=pref * np.log2(1.0 + s.gamma_x2),
        c_x3=pref * np.log2(1.0 + m),
        c_x4=zero.copy(),
        relay_power=energy.relay_power_baseline(scheme, p, ch.g_s1),
        ee_variant=ee_variant,
    )


def evaluate(scheme: SchemeId, p: ValidatedParams, ch: ChannelRealization,
             sinr_mode: SinrMode = SinrMode.THEOREM_CONSISTENT,
             ee_variant: str = "literal") -> CapacityReport:
    scheme = SchemeId(scheme)
    if scheme is SchemeId.CNOMA_IHS:
        return eval_cnoma_ihs(p, ch, sinr_mode, ee_variant)
    if scheme is SchemeId.OMA_IHS:
        return eval_oma_ihs(p, ch, ee_variant)
    return eval_baseline(scheme, p, ch, sinr_mode, ee_variant)
