"""Harvested energy, relay power, energy efficiency and the theta optimizer.

Scheme identifiers are compared by their string values so this module does
not depend on ``schemes``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .params import ValidatedParams


class ThetaMethod(str, enum.Enum):
    FIXED_POINT = "fixedpoint"
    GRID = "grid"


# EE variants for the p_N term of the CNOMA-IHS denominator
EE_LITERAL = "literal"  # 2P + P1 + p_N
EE_SCALED = "scaled"  # 2P + P1 + p_N * P

_BOUNDARY = 1e-6
THETA_GRID = tuple(round(k / 100, 2) for k in range(1, 100))


@dataclass(frozen=True)
class EnergyReport:
    harvested_e1: float
    relay_power: float
    total_power: float
    ee: float | None = None


@dataclass(frozen=True)
class ThetaStarResult:
    theta_star: float
    method: ThetaMethod
    iterations: int
    ee_at_star: float
    converged: bool = True
    message: str = ""


def _phase2_factor(theta: float, slots: int) -> float:
    if theta >= 1.0:
        raise ZeroDivisionError("theta = 1 leaves no time for the relaying phase")
    return slots * theta / (1.0 - theta)


def relay_power_ihs(p: ValidatedParams, g_s1, theta: float | None = None):
    """P1 = eta rho |h_S1|^2 (3 theta / (1 - theta) + delta)."""
    th = p.theta if theta is None else theta
    return p.eta * p.rho * np.asarray(g_s1, dtype=float) * (_phase2_factor(th, 3) + p.delta)


def relay_power_oma(p: ValidatedParams, g_s1):
    return p.eta * p.rho * np.asarray(g_s1, dtype=float) * (_phase2_factor(p.theta, 6) + p.delta)


def relay_power_baseline(scheme, p: ValidatedParams, g_s1):
    g = p.eta * p.rho * np.asarray(g_s1, dtype=float)
    scheme = str(scheme)
    if scheme == "CNOMA_HS":
        return g * (_phase2_factor(p.theta, 2) + p.delta)
    if scheme in ("CNOMA_TS", "WP_CNOMA"):
        return g * _phase2_factor(p.theta, 2)
    if scheme == "CNOMA_PS":
        return g * p.delta
    raise ValueError(f"no baseline relay power for {scheme}")


def harvested_energy(p: ValidatedParams, g_s1: float, theta: float | None = None) -> EnergyReport:
    """Energy harvested at UE1 over one block and the resulting relay power."""
    if g_s1 < 0:
        raise ValueError("g_s1 must be >= 0")
    th = p.theta if theta is None else theta
    t = p.t_total
    base = p.eta * p.rho * g_s1
    e1 = base * th * t + base * p.delta * (1.0 - th) * t / 3.0
    phase2 = (1.0 - th) * t / 3.0
    if phase2 <= 0:
        raise ZeroDivisionError("theta = 1 leaves no time for the relaying phase")
    p1 = e1 / phase2
    total = 2.0 * p.rho + p1 + p.p_n
    return EnergyReport(e1, p1, total)


def total_power(scheme, p: ValidatedParams, relay_power, ee_variant: str = EE_LITERAL):
    """Denominator of the energy efficiency for each scheme (P = rho)."""
    P = p.rho
    scheme = str(scheme)
    if scheme == "CNOMA_IHS":
        if ee_variant == EE_LITERAL:
            return 2.0 * P + relay_power + p.p_n
        if ee_variant == EE_SCALED:
            return 2.0 * P + relay_power + p.p_n * P
        raise ValueError(f"unknown ee_variant {ee_variant!r}")
    if scheme == "OMA_IHS":
        return 5.0 * P + relay_power
    if scheme in ("CNOMA_HS", "CNOMA_TS", "WP_CNOMA"):
        # NOMA transmission + dedicated EH illumination
        return 2.0 * P + relay_power
    if scheme == "CNOMA_PS":
        return P + relay_power
    raise ValueError(f"unknown scheme {scheme}")


def energy_efficiency(scheme, p: ValidatedParams, esc, relay_power,
                      ee_variant: str = EE_LITERAL):
    if np.any(np.asarray(esc) < 0) or np.any(np.asarray(relay_power) < 0):
        raise ValueError("esc and relay_power must be >= 0")
    return esc / total_power(scheme, p, relay_power, ee_variant)


def fixed_point_map(p: ValidatedParams, g_s1: float, theta: float,
                    ee_variant: str = EE_LITERAL) -> float:
    """One application of theta <- 1 - E1 / (eta g (total power))."""
    rep = harvested_energy(p, g_s1, theta)
    denom = total_power("CNOMA_IHS", p, rep.relay_power, ee_variant)
    return 1.0 - rep.harvested_e1 / (p.eta * g_s1 * denom)


def _fixed_point(p, g_s1, ee_variant, tol=1e-9, max_iter=1000):
    th = p.theta
    for k in range(1, max_iter + 1):
        nxt = fixed_point_map(p, g_s1, th, ee_variant)
        if not 0.0 < nxt < 1.0:
            return th, k, False, f"iterate escaped (0,1): {nxt:.6g} at step {k}"
        if abs(nxt - th) < tol:
            if nxt > 1.0 - _BOUNDARY:
                return nxt, k, False, "iterates collapse onto the boundary theta -> 1"
            return nxt, k, True, ""
        th = nxt
    return th, max_iter, False, f"no convergence in {max_iter} iterations"


def ergodic_ee_curve(p: ValidatedParams, thetas, n: int, seed, workers: int = 1,
                     scheme="CNOMA_IHS", sinr_mode="theorem",
                     ee_variant: str = EE_LITERAL) -> np.ndarray:
    """Ratio-of-means EE at each theta, all points on common channel draws."""
    from . import montecarlo

    arms = [(f"{th}", scheme, p.replace(theta=th)) for th in thetas]
    res = montecarlo.run_arms(arms, n, seed, workers=workers, sinr_mode=sinr_mode,
                              ee_variant=ee_variant, pairwise=False)
    return np.array([res.ee(label).mean for label, _, _ in arms])


def theta_star(p: ValidatedParams, g_s1: float, method: ThetaMethod = ThetaMethod.GRID,
               *, n: int = 100_000, seed=None, workers: int = 1,
               grid=THETA_GRID, sinr_mode="theorem",
               ee_variant: str = EE_LITERAL) -> ThetaStarResult:
    """EE-maximizing theta.

    FIXED_POINT iterates the self-referential theta update from ``p.theta``
    with the given ``g_s1``; on escape or non-convergence the last in-range
    iterate is reported with ``converged=False``. GRID maximizes the
    ergodic EE over ``grid``. Either way ``ee_at_star`` is the ergodic EE at
    the returned theta on the same draws.
    """
    from .channel import SeedSpec

    seed = seed if seed is not None else SeedSpec(0)
    method = ThetaMethod(method)
    if method is ThetaMethod.FIXED_POINT:
        if not g_s1 > 0:
            raise ValueError("g_s1 must be > 0")
        th, iters, ok, msg = _fixed_point(p, g_s1, ee_variant)
        ee = ergodic_ee_curve(p, [th], n, seed, workers, sinr_mode=sinr_mode,
                              ee_variant=ee_variant)[0]
        return ThetaStarResult(th, method, iters, float(ee), ok, msg)
    grid = list(grid)
    if not grid:
        raise ValueError("empty theta grid")
    ees = ergodic_ee_curve(p, grid, n, seed, workers, sinr_mode=sinr_mode,
                           ee_variant=ee_variant)
    k = int(np.argmax(ees))
    return ThetaStarResult(grid[k], method, len(grid), float(ees[k]))
