"""System parameters, validation and the NOMA power split.

All distances are normalized and the noise variance is fixed to 1, so the
source transmit power equals the linear transmit SNR.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping


class ParameterError(ValueError):
    """Raised when a parameter set violates one or more invariants.

    ``errors`` holds every violation found, as ``(field, message)`` pairs.
    """

    def __init__(self, errors: list[tuple[str, str]]):
        self.errors = list(errors)
        super().__init__("; ".join(f"{f}: {m}" for f, m in self.errors))


@dataclass(frozen=True)
class SystemParams:
    d_s1: float = 0.6
    d_s2: float = 1.0
    d_12: float | None = None  # None -> d_s2 - d_s1
    v: float = 2.0
    theta: float = 0.4
    delta: float = 0.4
    eta: float = 1.0
    beta: float = 1.0
    rho_db: float = 15.0
    r_th1: float = 0.3
    r_th2: float = 0.3
    t_total: float = 1.0
    # Direct channel-variance overrides; bypass the d**-v law when set.
    lambda_s1: float | None = None
    lambda_s2: float | None = None
    lambda_12: float | None = None

    @property
    def d_12_effective(self) -> float:
        return self.d_s2 - self.d_s1 if self.d_12 is None else self.d_12

    def replace(self, **changes: Any) -> "SystemParams":
        return dataclasses.replace(self, **changes)


@dataclass(frozen=True)
class PowerAllocation:
    p_n: float
    p_f: float


@dataclass(frozen=True)
class ValidatedParams:
    """Immutable, checked parameter bundle with the derived quantities."""

    params: SystemParams
    theta: float
    delta: float
    eta: float
    beta: float
    t_total: float
    rho: float
    p_n: float
    p_f: float
    lam_s1: float
    lam_s2: float
    lam_12: float

    def replace(self, **changes: Any) -> "ValidatedParams":
        """Re-validate with some raw parameters changed."""
        return validate(self.params.replace(**changes))


def derive_power_allocation(r_th1: float, r_th2: float) -> PowerAllocation:
    """Power fractions for the near (UE1) and far (UE2) user from target rates."""
    if not (r_th1 > 0 and r_th2 > 0):
        raise ParameterError([("r_th", "target rates must be > 0")])
    p_n = (2.0 ** (2 * r_th1) - 1.0) / (2.0 ** (2 * r_th1 + 2 * r_th2) - 1.0)
    p_f = 1.0 - p_n
    if not p_n < p_f:
        raise ParameterError(
            [("r_th1", f"NOMA ordering violated: p_n={p_n:.6g} >= p_f={p_f:.6g}")]
        )
    return PowerAllocation(p_n, p_f)


def channel_variance(d: float, v: float) -> float:
    """Mean squared channel gain ``d**-v`` for a normalized distance."""
    if not d > 0:
        raise ParameterError([("d", f"distance must be > 0, got {d}")])
    if not v > 0:
        raise ParameterError([("v", f"path-loss exponent must be > 0, got {v}")])
    return d ** (-v)


def check(params: SystemParams) -> list[tuple[str, str]]:
    """Return every invariant violation of ``params`` (empty when valid)."""
    errs: list[tuple[str, str]] = []
    p = params

    def bad(name, msg):
        errs.append((name, msg))

    if not 0 < p.theta < 1:
        bad("theta", "theta out of (0,1)")
    if not 0 < p.delta < 1:
        bad("delta", "delta out of (0,1)")
    if not 0 < p.eta <= 1:
        bad("eta", "eta out of (0,1]")
    if not 0 <= p.beta <= 1:
        bad("beta", "beta out of [0,1]")
    if not p.v > 0:
        bad("v", "path-loss exponent must be > 0")
    if not p.t_total > 0:
        bad("t_total", "block duration must be > 0")
    for name in ("r_th1", "r_th2"):
        if not getattr(p, name) > 0:
            bad(name, f"{name} must be > 0")
    d12 = p.d_12_effective
    for name, d in (("d_s1", p.d_s1), ("d_s2", p.d_s2), ("d_12", d12)):
        if not d > 0:
            bad(name, f"{name} must be > 0")
    if not p.d_s1 < p.d_s2:
        bad("d_s1", "relay ordering violated: need d_s1 < d_s2")
    if not d12 < p.d_s2:
        bad("d_12", "relay ordering violated: need d_12 < d_s2")
    for name in ("lambda_s1", "lambda_s2", "lambda_12"):
        lam = getattr(p, name)
        if lam is not None and not lam > 0:
            bad(name, f"{name} must be > 0")
    if p.r_th1 > 0 and p.r_th2 > 0:
        try:
            derive_power_allocation(p.r_th1, p.r_th2)
        except ParameterError as e:
            errs.extend(e.errors)
    return errs


def validate(params: SystemParams) -> ValidatedParams:
    errs = check(params)
    if errs:
        raise ParameterError(errs)
    pa = derive_power_allocation(params.r_th1, params.r_th2)

    def lam(override, d):
        return override if override is not None else channel_variance(d, params.v)

    return ValidatedParams(
        params=params,
        theta=params.theta,
        delta=params.delta,
        eta=params.eta,
        beta=params.beta,
        t_total=params.t_total,
        rho=10.0 ** (params.rho_db / 10.0),
        p_n=pa.p_n,
        p_f=pa.p_f,
        lam_s1=lam(params.lambda_s1, params.d_s1),
        lam_s2=lam(params.lambda_s2, params.d_s2),
        lam_12=lam(params.lambda_12, params.d_12_effective),
    )


# --- plain-text configuration -------------------------------------------------

PARAM_FIELDS = {f.name for f in dataclasses.fields(SystemParams)}


def parse_config_text(text: str) -> dict[str, str]:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    out: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParameterError([(f"line {lineno}", f"expected 'key = value', got {raw!r}")])
        key, value = (s.strip() for s in line.split("=", 1))
        out[key.replace("-", "_")] = value
    return out


def read_config(path: str | Path) -> dict[str, str]:
    return parse_config_text(Path(path).read_text())


def params_from_mapping(values: Mapping[str, Any], base: SystemParams | None = None) -> SystemParams:
    """Build SystemParams from string/number values; unknown keys are ignored."""
    kw: dict[str, Any] = {}
    errs = []
    for key, val in values.items():
        if key not in PARAM_FIELDS:
            continue
        if val is None or (isinstance(val, str) and val.lower() in ("", "none", "auto")):
            kw[key] = None
            continue
        try:
            kw[key] = float(val)
        except (TypeError, ValueError):
            errs.append((key, f"not a number: {val!r}"))
    if errs:
        raise ParameterError(errs)
    return (base or SystemParams()).replace(**kw)
