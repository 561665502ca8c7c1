"""Counter-keyed Rayleigh fading draws.

Every variate is a pure function of ``(master_seed, stream_label, field,
sample_index)``: sample ``i`` of a field is raw output ``i`` of a Philox
generator keyed by the seed/label/field triple. Any slice of sample indices
can be generated independently, so Monte Carlo results do not depend on how
index ranges are split between workers.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

FIELDS = ("g_s1", "g_s2", "g_12")
_OUTPUTS_PER_BLOCK = 4  # Philox4x64 emits 4 uint64 per counter step


@dataclass(frozen=True)
class SeedSpec:
    master_seed: int = 0
    stream_label: str = "channel"


@dataclass(frozen=True)
class ChannelRealization:
    """Squared channel gains; scalars or equal-length arrays."""

    g_s1: np.ndarray | float
    g_s2: np.ndarray | float
    g_12: np.ndarray | float


@lru_cache(maxsize=256)
def _philox_key(master_seed: int, stream_label: str, field: str) -> tuple[int, int]:
    words = [int(master_seed) & 0xFFFFFFFFFFFFFFFF]
    words += list(f"{stream_label}/{field}".encode())
    state = np.random.SeedSequence(words).generate_state(2, np.uint64)
    return int(state[0]), int(state[1])


def uniform_block(seed: SeedSpec, field: str, start: int, stop: int) -> np.ndarray:
    """Uniforms in (0, 1] for sample indices ``start..stop-1`` of one field."""
    if start < 0 or stop < start:
        raise ValueError(f"bad index range [{start}, {stop})")
    n = stop - start
    block, offset = divmod(start, _OUTPUTS_PER_BLOCK)
    bg = np.random.Philox(key=np.array(_philox_key(seed.master_seed, seed.stream_label, field),
                                       dtype=np.uint64))
    if block:
        bg.advance(block)
    raw = bg.random_raw(offset + n)[offset:]
    # top 53 bits -> {1, ..., 2**53} * 2**-53, so 0 is excluded and 1 included
    return ((raw >> np.uint64(11)).astype(np.float64) + 1.0) * (1.0 / 9007199254740992.0)


def unit_exponentials(seed: SeedSpec, start: int, stop: int) -> tuple[np.ndarray, ...]:
    """Exp(1) variates for each gain field over an index range."""
    return tuple(-np.log(uniform_block(seed, f, start, stop)) for f in FIELDS)


def _check_lambdas(lambdas) -> None:
    if len(lambdas) != 3:
        raise ValueError("need three channel variances (s1, s2, 12)")
    for lam in lambdas:
        if not lam > 0:
            raise ValueError(f"channel variance must be > 0, got {lam}")


def draw_block(seed: SeedSpec, start: int, stop: int, lambdas) -> ChannelRealization:
    _check_lambdas(lambdas)
    e = unit_exponentials(seed, start, stop)
    return ChannelRealization(*(lam * x for lam, x in zip(lambdas, e)))


def draw(seed: SeedSpec, sample_index: int, lambdas) -> ChannelRealization:
    """One joint realization; |h|^2 of CN(0, lam) is exponential with mean lam."""
    blk = draw_block(seed, sample_index, sample_index + 1, lambdas)
    return ChannelRealization(float(blk.g_s1[0]), float(blk.g_s2[0]), float(blk.g_12[0]))


def scale(unit: tuple[np.ndarray, ...], lambdas) -> ChannelRealization:
    """Scale pre-drawn unit exponentials by channel variances (same bits as draw_block)."""
    _check_lambdas(lambdas)
    return ChannelRealization(*(lam * x for lam, x in zip(lambdas, unit)))
