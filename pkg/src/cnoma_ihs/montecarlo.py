"""Ergodic estimation over counter-keyed channel draws.

Samples are processed in fixed-size chunks whose boundaries depend only on
``n``. Each chunk is summed with numpy's pairwise summation and chunk sums
are combined with ``math.fsum`` in chunk order, so results are bitwise
independent of the number of workers.

Every "arm" (a scheme evaluated at one parameter set) sees the same unit
exponential draws, scaled by its own channel variances: common random
numbers across schemes and across sweep points.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import channel
from .channel import SeedSpec
from .energy import EE_LITERAL
from .params import ValidatedParams
from .schemes import SchemeId, SinrMode, evaluate

CHUNK = 1 << 16
MIN_SAMPLES = 1000
Z95 = 1.96


@dataclass(frozen=True)
class ErgodicEstimate:
    mean: float
    std_error: float
    n_samples: int

    @property
    def ci95_halfwidth(self) -> float:
        return Z95 * self.std_error

    @property
    def ci95(self) -> tuple[float, float]:
        h = self.ci95_halfwidth
        return self.mean - h, self.mean + h

    def excludes_zero(self) -> bool:
        lo, hi = self.ci95
        return lo > 0 or hi < 0


Arm = tuple  # (label, SchemeId | callable, ValidatedParams)


def _arm_columns(scheme, p, ch, sinr_mode, ee_variant) -> dict[str, np.ndarray]:
    if callable(scheme) and not isinstance(scheme, SchemeId):
        out = scheme(p, ch)
        items = out.items() if isinstance(out, dict) else vars(out).items()
    else:
        items = vars(evaluate(scheme, p, ch, sinr_mode, ee_variant)).items()
    n = np.shape(ch.g_s1)
    return {k: np.broadcast_to(np.asarray(v, dtype=float), n) for k, v in items}


def _chunk_stats(task):
    arms, seed, start, stop, sinr_mode, ee_variant, pairwise = task
    unit = channel.unit_exponentials(seed, start, stop)
    per_arm = []
    keys = []
    for _, scheme, p in arms:
        ch = channel.scale(unit, (p.lam_s1, p.lam_s2, p.lam_12))
        cols = _arm_columns(scheme, p, ch, sinr_mode, ee_variant)
        sums = {k: float(np.sum(v)) for k, v in cols.items()}
        sq = {k: float(np.sum(v * v)) for k, v in cols.items()}
        if "c_sum" in cols and "total_power" in cols:
            sq["c_sum*total_power"] = float(np.sum(cols["c_sum"] * cols["total_power"]))
            if pairwise:
                keys += [cols["c_sum"], cols["total_power"]]
        per_arm.append((sums, sq))
    cross = None
    if pairwise and keys:
        k = len(keys)
        cross = np.empty((k, k))
        for i in range(k):
            for j in range(i, k):
                cross[i, j] = cross[j, i] = float(np.sum(keys[i] * keys[j]))
    return stop - start, per_arm, cross


def _chunks(n: int):
    return [(s, min(s + CHUNK, n)) for s in range(0, n, CHUNK)]


class ArmResults:
    """Reduced first and second moments for a set of arms on common draws."""

    def __init__(self, labels, n, sums, sqs, cross):
        self.labels = list(labels)
        self.n = n
        self._sums = sums
        self._sqs = sqs
        self._cross = cross
        self._index = {lab: i for i, lab in enumerate(self.labels)}

    def _mean(self, i, key):
        return self._sums[i][key] / self.n

    def _cov(self, i, key_a, key_b, sq_key):
        n = self.n
        c = (self._sqs[i][sq_key] - self._sums[i][key_a] * self._sums[i][key_b] / n) / (n - 1)
        return c

    def fields(self, label) -> list[str]:
        return list(self._sums[self._index[label]])

    def field(self, label, name: str) -> ErgodicEstimate:
        i = self._index[label]
        var = max(self._cov(i, name, name, name), 0.0)
        return ErgodicEstimate(self._mean(i, name), math.sqrt(var / self.n), self.n)

    def estimates(self, label) -> dict[str, ErgodicEstimate]:
        out = {name: self.field(label, name) for name in self.fields(label)}
        if "c_sum" in out and "total_power" in out:
            out["ee_mean_of_ratios"] = out.get("ee")
            out["ee"] = self.ee(label)
        return out

    def _ratio_parts(self, i):
        c = self._mean(i, "c_sum")
        d = self._mean(i, "total_power")
        return c, d, c / d

    def ee(self, label) -> ErgodicEstimate:
        """Ratio of means E[C_sum]/E[total power], delta-method standard error."""
        i = self._index[label]
        _, d, r = self._ratio_parts(i)
        vcc = self._cov(i, "c_sum", "c_sum", "c_sum")
        vdd = self._cov(i, "total_power", "total_power", "total_power")
        vcd = self._cov(i, "c_sum", "total_power", "c_sum*total_power")
        var = max(vcc - 2 * r * vcd + r * r * vdd, 0.0) / d ** 2
        return ErgodicEstimate(r, math.sqrt(var / self.n), self.n)

    def metric(self, label, metric: str) -> ErgodicEstimate:
        return self.field(label, "c_sum") if metric == "ESC" else self.ee(label)

    def difference(self, a, b, metric: str = "ESC") -> ErgodicEstimate:
        """Paired estimate of metric(a) - metric(b) on the common draws."""
        if self._cross is None:
            raise ValueError("pairwise moments were not collected")
        ia, ib = self._index[a], self._index[b]
        idx = [2 * ia, 2 * ia + 1, 2 * ib, 2 * ib + 1]
        n = self.n
        means = np.array([self._mean(ia, "c_sum"), self._mean(ia, "total_power"),
                          self._mean(ib, "c_sum"), self._mean(ib, "total_power")])
        sub = self._cross[np.ix_(idx, idx)]
        cov = (sub - n * np.outer(means, means)) / (n - 1)
        if metric == "ESC":
            w = np.array([1.0, 0.0, -1.0, 0.0])
            mean = means[0] - means[2]
        else:
            ra, rb = means[0] / means[1], means[2] / means[3]
            w = np.array([1 / means[1], -ra / means[1], -1 / means[3], rb / means[3]])
            mean = ra - rb
        if ia == ib:
            return ErgodicEstimate(0.0, 0.0, n)
        var = max(float(w @ cov @ w), 0.0)
        return ErgodicEstimate(float(mean), math.sqrt(var / n), n)


def run_arms(arms: Sequence[Arm], n: int, seed: SeedSpec, *, workers: int = 1,
             sinr_mode=SinrMode.THEOREM_CONSISTENT, ee_variant: str = EE_LITERAL,
             pairwise: bool = False) -> ArmResults:
    if n < 2:
        raise ValueError("need at least 2 samples")
    if isinstance(seed, int):
        seed = SeedSpec(seed)
    sinr_mode = SinrMode(sinr_mode)
    arms = [tuple(a) for a in arms]
    tasks = [(arms, seed, s, e, sinr_mode, ee_variant, pairwise) for s, e in _chunks(n)]
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(_chunk_stats, tasks))
    else:
        parts = [_chunk_stats(t) for t in tasks]

    total = sum(p[0] for p in parts)
    sums, sqs = [], []
    for a in range(len(arms)):
        keys = parts[0][1][a][0].keys()
        sums.append({k: math.fsum(p[1][a][0][k] for p in parts) for k in keys})
        sq_keys = parts[0][1][a][1].keys()
        sqs.append({k: math.fsum(p[1][a][1][k] for p in parts) for k in sq_keys})
    cross = None
    if pairwise and parts[0][2] is not None:
        k = parts[0][2].shape[0]
        cross = np.array([[math.fsum(p[2][i, j] for p in parts) for j in range(k)]
                          for i in range(k)])
    return ArmResults([a[0] for a in arms], total, sums, sqs, cross)


def estimate(scheme: SchemeId | Callable, params: ValidatedParams, n: int,
             seed: SeedSpec | int, *, workers: int = 1,
             sinr_mode=SinrMode.THEOREM_CONSISTENT,
             ee_variant: str = EE_LITERAL) -> dict[str, ErgodicEstimate]:
    """Per-field ergodic estimates of one scheme.

    For scheme evaluators the result also holds ``ee`` (ratio of means) and
    ``ee_mean_of_ratios``.
    """
    if n < MIN_SAMPLES:
        raise ValueError(f"n must be >= {MIN_SAMPLES}, got {n}")
    res = run_arms([("arm", scheme, params)], n, seed, workers=workers,
                   sinr_mode=sinr_mode, ee_variant=ee_variant)
    return res.estimates("arm")


@dataclass
class Comparison:
    metric: str
    schemes: list
    estimates: dict
    differences: dict  # (a, b) -> estimate of metric(a) - metric(b)

    def table(self) -> list[dict]:
        rows = [{"scheme": str(s), "mean": e.mean, "std_error": e.std_error,
                 "ci95": e.ci95_halfwidth} for s, e in self.estimates.items()]
        return sorted(rows, key=lambda r: -r["mean"])


def compare_schemes(schemes: Sequence, params: ValidatedParams, n: int,
                    seed: SeedSpec | int, *, metric: str = "ESC", workers: int = 1,
                    sinr_mode=SinrMode.THEOREM_CONSISTENT,
                    ee_variant: str = EE_LITERAL) -> Comparison:
    if len(schemes) < 2:
        raise ValueError("compare_schemes needs at least two schemes")
    if n < MIN_SAMPLES:
        raise ValueError(f"n must be >= {MIN_SAMPLES}, got {n}")
    if metric not in ("ESC", "EE"):
        raise ValueError(f"metric must be ESC or EE, got {metric!r}")
    # position-based labels so a scheme may be listed twice
    labels = [f"{i}:{s}" for i, s in enumerate(schemes)]
    arms = [(lab, SchemeId(s), params) for lab, s in zip(labels, schemes)]
    res = run_arms(arms, n, seed, workers=workers, sinr_mode=sinr_mode,
                   ee_variant=ee_variant, pairwise=True)
    est = {}
    for lab, s in zip(labels, schemes):
        est.setdefault(SchemeId(s), res.metric(lab, metric))
    diffs = {}
    for i, a in enumerate(labels):
        for j, b in enumerate(labels):
            if i < j:
                key = (SchemeId(schemes[i]), SchemeId(schemes[j]))
                diffs.setdefault(key, res.difference(a, b, metric))
    return Comparison(metric, [SchemeId(s) for s in schemes], est, diffs)
