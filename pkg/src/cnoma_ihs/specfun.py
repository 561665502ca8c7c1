"""Exponential integrals Ei and E1.

``expint_ei`` uses only ``math.exp``/``math.log``: a power series for small
arguments, a modified-Lentz continued fraction for E1 at larger ones and an
asymptotic series for large positive Ei. ``expint_e1_quadrature`` is the
independent numerical-integration check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy import integrate

EULER_GAMMA = 0.57721566490153286061
_EPS = 2.220446049250313e-16
_MAX_ITER = 10_000
# series/continued-fraction switch for E1
_CF_THRESHOLD = 1.0
# Ei(x), x > 0: series below, asymptotic expansion above
_ASYMPTOTIC_THRESHOLD = 40.0


class OracleFailure(RuntimeError):
    pass


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    abs_error_estimate: float


def _e1_series(x: float) -> float:
    # E1(x) = -gamma - ln x - sum_{k>=1} (-x)^k / (k k!)
    term = 1.0
    total = 0.0
    for k in range(1, _MAX_ITER):
        term *= -x / k
        contrib = term / k
        total += contrib
        if abs(contrib) < _EPS * abs(total):
            break
    return -EULER_GAMMA - math.log(x) - total


def _e1x_continued_fraction(x: float) -> float:
    """exp(x) * E1(x) by modified Lentz, valid for x >~ 1."""
    tiny = 1e-300
    b = x + 1.0
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, _MAX_ITER):
        a = -float(i * i)
        b += 2.0
        d = 1.0 / (a * d + b)
        c = b + a / c
        delta = c * d
        h *= delta
        if abs(delta - 1.0) < _EPS:
            return h
    raise ArithmeticError(f"continued fraction for E1({x}) did not converge")


def scaled_e1(x: float) -> float:
    """``exp(x) * E1(x)`` for x > 0, i.e. ``-Ei(-x) * exp(x)``.

    Evaluated as one product so large ``x`` neither overflows ``exp(x)`` nor
    underflows ``E1(x)``.
    """
    if not x > 0:
        raise ValueError(f"scaled_e1 requires x > 0, got {x}")
    if x <= _CF_THRESHOLD:
        return math.exp(x) * _e1_series(x)
    return _e1x_continued_fraction(x)


def expint_e1(x: float) -> float:
    if not x > 0:
        raise ValueError(f"E1 requires x > 0, got {x}")
    if x <= _CF_THRESHOLD:
        return _e1_series(x)
    return math.exp(-x) * _e1x_continued_fraction(x)


def _ei_positive(x: float) -> float:
    if x <= _ASYMPTOTIC_THRESHOLD:
        # all terms positive: no cancellation
        term = 1.0
        total = 0.0
        for k in range(1, _MAX_ITER):
            term *= x / k
            contrib = term / k
            total += contrib
            if contrib < _EPS * total:
                break
        return EULER_GAMMA + math.log(x) + total
    # e^x/x * sum k!/x^k, truncated at the smallest term
    term = 1.0
    total = 1.0
    for k in range(1, _MAX_ITER):
        prev = term
        term *= k / x
        if term > prev:
            break
        total += term
        if term < _EPS * total:
            break
    return math.exp(x) / x * total


def expint_ei(x: float) -> float:
    """Exponential integral Ei(x) for real ``x != 0``."""
    if x == 0:
        raise ValueError("Ei(0) is undefined (logarithmic singularity)")
    if x < 0:
        return -expint_e1(-x)
    return _ei_positive(x)


def expint_e1_quadrature(x: float, tol: float = 1e-12) -> QuadratureResult:
    """E1(x) = exp(-x) * int_0^inf exp(-s)/(x+s) ds by adaptive quadrature."""
    if not x > 0:
        raise ValueError(f"x must be > 0, got {x}")
    if not tol > 0:
        raise ValueError(f"tol must be > 0, got {tol}")
    scale = math.exp(-x)
    # tolerance on the unscaled integral, split across two pieces
    inner_tol = 0.25 * tol / scale

    def f(s):
        return math.exp(-s) / (x + s)

    total, err = 0.0, 0.0
    for a, b in ((0.0, 1.0), (1.0, math.inf)):
        val, e = integrate.quad(f, a, b, epsabs=inner_tol, epsrel=0.0, limit=500)
        total += val
        err += e
    abs_err = err * scale
    if not abs_err <= tol:
        raise OracleFailure(
            f"E1({x}) quadrature error estimate {abs_err:.3g} exceeds tol {tol:.3g}"
        )
    return QuadratureResult(total * scale, abs_err)
