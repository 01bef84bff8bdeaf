"""Regularized incomplete gamma functions.

Series for the lower function when u < a + 1, modified Lentz continued
fraction for the upper function otherwise.  Relative accuracy about 1e-14.
"""
from __future__ import annotations

import math

EPS = 1e-16
MAX_ITER = 10000
TINY = 1e-300


def _lower_series(a: float, u: float) -> float:
    """P(a, u) by the power series."""
    term = 1.0 / a
    total = term
    ap = a
    for _ in range(MAX_ITER):
        ap += 1
        term *= u / ap
        total += term
        if abs(term) < abs(total) * EPS:
            break
    else:
        raise ArithmeticError("incomplete gamma series did not converge")
    return total * math.exp(-u + a * math.log(u) - math.lgamma(a))


def _upper_fraction(a: float, u: float) -> float:
    """Q(a, u) by the continued fraction (Lentz)."""
    b = u + 1 - a
    c = 1 / TINY
    d = 1 / b
    h = d
    for i in range(1, MAX_ITER):
        an = -i * (i - a)
        b += 2
        d = an * d + b
        if abs(d) < TINY:
            d = TINY
        c = b + an / c
        if abs(c) < TINY:
            c = TINY
        d = 1 / d
        delta = d * c
        h *= delta
        if abs(delta - 1) < EPS:
            break
    else:
        raise ArithmeticError("incomplete gamma continued fraction did not converge")
    return math.exp(-u + a * math.log(u) - math.lgamma(a)) * h


def gammaq(a: float, u: float) -> float:
    """Regularized upper incomplete gamma Gamma(a, u) / Gamma(a)."""
    if a <= 0:
        raise ValueError("a must be positive")
    if u < 0:
        raise ValueError("u must be non-negative")
    if u == 0:
        return 1.0
    if u < a + 1:
        return 1.0 - _lower_series(a, u)
    return _upper_fraction(a, u)


def gammap(a: float, u: float) -> float:
    """Regularized lower incomplete gamma."""
    if u == 0:
        return 0.0
    if u < a + 1:
        return _lower_series(a, u)
    return 1.0 - _upper_fraction(a, u)


def upper_gamma(a: float, u: float) -> float:
    """Gamma(a, u) = int_u^inf s^{a-1} e^{-s} ds."""
    return gammaq(a, u) * math.gamma(a)
