"""Generalised exponential integral E_n(x) = int_1^inf exp(-x t) t^-n dt."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._backend import kernels
from .quadrature import adaptive_quad

__all__ = [
    "ExpIntEval",
    "exp_integral",
    "exp_integral_eval",
    "exp_integral_orders",
    "exp_integral_quadrature",
    "exp_integral_asymptotic",
]


@dataclass(frozen=True)
class ExpIntEval:
    order: int
    argument: float
    value: float
    method: str


def _check(n, x):
    if n < 0 or int(n) != n:
        raise ValueError(f"order must be a nonnegative integer, got {n!r}")
    if not x >= 0.0:
        raise ValueError(f"E_n(x) requires x >= 0, got x={x!r}")
    if x == 0.0 and n <= 1:
        raise ValueError(f"E_{n}(0) diverges")


def exp_integral_eval(n: int, x: float) -> ExpIntEval:
    """Evaluate E_n(x) and report which route produced the value.

    ``n = 0`` and ``x = 0`` use closed forms; otherwise a power series is
    used for ``x <= 1`` and a continued fraction (modified Lentz) above.
    """
    _check(n, x)
    n = int(n)
    x = float(x)
    if n == 0:
        return ExpIntEval(n, x, math.exp(-x) / x, "closed_form")
    if x == 0.0:
        return ExpIntEval(n, x, 1.0 / (n - 1), "closed_form")
    method = "series" if x <= 1.0 else "continued_fraction"
    return ExpIntEval(n, x, kernels.expint(n, x), method)


def exp_integral(n: int, x: float) -> float:
    """E_n(x) for x > 0, or x = 0 with n >= 2."""
    return exp_integral_eval(n, x).value


def exp_integral_orders(x: float, kmax: int) -> np.ndarray:
    """``[E_0(x), ..., E_kmax(x)]`` at a single argument x > 0."""
    if not x > 0.0:
        raise ValueError("x must be positive")
    if kmax < 0:
        raise ValueError("kmax must be nonnegative")
    return kernels.expint_orders(float(x), int(kmax))


def exp_integral_quadrature(n: int, x: float, rel_tol: float = 1e-13) -> float:
    """E_n(x) by adaptive quadrature; independent reference for :func:`exp_integral`.

    Uses t = exp(s), so the integrand exp(-x e^s + (1 - n) s) is smooth and
    is cut where x e^s passes 800 (the remainder is below 1e-340).
    """
    _check(n, x)
    if x == 0.0:
        # only the t^-n tail is left; s runs until e^{(1-n)s} underflows
        s_max = 800.0 / (n - 1)
    else:
        s_max = math.log(max(1.0, 800.0 / x))
    if s_max == 0.0:
        return 0.0

    def f(s):
        return np.exp(-x * np.exp(s) + (1.0 - n) * s)

    value, _ = adaptive_quad(f, 0.0, s_max, abs_tol=0.0, rel_tol=rel_tol)
    return value


def exp_integral_asymptotic(n: int, x: float, num_terms: int) -> float:
    """Partial sum of the large-x expansion of E_n(x).

    Returns ``exp(-x)/x * sum_{k<num_terms} (-1)^k n(n+1)...(n+k-1) / x^k``.
    The expansion is divergent; it is useful only while the terms shrink,
    i.e. for ``n + k`` well below ``x``.
    """
    if not x > 0.0:
        raise ValueError("x must be positive")
    if num_terms < 1:
        raise ValueError("num_terms must be at least 1")
    term = 1.0
    total = 1.0
    for k in range(1, num_terms):
        term *= -(n + k - 1) / x
        total += term
    return math.exp(-x) / x * total
