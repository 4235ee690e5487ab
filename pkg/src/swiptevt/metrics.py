"""Capacity and outage metrics under the approximate maximum law ``exp(-u)``.

Under this law the maximum has an atom of mass ``exp(-sum_l e^{-nu_l})`` at
zero.  For small L that mass is approximation bias, not physics; the
metrics below integrate the law as it is rather than renormalising it.
"""

from __future__ import annotations

import math
from dataclasses import astuple, dataclass, fields

import numpy as np

from .evt import approx_max_pdf, approx_max_quantile, u_of_gamma
from .quadrature import adaptive_quad
from .scenario import as_linkset

__all__ = [
    "CapacityReport",
    "U_CUTOFF",
    "integration_limit",
    "ergodic_capacity",
    "ergodic_capacity_with_error",
    "throughput",
    "outage_probability",
    "outage_capacity",
    "capacity_report",
]

U_CUTOFF = 1e-10
_LN2 = math.log(2.0)


def integration_limit(links, cutoff=U_CUTOFF):
    """Point where ``u`` falls to ``cutoff``; beyond it ``1 - F < cutoff``."""
    links = as_linkset(links)
    if u_of_gamma(links, 0.0) <= cutoff:
        return 0.0
    lo, hi = 0.0, 1.0 / float(links.theta.min())
    while u_of_gamma(links, hi) > cutoff:
        lo, hi = hi, 2.0 * hi
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if u_of_gamma(links, mid) > cutoff:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-12 * hi:
            break
    return hi


def _breakpoints(links, upper):
    pts = []
    for p in (0.01, 0.5, 0.99):
        try:
            q = approx_max_quantile(links, p, rel_tol=1e-6)
        except ValueError:
            continue
        if 0.0 < q < upper:
            pts.append(q)
    return pts


def ergodic_capacity_with_error(links, form="pdf", abs_tol=1e-10):
    """``(C, error_bound)`` with ``C = 1/2 E[log2(1 + max)]`` in bits/s/Hz.

    ``form="pdf"`` integrates ``log2(1+g) f(g)``; ``form="tail"`` integrates
    ``(1 - F(g)) / ((1+g) ln 2)``.  The two agree by integration by parts and
    serve as cross-checks.  Both stop at :func:`integration_limit`; the
    neglected tail is added to the error bound.
    """
    links = as_linkset(links)
    upper = integration_limit(links)
    if upper == 0.0:
        return 0.0, 0.0
    pts = _breakpoints(links, upper)
    # the tail-form integrand beyond the cutoff is below u / ((1+g) ln 2)
    neglected = U_CUTOFF / (float(links.theta.min()) * (1.0 + upper) * _LN2)
    boundary = 0.0
    if form == "pdf":
        def f(g):
            return np.log2(1.0 + g) * approx_max_pdf(links, g)
        # integration by parts: the part beyond the cutoff is this boundary term plus the tail form's remainder
        boundary = math.log2(1.0 + upper) * -math.expm1(-u_of_gamma(links, upper))
    elif form == "tail":
        def f(g):
            return -np.expm1(-u_of_gamma(links, g)) / ((1.0 + g) * _LN2)
    else:
        raise ValueError(f"unknown form {form!r}")
    value, err = adaptive_quad(f, 0.0, upper, abs_tol=2.0 * abs_tol, rel_tol=0.0, points=pts)
    return 0.5 * (value + boundary), 0.5 * (err + neglected)


def ergodic_capacity(links, form="pdf") -> float:
    """Asymptotic ergodic capacity ``1/2 E[log2(1 + max)]`` (bits/s/Hz)."""
    return ergodic_capacity_with_error(links, form)[0]


def throughput(links, alpha, convention="as_written", capacity=None) -> float:
    """Achievable throughput.

    ``"as_written"`` is ``(1 - alpha) * C`` with C carrying the half-slot
    factor.  ``"ts_only_discount"`` drops the half-slot factor so that
    ``1 - alpha`` is the only time discount: ``(1 - alpha) * 2C``.
    ``alpha`` must be the TS factor the links were built with.
    """
    if not 0.0 <= alpha <= 1.0:
        raise ValueError("alpha must lie in [0, 1]")
    c = ergodic_capacity(links) if capacity is None else capacity
    if convention == "as_written":
        return (1.0 - alpha) * c
    if convention == "ts_only_discount":
        return (1.0 - alpha) * 2.0 * c
    raise ValueError(f"unknown convention {convention!r}")


def outage_probability(links, gamma_th):
    """``P(max <= gamma_th) = exp(-u(gamma_th))``."""
    if np.any(np.asarray(gamma_th) <= 0.0):
        raise ValueError("gamma_th must be positive")
    p = np.exp(-np.asarray(u_of_gamma(links, gamma_th)))
    return float(p) if p.ndim == 0 else p


def outage_capacity(links, gamma_th):
    """``1/2 log2(1 + gamma_th) (1 - P_out)`` in bits/s/Hz."""
    p = outage_probability(links, gamma_th)
    return 0.5 * np.log2(1.0 + np.asarray(gamma_th)) * (1.0 - p)


@dataclass(frozen=True)
class CapacityReport:
    ergodic_capacity: float
    throughput: float
    outage_probability: float
    outage_capacity: float
    gamma_th: float
    quadrature_error_bound: float

    @classmethod
    def field_names(cls):
        return [f.name for f in fields(cls)]

    def as_row(self):
        return astuple(self)


def capacity_report(links, alpha, gamma_th) -> CapacityReport:
    """All four metrics for one scenario (``gamma_th`` linear)."""
    c, err = ergodic_capacity_with_error(links)
    p = float(outage_probability(links, gamma_th))
    return CapacityReport(
        ergodic_capacity=c,
        throughput=(1.0 - alpha) * c,
        outage_probability=p,
        outage_capacity=0.5 * math.log2(1.0 + gamma_th) * (1.0 - p),
        gamma_th=float(gamma_th),
        quadrature_error_bound=err,
    )
