"""First-order stochastic ordering of the best-link SNR under parameter changes."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .evt import approx_max_cdf, approx_max_quantile
from .metrics import integration_limit
from .scenario import as_linkset

__all__ = [
    "PARAMETERS",
    "DIRECTIONS",
    "OrderingVerdict",
    "dominance_grid",
    "check_dominance",
    "check_dominance_empirical",
    "predict_order",
]

PARAMETERS = ("source_power", "ts_factor", "noise_power", "ps_factor")
DIRECTIONS = ("st_larger", "st_smaller", "indeterminate")


@dataclass(frozen=True)
class OrderingVerdict:
    """How scenario ``b`` compares with scenario ``a``.

    ``direction`` is ``"st_larger"`` when b is stochastically larger than a
    (``F_b <= F_a + tol`` on the grid), ``"st_smaller"`` for the reverse, and
    ``"indeterminate"`` when the CDFs cross.  ``max_violation`` is the
    largest amount by which the reported ordering fails (for
    ``"indeterminate"``, the smaller of the two failures).  When the curves
    coincide both orderings hold and ``direction`` is ``"st_larger"``.
    """

    parameter: str | None
    direction: str
    max_violation: float
    b_larger: bool
    b_smaller: bool
    grid: np.ndarray

    def as_row(self):
        return (self.parameter or "", self.direction, self.max_violation)


def dominance_grid(links, num=400, coverage=0.998):
    """Geometric grid over the central ``coverage`` mass of ``exp(-u)``."""
    tail = 0.5 * (1.0 - coverage)
    hi = approx_max_quantile(links, 1.0 - tail)
    if hi <= 0.0:
        # nearly all mass sits in the atom at zero; span the continuous part instead
        hi = integration_limit(links) or 1.0 / float(as_linkset(links).theta.min())
    lo = approx_max_quantile(links, tail)
    if lo <= 0.0:
        lo = hi * 1e-6
    return np.geomspace(lo, hi, num)


def _verdict(parameter, fa, fb, grid, tol):
    up = float(np.max(fb - fa, initial=0.0))    # how far b fails to be >=_st a
    down = float(np.max(fa - fb, initial=0.0))  # how far b fails to be <=_st a
    b_larger = up <= tol
    b_smaller = down <= tol
    if b_larger:
        return OrderingVerdict(parameter, "st_larger", up, b_larger, b_smaller, grid)
    if b_smaller:
        return OrderingVerdict(parameter, "st_smaller", down, b_larger, b_smaller, grid)
    return OrderingVerdict(parameter, "indeterminate", min(up, down), False, False, grid)


def check_dominance(links_a, links_b, grid=None, tol=1e-9, parameter=None) -> OrderingVerdict:
    """Compare the approximate maximum CDFs of two scenarios on a grid."""
    links_a = as_linkset(links_a)
    links_b = as_linkset(links_b)
    if grid is None:
        grid = dominance_grid(links_a)
    grid = np.asarray(grid, dtype=float)
    if np.any(grid <= 0.0) or np.any(np.diff(grid) <= 0.0):
        raise ValueError("grid must be positive and strictly increasing")
    return _verdict(parameter, approx_max_cdf(links_a, grid), approx_max_cdf(links_b, grid), grid, tol)


def check_dominance_empirical(samples_a, samples_b, grid, parameter=None, widen=3.0,
                              confidence=0.95) -> OrderingVerdict:
    """Monte Carlo variant: empirical CDFs with tolerance ``widen`` x the DKW band."""
    a = np.sort(np.asarray(samples_a, dtype=float))
    b = np.sort(np.asarray(samples_b, dtype=float))
    grid = np.asarray(grid, dtype=float)
    fa = np.searchsorted(a, grid, side="right") / a.size
    fb = np.searchsorted(b, grid, side="right") / b.size
    n = min(a.size, b.size)
    band = math.sqrt(math.log(2.0 / (1.0 - confidence)) / (2.0 * n))
    return _verdict(parameter, fa, fb, grid, widen * band)


def predict_order(parameter, old_value, new_value, regime_hint="mid") -> str:
    """Predicted change of the best-link SNR when ``parameter`` moves old -> new.

    More source power or a larger TS factor gives a stochastically larger
    SNR; more noise a smaller one.  The PS factor has no general ordering;
    only in the low-SNR regime does a smaller PS factor help.  Returns
    ``"indeterminate"`` otherwise, including the high-SNR regime.
    """
    if parameter not in PARAMETERS:
        raise ValueError(f"unknown parameter {parameter!r}")
    if regime_hint not in ("low", "mid", "high"):
        raise ValueError(f"unknown regime {regime_hint!r}")
    if new_value == old_value:
        raise ValueError("old and new values are equal")
    up = new_value > old_value
    if parameter in ("source_power", "ts_factor"):
        return "st_larger" if up else "st_smaller"
    if parameter == "noise_power":
        return "st_smaller" if up else "st_larger"
    if regime_hint == "low":
        return "st_smaller" if up else "st_larger"
    return "indeterminate"
