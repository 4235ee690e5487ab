"""Exact per-link and finite-L maximum CDFs, empirical CDFs and KS distances."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _backend
from ._backend import kernels
from .quadrature import adaptive_quad
from .scenario import LinkSet, SampleBatch, as_linkset

__all__ = [
    "CdfCurve",
    "SeriesConvergenceError",
    "link_cdf_series",
    "link_cdf_quadrature",
    "link_cdf",
    "exact_max_cdf",
    "empirical_cdf",
    "ks_distance",
    "ks_statistic",
    "quantile_grid",
    "mean_theta_iid_baseline",
    "SERIES_TOL",
    "NU_SERIES_MAX",
    "NUGAMMA_SERIES_MAX",
    "MAX_SERIES_TERMS",
]

SERIES_TOL = 1e-12
MAX_SERIES_TERMS = 200
# cancellation in the alternating series grows like exp(nu); past 8 it costs more than ~1e-12
NU_SERIES_MAX = 8.0
# optional guard on nu * gamma; off by default since accuracy depends on nu alone
NUGAMMA_SERIES_MAX = math.inf

PROVENANCES = ("lemma1_series", "lemma1_quadrature", "exact_product", "empirical", "evt_approx")


class SeriesConvergenceError(ArithmeticError):
    pass


@dataclass(frozen=True)
class CdfCurve:
    grid: np.ndarray
    values: np.ndarray
    provenance: str

    def __post_init__(self):
        grid = np.asarray(self.grid, dtype=float)
        values = np.asarray(self.values, dtype=float)
        if grid.ndim != 1 or grid.shape != values.shape:
            raise ValueError("grid and values must be 1-D arrays of equal length")
        if grid.size > 1 and np.any(np.diff(grid) <= 0):
            raise ValueError("grid must be strictly increasing")
        if np.any((values < 0.0) | (values > 1.0)):
            raise ValueError("CDF values must lie in [0, 1]")
        if np.any(np.diff(values) < -1e-12):
            raise ValueError("CDF values must be nondecreasing")
        if self.provenance not in PROVENANCES:
            raise ValueError(f"unknown provenance {self.provenance!r}")
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", values)

    def rows(self):
        return [(float(g), float(v), self.provenance) for g, v in zip(self.grid, self.values)]


def _check_link(theta, nu, gamma):
    if not theta > 0.0:
        raise ValueError(f"theta must be positive, got {theta!r}")
    if not nu >= 0.0:
        raise ValueError(f"nu must be nonnegative, got {nu!r}")
    if np.any(~(np.asarray(gamma) >= 0.0)):
        raise ValueError("gamma must be nonnegative")


def _quad_point(theta, nu, gamma):
    if gamma == 0.0:
        return 0.0
    if nu == 0.0:
        return -math.expm1(-theta * gamma)
    if math.isinf(nu):
        return 1.0
    x0 = theta * gamma
    if x0 > 745.0:
        return 1.0
    # x = gamma + s / theta turns the tail into e^{-x0} int_0^inf e^{-s} e^{-nu x0/(x0+s)} ds
    c = nu * x0

    def f(s):
        return np.exp(-s - c / (x0 + s))

    points = [x0] if x0 < 60.0 else None
    integral, _ = adaptive_quad(f, 0.0, 60.0, abs_tol=1e-13, rel_tol=0.0, points=points)
    return min(1.0, max(0.0, 1.0 - math.exp(-x0) * integral))


def link_cdf_quadrature(theta, nu, gamma):
    """Per-link end-to-end SNR CDF from its one-dimensional integral form.

    ``F(g) = 1 - theta * int_g^inf exp(-theta x - nu g / x) dx``, evaluated
    by adaptive quadrature to about 1e-13 absolute.  Independent of the
    series route and used as its oracle.
    """
    _check_link(theta, nu, gamma)
    if np.ndim(gamma) == 0:
        return _quad_point(float(theta), float(nu), float(gamma))
    g = np.asarray(gamma, dtype=float)
    out = np.array([_quad_point(float(theta), float(nu), v) for v in g.ravel()])
    return out.reshape(g.shape)


def link_cdf_series(theta, nu, gamma, tol=SERIES_TOL, *,
                    nu_max=NU_SERIES_MAX, nugamma_max=NUGAMMA_SERIES_MAX):
    """Per-link end-to-end SNR CDF via the exponential-integral series.

    ``F(g) = 1 - sum_k (-nu)^k / k! * theta g E_k(theta g)``, summed with
    compensation until the alternating tail is below ``tol``.  Points with
    ``nu > nu_max`` (or ``nu g > nugamma_max``) are handed to
    :func:`link_cdf_quadrature`, since the series' cancellation grows like
    ``exp(nu)``.  Pass ``nu_max=inf, nugamma_max=inf`` to force the
    series everywhere.

    Raises
    ------
    SeriesConvergenceError
        If ``MAX_SERIES_TERMS`` terms do not reach ``tol``.
    """
    _check_link(theta, nu, gamma)
    scalar = np.ndim(gamma) == 0
    g = np.atleast_1d(np.asarray(gamma, dtype=float))
    vals, status = kernels.link_cdf_series_many(
        float(theta), float(nu), g, float(tol), MAX_SERIES_TERMS,
        float(nu_max), float(nugamma_max))
    if np.any(status == _backend.NO_CONVERGENCE):
        bad = g[status == _backend.NO_CONVERGENCE][0]
        raise SeriesConvergenceError(
            f"series for theta={theta}, nu={nu}, gamma={bad} did not reach tol={tol} "
            f"in {MAX_SERIES_TERMS} terms")
    quad = status == _backend.NEEDS_QUAD
    if np.any(quad):
        vals = np.array(vals, copy=True)
        vals[quad] = [_quad_point(float(theta), float(nu), v) for v in g[quad]]
    return float(vals[0]) if scalar else vals.reshape(np.shape(gamma))


link_cdf = link_cdf_series


def exact_max_cdf(links, gamma):
    """Finite-L CDF of the best link: the product of per-link CDFs, summed in logs."""
    links = as_linkset(links)
    g = np.asarray(gamma, dtype=float)
    log_total = np.zeros(g.shape)
    with np.errstate(divide="ignore"):
        for p in links:
            log_total = log_total + np.log(link_cdf_series(p.theta, p.nu, g))
    out = np.exp(log_total)
    return float(out) if np.ndim(gamma) == 0 else out


def quantile_grid(samples, num=2000, lo_q=0.001, hi_q=0.999):
    """Geometric grid between two sample quantiles (linear if the lower one is 0)."""
    samples = np.asarray(samples, dtype=float)
    lo, hi = np.quantile(samples, [lo_q, hi_q])
    if hi <= 0.0:
        raise ValueError("samples are concentrated at zero")
    if lo <= 0.0:
        positive = samples[samples > 0.0]
        lo = float(positive.min()) if positive.size else hi * 1e-6
    if lo >= hi:
        return np.array([hi])
    return np.geomspace(lo, hi, num)


def empirical_cdf(batch, grid, link=None) -> CdfCurve:
    """Right-continuous empirical CDF of the maxima (or of one link's samples).

    ``batch`` may be a :class:`SampleBatch` or a plain sample array.
    """
    if isinstance(batch, SampleBatch):
        samples = batch.max_samples if link is None else batch.per_link_samples[link]
    else:
        samples = np.asarray(batch, dtype=float).ravel()
    grid = np.asarray(grid, dtype=float)
    s = np.sort(samples)
    values = np.searchsorted(s, grid, side="right") / s.size
    return CdfCurve(grid, values, "empirical")


def ks_distance(a: CdfCurve, b: CdfCurve) -> float:
    """Sup-norm distance between two curves.

    Curves on different grids are compared on the union of both grids, each
    interpolated linearly and held constant beyond its ends.
    """
    if a.grid.shape == b.grid.shape and np.array_equal(a.grid, b.grid):
        return float(np.max(np.abs(a.values - b.values))) if a.grid.size else 0.0
    grid = np.union1d(a.grid, b.grid)
    va = np.interp(grid, a.grid, a.values)
    vb = np.interp(grid, b.grid, b.values)
    return float(np.max(np.abs(va - vb)))


def ks_statistic(samples, cdf) -> float:
    """One-sample Kolmogorov-Smirnov statistic of ``samples`` against ``cdf``.

    ``cdf`` is a vectorised callable; the supremum is taken over both sides
    of every jump of the empirical CDF, so no grid is involved.
    """
    x = np.sort(np.asarray(samples, dtype=float).ravel())
    n = x.size
    f = np.asarray(cdf(x), dtype=float)
    upper = np.arange(1, n + 1) / n - f
    lower = f - np.arange(n) / n
    return float(max(upper.max(), lower.max()))


def mean_theta_iid_baseline(links) -> LinkSet:
    """Replace every first-hop rate by the average rate, keeping each nu."""
    links = as_linkset(links)
    theta = np.full(len(links), links.theta.mean())
    if np.allclose(links.theta, links.theta[0], rtol=0.0, atol=0.0):
        theta = links.theta.copy()
    return LinkSet(theta, links.nu)
