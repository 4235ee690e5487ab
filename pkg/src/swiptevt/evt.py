"""Gumbel asymptotics for the maximum of non-identical end-to-end SNRs.

The approximate CDF of the best link is ``exp(-u(g))`` with
``u(g) = sum_l exp(-theta_l g - nu_l)``.  Normalising constants ``(a_L, b_L)``
map the maximum onto the standard Gumbel law; which constants apply depends
on which hop is identically distributed across relays.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._backend import kernels
from .scenario import SampleBatch, as_linkset

__all__ = [
    "CASES",
    "ThetaBinning",
    "BetaChoice",
    "NormalizingConstants",
    "classify_case",
    "bin_thetas",
    "select_beta",
    "normalizing_constants",
    "u_of_gamma",
    "approx_max_cdf",
    "approx_max_pdf",
    "approx_max_quantile",
    "normalized_max_samples",
    "gumbel_cdf",
    "gumbel_pdf",
    "GUMBEL_MEDIAN",
]

CASES = ("all_iid", "first_hop_iid", "second_hop_iid", "fully_inid")
GUMBEL_MEDIAN = -math.log(math.log(2.0))


def _uniform(values, tol):
    top = float(np.max(np.abs(values)))
    if top == 0.0 or np.all(values == values[0]):
        return True
    return float(np.ptp(values)) <= tol * top


def classify_case(links, theta_tol=1e-9, nu_tol=1e-9) -> str:
    """Which hop(s) are identically distributed, up to relative tolerances."""
    links = as_linkset(links)
    same_theta = _uniform(links.theta, theta_tol)
    same_nu = _uniform(links.nu, nu_tol)
    if same_theta and same_nu:
        return "all_iid"
    if same_theta:
        return "first_hop_iid"
    if same_nu:
        return "second_hop_iid"
    return "fully_inid"


@dataclass(frozen=True)
class ThetaBinning:
    """Uniform-width quantisation of the first-hop rates.

    ``bin_values`` and ``counts`` list only the occupied bins, in increasing
    order; ``assignment[l]`` is the position of link ``l`` in those lists.
    """

    bin_edges: np.ndarray
    bin_values: np.ndarray
    counts: np.ndarray
    assignment: np.ndarray

    @property
    def num_links(self) -> int:
        return int(self.counts.sum())


def bin_thetas(links, num_bins: int) -> ThetaBinning:
    """Quantise theta into ``num_bins`` equal-width bins over [min, max].

    A bin is represented by the mean rate of its members, so rates that
    already take few distinct values are reproduced exactly.
    """
    if num_bins < 1:
        raise ValueError("num_bins must be at least 1")
    theta = as_linkset(links).theta
    lo, hi = float(theta.min()), float(theta.max())
    if lo == hi:
        edges = np.array([lo, hi])
        raw = np.zeros(theta.size, dtype=int)
    else:
        edges = np.linspace(lo, hi, num_bins + 1)
        raw = np.clip(np.searchsorted(edges, theta, side="right") - 1, 0, num_bins - 1)
    occupied, assignment = np.unique(raw, return_inverse=True)
    counts = np.bincount(assignment, minlength=occupied.size)
    values = np.array([theta[assignment == i].mean() for i in range(occupied.size)])
    return ThetaBinning(edges, values, counts, assignment)


@dataclass(frozen=True)
class BetaChoice:
    """Dominant first-hop rate.

    ``heuristic`` is set when no bin met both surrogate conditions and the
    fallback rule was used; ``skipped`` counts occupied bins with a smaller
    rate that were passed over.
    """

    beta: float
    count: int
    bin_index: int
    heuristic: bool
    skipped: int


def select_beta(binning: ThetaBinning, eps_count=0.05, eps_tail=0.1) -> BetaChoice:
    """Smallest bin rate whose population dominates, by finite-L surrogates.

    A bin ``b`` is accepted when ``R_b >= eps_count * L`` and every bin with a
    larger rate satisfies ``R_i * R_b ** (-theta_i / theta_b) <= eps_tail``.
    Otherwise the smallest-rate bin among those with the largest count is
    returned with ``heuristic=True``.
    """
    values = binning.bin_values
    counts = binning.counts
    total = binning.num_links
    for b in range(values.size):
        r_b = counts[b]
        if r_b < eps_count * total:
            continue
        higher = values > values[b]
        tail = counts[higher] * np.power(float(r_b), -values[higher] / values[b])
        if np.all(tail <= eps_tail):
            return BetaChoice(float(values[b]), int(r_b), b, False, b)
    b = int(np.flatnonzero(counts == counts.max())[0])
    return BetaChoice(float(values[b]), int(counts[b]), b, True, b)


@dataclass(frozen=True)
class NormalizingConstants:
    a: float
    b: float
    beta: float
    case: str
    beta_count: int


def _logsumexp_neg(nu):
    nu = np.asarray(nu, dtype=float)
    m = float(nu.min())
    return -m + math.log(math.fsum(np.exp(-(nu - m))))


def normalizing_constants(links, case=None, binning=None, beta=None, **beta_kw):
    """Affine constants ``(a_L, b_L)`` sending the maximum to a standard Gumbel.

    =================  ==========  ======================================
    case               a_L         b_L
    =================  ==========  ======================================
    all_iid            1/theta     (log L - nu) / theta
    first_hop_iid      1/theta     log(sum_l e^{-nu_l}) / theta
    second_hop_iid     1/beta      (log R_beta - nu) / beta
    fully_inid         1/beta      log(sum_{l in beta bin} e^{-nu_l}) / beta
    =================  ==========  ======================================

    ``binning`` (or a precomputed ``beta`` choice) is required for the last
    two cases; extra keyword arguments go to :func:`select_beta`.
    """
    links = as_linkset(links)
    case = case or classify_case(links)
    if case not in CASES:
        raise ValueError(f"unknown case {case!r}")
    n = len(links)
    if case == "all_iid":
        theta = float(links.theta.mean())
        nu = float(links.nu.mean())
        return NormalizingConstants(1.0 / theta, (math.log(n) - nu) / theta, theta, case, n)
    if case == "first_hop_iid":
        theta = float(links.theta.mean())
        return NormalizingConstants(1.0 / theta, _logsumexp_neg(links.nu) / theta, theta, case, n)
    if binning is None:
        raise ValueError(f"case {case!r} needs a theta binning")
    choice = beta if beta is not None else select_beta(binning, **beta_kw)
    members = binning.assignment == choice.bin_index
    if not np.any(members):
        raise ValueError("the selected beta bin is empty")
    b_beta = choice.beta
    if case == "second_hop_iid":
        nu = float(links.nu.mean())
        b = (math.log(int(members.sum())) - nu) / b_beta
    else:
        b = _logsumexp_neg(links.nu[members]) / b_beta
    return NormalizingConstants(1.0 / b_beta, b, b_beta, case, int(members.sum()))


def u_of_gamma(links, gamma):
    """``u(g) = sum_l exp(-theta_l g - nu_l)`` with compensated summation."""
    links = as_linkset(links)
    u, _ = kernels.u_sums(links.theta, links.nu, np.atleast_1d(np.asarray(gamma, dtype=float)))
    return float(u[0]) if np.ndim(gamma) == 0 else u.reshape(np.shape(gamma))


def approx_max_cdf(links, gamma):
    """Approximate CDF of the maximum, ``exp(-u(g))``."""
    out = np.exp(-np.asarray(u_of_gamma(links, gamma)))
    return float(out) if out.ndim == 0 else out


def approx_max_pdf(links, gamma):
    """Derivative of :func:`approx_max_cdf`: ``exp(-u) * sum_l theta_l e^{-theta_l g - nu_l}``."""
    links = as_linkset(links)
    g = np.atleast_1d(np.asarray(gamma, dtype=float))
    u, w = kernels.u_sums(links.theta, links.nu, g)
    out = np.exp(-u) * w
    return float(out[0]) if np.ndim(gamma) == 0 else out.reshape(np.shape(gamma))


def approx_max_quantile(links, p, rel_tol=1e-12):
    """Smallest g >= 0 with ``exp(-u(g)) >= p`` (0 if the atom at 0 already covers p)."""
    if not 0.0 < p < 1.0:
        raise ValueError("p must lie in (0, 1)")
    links = as_linkset(links)
    target = -math.log(p)
    if u_of_gamma(links, 0.0) <= target:
        return 0.0
    lo, hi = 0.0, 1.0 / float(links.theta.min())
    while u_of_gamma(links, hi) > target:
        lo, hi = hi, 2.0 * hi
    while hi - lo > rel_tol * hi:
        mid = 0.5 * (lo + hi)
        if u_of_gamma(links, mid) > target:
            lo = mid
        else:
            hi = mid
    return hi


def normalized_max_samples(batch, constants: NormalizingConstants):
    """``(max - b_L) / a_L`` for each realisation."""
    samples = batch.max_samples if isinstance(batch, SampleBatch) else np.asarray(batch, dtype=float)
    return (samples - constants.b) / constants.a


def gumbel_cdf(z):
    """Standard Gumbel CDF ``exp(-exp(-z))``."""
    with np.errstate(over="ignore"):
        out = np.exp(-np.exp(-np.asarray(z, dtype=float)))
    return float(out) if out.ndim == 0 else out


def gumbel_pdf(z):
    z = np.asarray(z, dtype=float)
    with np.errstate(over="ignore", invalid="ignore"):
        t = np.exp(-z)
        out = np.where(np.isinf(t), 0.0, t * np.exp(-t))
    return float(out) if out.ndim == 0 else out
