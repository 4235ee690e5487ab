"""Frozen test geometries shared by experiments, tests and benchmarks.

The source gives no relay placements, so these are fixed once here and
never re-drawn to make a check pass.
"""

from __future__ import annotations

import math

import numpy as np

from .scenario import (
    DEFAULT_D1_RANGE,
    DEFAULT_D2_RANGE,
    LinkSet,
    ScenarioConfig,
    draw_distances,
    links_from_arrays,
)

__all__ = [
    "BASELINE_SEEDS",
    "baseline_config",
    "gumbel_geometry",
    "pitfall_links",
    "crossing_pair",
]

BASELINE_SEEDS = (1, 2)
GUMBEL_THETAS = (1.0, 3.0)
GUMBEL_NUS = (0.05, 0.1, 0.15)
PITFALL_THETA_SEED = 11


def baseline_config(num_relays, seeds=BASELINE_SEEDS, **overrides) -> ScenarioConfig:
    """25 dB source SNR, eta 0.9, alpha 0.3, lambda 0.4, zeta 2.7, random distances."""
    d1 = draw_distances(num_relays, *DEFAULT_D1_RANGE, seeds[0])
    d2 = draw_distances(num_relays, *DEFAULT_D2_RANGE, seeds[1])
    return ScenarioConfig(d1=tuple(d1), d2=tuple(d2), **overrides)


def gumbel_geometry(num_relays) -> LinkSet:
    """Two first-hop rates: theta 1 on ceil(2L/3) links, theta 3 on the rest.

    Second-hop rates cycle through 0.05, 0.1, 0.15, so neither hop is
    identically distributed.  The theta-1 bin passes both beta surrogates for
    every L >= 2.
    """
    k = math.ceil(2 * num_relays / 3)
    theta = np.r_[np.full(k, GUMBEL_THETAS[0]), np.full(num_relays - k, GUMBEL_THETAS[1])]
    nu = np.array([GUMBEL_NUS[i % len(GUMBEL_NUS)] for i in range(num_relays)])
    return links_from_arrays(theta, nu)


def pitfall_links(kind, num_relays=64, nu=0.2, seed=PITFALL_THETA_SEED) -> LinkSet:
    """Common nu; theta either half 1 / half 3 (``"two_level"``) or uniform on [1, 3]."""
    if kind == "two_level":
        half = num_relays // 2
        theta = np.r_[np.full(half, 1.0), np.full(num_relays - half, 3.0)]
    elif kind == "uniform":
        theta = draw_distances(num_relays, 1.0, 3.0, seed)
    else:
        raise ValueError(f"unknown pitfall geometry {kind!r}")
    return links_from_arrays(theta, np.full(num_relays, float(nu)))


def crossing_pair():
    """Baseline L=10 at alpha 0.1 where raising lambda 0.1 -> 0.3 makes the CDFs cross."""
    return baseline_config(10, ts_factor=0.1), 0.1, 0.3
