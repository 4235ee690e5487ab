"""Physical scenario -> per-link exponential rates, plus seeded channel sampling.

Rates, not scales
-----------------
Every ``theta`` and ``nu`` in this package is an exponential *rate*: the
first-hop SNR has CDF ``1 - exp(-theta * g)`` (mean ``1/theta``) and the
second-hop multiplier has CDF ``1 - exp(-nu * y)``.  A large ``theta`` is a
weak first hop, a large ``nu`` a weak second hop.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass, field, replace

import numpy as np

__all__ = [
    "ScenarioConfig",
    "ScenarioError",
    "LinkParams",
    "LinkSet",
    "SampleBatch",
    "db_to_linear",
    "linear_to_db",
    "draw_distances",
    "build_links",
    "links_from_arrays",
    "sample_batch",
    "sample_max",
    "link_draws",
    "DEFAULT_D1_RANGE",
    "DEFAULT_D2_RANGE",
]

DEFAULT_D1_RANGE = (0.5, 0.8)
DEFAULT_D2_RANGE = (0.5, 0.7)
SAMPLE_BLOCK = 1 << 16


class ScenarioError(ValueError):
    """Invalid scenario parameters; ``violations`` names every broken invariant."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("invalid scenario: " + ", ".join(self.violations))


def db_to_linear(db):
    return 10.0 ** (np.asarray(db, dtype=float) / 10.0) if np.ndim(db) else 10.0 ** (db / 10.0)


def linear_to_db(value):
    return 10.0 * np.log10(value) if np.ndim(value) else 10.0 * math.log10(value)


def draw_distances(num_relays, low, high, seed):
    """Relay distances drawn uniformly from ``(low, high)`` with their own seed."""
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))
    return rng.uniform(low, high, size=num_relays)


@dataclass(frozen=True)
class ScenarioConfig:
    """Network parameterisation.

    ``gamma_s_dbm`` is the source SNR P_s / sigma^2 on a dB scale; all
    computations use :attr:`source_snr`.  ``slot_length`` cancels from every
    statistic and is kept only so configs mirror the system model.
    """

    d1: tuple
    d2: tuple
    path_loss_exponent: float = 2.7
    gamma_s_dbm: float = 25.0
    noise_power: float = 1.0
    eh_efficiency: float = 0.9
    ts_factor: float = 0.3
    ps_factor: float = 0.4
    slot_length: float = 1.0
    num_relays: int = field(default=None)

    def __post_init__(self):
        object.__setattr__(self, "d1", tuple(float(v) for v in np.ravel(self.d1)))
        object.__setattr__(self, "d2", tuple(float(v) for v in np.ravel(self.d2)))
        if self.num_relays is None:
            object.__setattr__(self, "num_relays", len(self.d1))

    @property
    def source_snr(self) -> float:
        return 10.0 ** (self.gamma_s_dbm / 10.0)

    @property
    def source_power(self) -> float:
        return self.source_snr * self.noise_power

    def violations(self) -> list[str]:
        """Names of every violated invariant (empty when the config is valid)."""
        out = []
        if not (isinstance(self.num_relays, (int, np.integer)) and self.num_relays >= 1):
            out.append("nonpositive_relay_count")
        if len(self.d1) != self.num_relays or len(self.d2) != self.num_relays:
            out.append("distance_count_mismatch")
        if any(not (d > 0.0 and math.isfinite(d)) for d in self.d1 + self.d2):
            out.append("nonpositive_distance")
        if not self.path_loss_exponent > 0.0:
            out.append("nonpositive_path_loss_exponent")
        if not math.isfinite(self.gamma_s_dbm):
            out.append("nonfinite_source_snr")
        if not self.noise_power > 0.0:
            out.append("nonpositive_noise_power")
        if not 0.0 < self.eh_efficiency <= 1.0:
            out.append("eh_efficiency_out_of_range")
        if self.ts_factor < 0.0:
            out.append("negative_ts_factor")
        if self.ts_factor >= 1.0:
            out.append("ts_factor_at_unity")
        if self.ps_factor < 0.0:
            out.append("negative_ps_factor")
        if self.ps_factor >= 1.0:
            out.append("ps_factor_at_unity")
        if not self.slot_length > 0.0:
            out.append("nonpositive_slot_length")
        return out

    def check(self):
        bad = self.violations()
        if bad:
            raise ScenarioError(bad)
        return self

    def with_factors(self, alpha=None, lam=None) -> "ScenarioConfig":
        return replace(
            self,
            ts_factor=self.ts_factor if alpha is None else float(alpha),
            ps_factor=self.ps_factor if lam is None else float(lam),
        )

    def with_source_power(self, power) -> "ScenarioConfig":
        """Same noise, source power set to ``power`` (linear)."""
        return replace(self, gamma_s_dbm=linear_to_db(power / self.noise_power))

    def with_noise_power(self, sigma2) -> "ScenarioConfig":
        """Same source power, noise power set to ``sigma2``."""
        p = self.source_power
        return replace(self, noise_power=float(sigma2),
                       gamma_s_dbm=linear_to_db(p / sigma2))


@dataclass(frozen=True)
class LinkParams:
    theta: float
    nu: float
    link_index: int = 0


class LinkSet(Sequence):
    """Immutable sequence of :class:`LinkParams` backed by two rate arrays."""

    __slots__ = ("theta", "nu")

    def __init__(self, theta, nu):
        theta = np.array(theta, dtype=float).ravel()
        nu = np.array(nu, dtype=float).ravel()
        if theta.shape != nu.shape:
            raise ValueError("theta and nu must have the same length")
        if theta.size == 0:
            raise ValueError("at least one link is required")
        if np.any(~(theta > 0.0)) or np.any(np.isinf(theta)):
            raise ValueError("theta must be finite and positive")
        if np.any(~(nu >= 0.0)):
            raise ValueError("nu must be nonnegative")
        theta.flags.writeable = False
        nu.flags.writeable = False
        self.theta = theta
        self.nu = nu

    def __len__(self):
        return self.theta.size

    def __getitem__(self, i):
        if isinstance(i, slice):
            return LinkSet(self.theta[i], self.nu[i])
        i = range(len(self))[i]
        return LinkParams(float(self.theta[i]), float(self.nu[i]), i)

    def __add__(self, other):
        other = as_linkset(other)
        return LinkSet(np.concatenate([self.theta, other.theta]),
                       np.concatenate([self.nu, other.nu]))

    def __eq__(self, other):
        if not isinstance(other, LinkSet):
            return NotImplemented
        return np.array_equal(self.theta, other.theta) and np.array_equal(self.nu, other.nu)

    def __repr__(self):
        return f"LinkSet(L={len(self)}, theta={self.theta!r}, nu={self.nu!r})"


def links_from_arrays(theta, nu) -> LinkSet:
    """Broadcast scalars against arrays and wrap as a :class:`LinkSet`."""
    theta, nu = np.broadcast_arrays(np.asarray(theta, dtype=float), np.asarray(nu, dtype=float))
    return LinkSet(theta, nu)


def as_linkset(links) -> LinkSet:
    if isinstance(links, LinkSet):
        return links
    links = list(links)
    if not links:
        raise ValueError("at least one link is required")
    return LinkSet([p.theta for p in links], [p.nu for p in links])


def build_links(config: ScenarioConfig) -> LinkSet:
    """Per-relay rates for a scenario with a common noise power.

    theta_l = sigma^2 d1_l^zeta / ((1 - lambda) P_s)
    nu_l    = (1 - lambda)(1 - alpha) d2_l^zeta / (eta (2 alpha + lambda (1 - alpha)))

    With ``alpha = lambda = 0`` nothing is harvested; ``nu`` is then ``inf``
    and the link's end-to-end SNR is identically zero.
    """
    config.check()
    zeta = config.path_loss_exponent
    alpha = config.ts_factor
    lam = config.ps_factor
    d1 = np.asarray(config.d1)
    d2 = np.asarray(config.d2)
    theta = config.noise_power * d1 ** zeta / ((1.0 - lam) * config.source_power)
    split = 2.0 * alpha + lam * (1.0 - alpha)
    if split == 0.0:
        nu = np.full_like(d2, np.inf)
    else:
        nu = (1.0 - lam) * (1.0 - alpha) * d2 ** zeta / (config.eh_efficiency * split)
    return LinkSet(theta, nu)


@dataclass(frozen=True)
class SampleBatch:
    seed: int
    per_link_samples: np.ndarray
    max_samples: np.ndarray


def _block_stream(seed, position, block, hop):
    ss = np.random.SeedSequence(seed, spawn_key=(position, block, hop))
    return np.random.Generator(np.random.Philox(ss))


def link_draws(seed, position, n):
    """Unit-rate exponential draws ``(first_hop, second_hop)`` for one link.

    Link ``position`` owns the substreams ``(position, block, hop)`` for
    consecutive blocks of ``SAMPLE_BLOCK`` draws, so any link, block or hop
    can be generated independently of the others, and a shorter run is a
    prefix of a longer one.
    """
    first = np.empty(n)
    second = np.empty(n)
    for block, start in enumerate(range(0, n, SAMPLE_BLOCK)):
        stop = min(start + SAMPLE_BLOCK, n)
        first[start:stop] = _block_stream(seed, position, block, 0).standard_exponential(stop - start)
        second[start:stop] = _block_stream(seed, position, block, 1).standard_exponential(stop - start)
    return first, second


def _link_samples(theta, nu, seed, position, n):
    e1, e2 = link_draws(seed, position, n)
    gamma1 = e1 / theta
    if nu == 0.0:
        return gamma1
    if math.isinf(nu):
        return np.zeros(n)
    return gamma1 * np.minimum(1.0, e2 / nu)


def sample_batch(links, n: int, seed: int) -> SampleBatch:
    """Draw ``n`` realisations of every link's end-to-end SNR and their maximum.

    Each sample is ``gamma1 * min(1, phi2)`` with ``gamma1 ~ Exp(theta)`` and
    ``phi2 ~ Exp(nu)`` (rates).
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    links = as_linkset(links)
    per_link = np.empty((len(links), n))
    for pos in range(len(links)):
        per_link[pos] = _link_samples(links.theta[pos], links.nu[pos], seed, pos, n)
    return SampleBatch(int(seed), per_link, per_link.max(axis=0))


def sample_max(links, n: int, seed: int) -> np.ndarray:
    """``sample_batch(links, n, seed).max_samples`` without the L x n matrix."""
    if n < 1:
        raise ValueError("n must be at least 1")
    links = as_linkset(links)
    out = np.zeros(n)
    for pos in range(len(links)):
        np.maximum(out, _link_samples(links.theta[pos], links.nu[pos], seed, pos, n), out=out)
    return out
