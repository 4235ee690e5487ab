"""Choice of time-switching (alpha) and power-splitting (lambda) factors.

Both the outage objective and the ergodic capacity increase with alpha, so
alpha* = alpha_max and only lambda is searched.  Outage minimisation works
on ``g(lambda) = sum_l exp(-theta_l(lambda) gamma_th - nu_l(lambda))``
(outage = exp(-g)), which avoids underflow in deep outage.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .evt import u_of_gamma
from .metrics import ergodic_capacity, outage_probability
from .quadrature import QuadratureError
from .scenario import ScenarioConfig, build_links

__all__ = [
    "OptimizationResult",
    "OptimizationAborted",
    "ProtocolRow",
    "outage_objective",
    "warm_start",
    "minimize_outage",
    "maximize_ergodic",
    "maximize_throughput",
    "protocol_comparison",
]

GRAD_TOL = 1e-10
WIDTH_TOL = 1e-8
MAX_EVALS = 500


@dataclass
class OptimizationResult:
    """Outcome of a TS/PS search.

    ``trace`` is the incumbent history ``((alpha, lambda), value)``, so its
    values are monotone in the optimisation direction; ``evaluated`` holds
    every objective evaluation in order.  For outage problems ``value`` is
    the outage probability.
    """

    alpha_star: float
    lambda_star: float
    objective_value: float
    objective_kind: str
    trace: list = field(default_factory=list)
    converged: bool = True
    evaluations: int = 0
    evaluated: list = field(default_factory=list)

    def as_row(self):
        return (self.objective_kind, self.alpha_star, self.lambda_star,
                self.objective_value, self.evaluations, self.converged)


class OptimizationAborted(RuntimeError):
    def __init__(self, message, partial):
        super().__init__(message)
        self.partial = partial


def outage_objective(config: ScenarioConfig, gamma_th, alpha, lam):
    """``(g, dg/dlambda)`` at ``(alpha, lambda)``; outage is ``exp(-g)``."""
    links = build_links(config.with_factors(alpha, lam))
    theta, nu = links.theta, links.nu
    terms = np.exp(-theta * gamma_th - nu)
    g = u_of_gamma(links, gamma_th)
    split = 2.0 * alpha + lam * (1.0 - alpha)
    dtheta = theta / (1.0 - lam)
    if split == 0.0:
        dnu = np.zeros_like(nu)
    else:
        dnu = -nu * (1.0 + alpha) / ((1.0 - lam) * split)
    slope = terms * (-gamma_th * dtheta - dnu)
    slope = np.where(terms > 0.0, slope, 0.0)
    return g, math.fsum(slope)


def warm_start(config: ScenarioConfig, lambda_max, pivot_dbm=10.0):
    """Initial lambda: 0 below the SNR pivot (low-SNR ordering), else 0.5."""
    return 0.0 if config.gamma_s_dbm < pivot_dbm else min(0.5, lambda_max)


class _Counter:
    def __init__(self, fn):
        self.fn = fn
        self.count = 0
        self.history = []

    def __call__(self, x):
        self.count += 1
        val, slope = self.fn(x)
        self.history.append((x, val))
        return val, slope


def _ascend(fg, lo, hi, x0, trace):
    """Local maximiser of a scalar function on [lo, hi] from its derivative.

    Walks uphill with doubling steps until the derivative changes sign,
    then shrinks the bracket with secant steps on the derivative, falling
    back to bisection whenever a secant step leaves the bracket or fails to
    halve it.  Returns ``(x, value, slope, converged)``.
    """
    x = min(max(x0, lo), hi)
    val, d = fg(x)
    best = (x, val)
    trace.append(best)

    def improve(xn, vn):
        nonlocal best
        if vn > best[1]:
            best = (xn, vn)
            trace.append(best)

    if abs(d) <= GRAD_TOL or (x == lo and d < 0.0) or (x == hi and d > 0.0):
        return x, val, d, True

    direction = 1.0 if d > 0.0 else -1.0
    step = 0.05 * (hi - lo)
    a, da = x, d
    while True:
        if fg.count >= MAX_EVALS:
            return best[0], best[1], d, False
        b = min(max(a + direction * step, lo), hi)
        vb, db = fg(b)
        improve(b, vb)
        if abs(db) <= GRAD_TOL:
            return b, vb, db, True
        if (db > 0.0) != (direction > 0.0):
            break
        if b in (lo, hi):
            return b, vb, db, True
        a, da = b, db
        step *= 2.0

    # derivative positive at left, negative at right
    left, dl, right, dr = (a, da, b, db) if a < b else (b, db, a, da)
    width = right - left
    while right - left > WIDTH_TOL:
        if fg.count >= MAX_EVALS:
            return best[0], best[1], dl, False
        x = left - dl * (right - left) / (dr - dl)
        if not left < x < right or (right - left) > 0.5 * width:
            x = 0.5 * (left + right)
        width = right - left
        vx, dx = fg(x)
        improve(x, vx)
        if abs(dx) <= GRAD_TOL:
            return x, vx, dx, True
        if dx > 0.0:
            left, dl = x, dx
        else:
            right, dr = x, dx
    x = left if best[0] != right else right
    vx, dx = fg(x) if x != best[0] else (best[1], dl if x == left else dr)
    improve(x, vx)
    return best[0], best[1], dx, True


def _outage_search(config, gamma_th, alpha, lam_lo, lam_hi, starts):
    fg = _Counter(lambda lam: outage_objective(config, gamma_th, alpha, lam))
    trace = []
    best = None
    converged = False
    for i, start in enumerate(starts):
        x, val, slope, ok = _ascend(fg, lam_lo, lam_hi, start, trace)
        inward = (x == lam_lo and slope > GRAD_TOL) or (x == lam_hi and slope < -GRAD_TOL)
        if best is None or val > best[1]:
            best = (x, val)
            converged = ok and not inward
        if i == 0 and ok and not inward:
            break
    return best, converged, fg, trace


def minimize_outage(config_template: ScenarioConfig, gamma_th, alpha_max=0.9,
                    lambda_max=0.9, lambda0=None, pivot_dbm=10.0) -> OptimizationResult:
    """Outage-minimising factors at threshold ``gamma_th`` (linear).

    alpha is pinned at ``alpha_max``; lambda is found by a guarded ascent on
    ``g`` started from :func:`warm_start` (or ``lambda0``).  Should that run
    stop at a bound whose derivative points inward, or fail to converge, it
    is restarted from 0, 0.5 and ``lambda_max`` and the best point kept.
    """
    if not 0.0 < alpha_max < 1.0:
        raise ValueError("alpha_max must lie in (0, 1)")
    if not 0.0 <= lambda_max < 1.0:
        raise ValueError("lambda_max must lie in [0, 1)")
    if not gamma_th > 0.0:
        raise ValueError("gamma_th must be positive")
    start = warm_start(config_template, lambda_max, pivot_dbm) if lambda0 is None else lambda0
    starts = [start] + [s for s in (0.0, min(0.5, lambda_max), lambda_max)]
    (lam, g), converged, fg, trace = _outage_search(
        config_template, gamma_th, alpha_max, 0.0, lambda_max, starts)
    return OptimizationResult(
        alpha_star=alpha_max,
        lambda_star=lam,
        objective_value=math.exp(-g),
        objective_kind="outage_log",
        trace=[((alpha_max, x), math.exp(-v)) for x, v in trace],
        converged=converged,
        evaluations=fg.count,
        evaluated=[((alpha_max, x), math.exp(-v)) for x, v in fg.history],
    )


def _capacity(config, alpha, lam):
    return ergodic_capacity(build_links(config.with_factors(alpha, lam)))


def _exhaustive(points, value_fn, kind):
    trace, evaluated = [], []
    best = None
    for point in points:
        try:
            v = value_fn(*point)
        except QuadratureError as exc:
            partial = OptimizationResult(
                best[0][0] if best else math.nan, best[0][1] if best else math.nan,
                best[1] if best else math.nan, kind, trace, False, len(evaluated), evaluated)
            raise OptimizationAborted(f"quadrature failed at {point}: {exc}", partial) from exc
        evaluated.append((point, v))
        if best is None or v > best[1]:
            best = (point, v)
            trace.append(best)
    (a, lam), v = best
    return OptimizationResult(a, lam, v, kind, trace, True, len(evaluated), evaluated)


def maximize_ergodic(config_template: ScenarioConfig, alpha_max=0.9, lambdas=None) -> OptimizationResult:
    """Best lambda from the finite set ``lambdas`` at alpha = alpha_max (ties -> smaller lambda)."""
    if lambdas is None:
        lambdas = np.round(np.arange(0.0, 0.95, 0.1), 10)
    lambdas = sorted(float(v) for v in lambdas)
    if not lambdas:
        raise ValueError("lambda set is empty")
    if lambdas[0] < 0.0 or lambdas[-1] >= 1.0:
        raise ValueError("lambda values must lie in [0, 1)")
    if not 0.0 <= alpha_max < 1.0:
        raise ValueError("alpha_max must lie in [0, 1)")
    return _exhaustive([(alpha_max, lam) for lam in lambdas],
                       lambda a, lam: _capacity(config_template, a, lam), "ergodic_capacity")


def maximize_throughput(config_template: ScenarioConfig, alpha_grid, lambda_grid,
                        convention="as_written") -> OptimizationResult:
    """Exhaustive 2-D search of the throughput (ties -> smaller alpha, then lambda)."""
    alphas = sorted(float(v) for v in alpha_grid)
    lambdas = sorted(float(v) for v in lambda_grid)
    if not alphas or not lambdas:
        raise ValueError("grids must be nonempty")
    if alphas[0] < 0.0 or alphas[-1] >= 1.0 or lambdas[0] < 0.0 or lambdas[-1] >= 1.0:
        raise ValueError("grid values must lie in [0, 1)")
    scale = 2.0 if convention == "ts_only_discount" else 1.0
    if convention not in ("as_written", "ts_only_discount"):
        raise ValueError(f"unknown convention {convention!r}")

    def value(a, lam):
        return scale * (1.0 - a) * _capacity(config_template, a, lam)

    return _exhaustive([(a, lam) for a in alphas for lam in lambdas], value, "throughput")


@dataclass(frozen=True)
class ProtocolRow:
    gamma_s_dbm: float
    protocol: str
    metric: str
    alpha: float
    lam: float
    value: float

    def as_row(self):
        return (self.gamma_s_dbm, self.protocol, self.metric, self.alpha, self.lam, self.value)


def protocol_comparison(config_template: ScenarioConfig, gamma_s_dbm, gamma_th,
                        alpha_max=0.9, lambda_max=0.9, lambdas=None,
                        report_throughput=False) -> list[ProtocolRow]:
    """Outage- and capacity-optimal performance of TS-only, PS-only and hybrid relays.

    TS-only fixes lambda = 0, PS-only fixes alpha = 0, hybrid searches both.
    Because the hybrid region contains the other two, the hybrid entry is
    the best of its own search and the two restricted optima.
    """
    if lambdas is None:
        lambdas = np.round(np.arange(0.0, lambda_max + 1e-9, 0.1), 10)
    ps_lambdas = [float(v) for v in lambdas if v > 0.0] or [lambda_max]
    rows = []
    for snr in gamma_s_dbm:
        cfg = replace(config_template, gamma_s_dbm=float(snr))

        def outage(a, lam):
            return outage_probability(build_links(cfg.with_factors(a, lam)), gamma_th)

        ts_out = outage(alpha_max, 0.0)
        (ps_lam, _), _, _, _ = _outage_search(
            cfg, gamma_th, 0.0, 0.0, lambda_max,
            [min(0.5, lambda_max), lambda_max, 0.05 * lambda_max])
        ps_out = outage(0.0, ps_lam)
        hyb = minimize_outage(cfg, gamma_th, alpha_max, lambda_max)
        hyb_pt = min([(hyb.objective_value, alpha_max, hyb.lambda_star),
                      (ts_out, alpha_max, 0.0), (ps_out, 0.0, ps_lam)])
        rows += [
            ProtocolRow(snr, "ts", "outage", alpha_max, 0.0, ts_out),
            ProtocolRow(snr, "ps", "outage", 0.0, ps_lam, ps_out),
            ProtocolRow(snr, "hybrid", "outage", hyb_pt[1], hyb_pt[2], hyb_pt[0]),
        ]

        ts_cap = _capacity(cfg, alpha_max, 0.0)
        ps = _exhaustive([(0.0, lam) for lam in ps_lambdas],
                         lambda a, lam: _capacity(cfg, a, lam), "ergodic_capacity")
        hyb_c = maximize_ergodic(cfg, alpha_max, lambdas)
        cap_pt = max([(hyb_c.objective_value, -alpha_max, -hyb_c.lambda_star),
                      (ts_cap, -alpha_max, -0.0), (ps.objective_value, -0.0, -ps.lambda_star)])
        best_cap = {
            "ts": (alpha_max, 0.0, ts_cap),
            "ps": (0.0, ps.lambda_star, ps.objective_value),
            "hybrid": (-cap_pt[1], -cap_pt[2], cap_pt[0]),
        }
        for name, (a, lam, c) in best_cap.items():
            rows.append(ProtocolRow(snr, name, "ergodic_capacity", a, lam, c))
            if report_throughput:
                rows.append(ProtocolRow(snr, name, "throughput_as_written", a, lam, (1.0 - a) * c))
                rows.append(ProtocolRow(snr, name, "throughput_ts_only_discount", a, lam,
                                        2.0 * (1.0 - a) * c))
    return rows
