"""Named experiments.  Each maps a manifest to a summary table and curve tables."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .config import Manifest
from .evt import (
    approx_max_cdf,
    bin_thetas,
    gumbel_cdf,
    normalizing_constants,
    select_beta,
)
from .exact import (
    empirical_cdf,
    exact_max_cdf,
    ks_statistic,
    mean_theta_iid_baseline,
    quantile_grid,
)
from .frozen import PITFALL_THETA_SEED, crossing_pair, gumbel_geometry, pitfall_links
from .metrics import capacity_report, outage_probability
from .optimize import (
    maximize_ergodic,
    maximize_throughput,
    minimize_outage,
    protocol_comparison,
)
from .ordering import check_dominance, predict_order
from .scenario import ScenarioConfig, build_links, db_to_linear, sample_max

__all__ = ["ExperimentOutput", "RUNNERS", "run_experiment", "describe"]


@dataclass
class ExperimentOutput:
    summary: list[dict]
    curves: dict[str, list[dict]] = field(default_factory=dict)


def _floats(values):
    return [float(v) for v in values]


def _step_grid(step, top):
    return _floats(np.round(np.arange(0.0, top + 1e-9, step), 10))


def cdf_convergence(m: Manifest) -> ExperimentOutput:
    """Normalised maximum against the standard Gumbel law for growing L."""
    sizes = m.grid.get("L", [10, 60, 200])
    geometry = m.grid.get("geometry", "two_level")
    num_bins = m.grid.get("num_bins", 10)
    z = np.linspace(m.grid.get("z_min", -3.0), m.grid.get("z_max", 8.0), m.grid.get("points", 221))
    summary, curves = [], {}
    for size in sizes:
        links = gumbel_geometry(size) if geometry == "two_level" else build_links(m.scenario_config(size))
        binning = bin_thetas(links, num_bins)
        choice = select_beta(binning)
        consts = normalizing_constants(links, binning=binning, beta=choice)
        norm = (sample_max(links, m.monte_carlo_n, m.sampling_seed) - consts.b) / consts.a
        emp = empirical_cdf(norm, z)
        curves[f"cdf_convergence_L{size}"] = [
            {"z": float(a), "empirical_cdf": float(e), "gumbel_cdf": float(g)}
            for a, e, g in zip(z, emp.values, gumbel_cdf(z))
        ]
        summary.append({
            "L": int(size), "case": consts.case, "beta": consts.beta,
            "beta_count": consts.beta_count, "heuristic": choice.heuristic,
            "a_L": consts.a, "b_L": consts.b, "ks": ks_statistic(norm, gumbel_cdf),
        })
    return ExperimentOutput(summary, curves)


def cdf_compare(m: Manifest) -> ExperimentOutput:
    """Empirical maximum CDF against exp(-u) and the exact product form."""
    summary, curves = [], {}
    for size in m.grid.get("L", [15, 20]):
        links = build_links(m.scenario_config(size))
        samples = sample_max(links, m.monte_carlo_n, m.sampling_seed)
        grid = quantile_grid(samples, m.grid.get("points", 400))
        emp = empirical_cdf(samples, grid)
        approx = approx_max_cdf(links, grid)
        exact = exact_max_cdf(links, grid)
        curves[f"cdf_compare_L{size}"] = [
            {"gamma": float(g), "empirical": float(e), "evt_approx": float(a), "exact_product": float(x)}
            for g, e, a, x in zip(grid, emp.values, approx, exact)
        ]
        summary.append({
            "L": int(size),
            "ks_evt_approx": ks_statistic(samples, lambda x: approx_max_cdf(links, x)),
            "ks_exact_product": ks_statistic(samples, lambda x: exact_max_cdf(links, x)),
        })
    return ExperimentOutput(summary, curves)


def iid_pitfall(m: Manifest) -> ExperimentOutput:
    """Mean-theta i.i.d. baseline against the i.n.i.d. law on two theta layouts."""
    size = m.grid.get("L", 64)
    nu = m.grid.get("nu", 0.2)
    summary, curves = [], {}
    for kind in ("two_level", "uniform"):
        links = pitfall_links(kind, size, nu, m.grid.get("theta_seed", PITFALL_THETA_SEED))
        base = mean_theta_iid_baseline(links)
        samples = sample_max(links, m.monte_carlo_n, m.sampling_seed)
        grid = quantile_grid(samples, m.grid.get("points", 400))
        emp = empirical_cdf(samples, grid)
        curves[f"iid_pitfall_{kind}"] = [
            {"gamma": float(g), "empirical": float(e), "inid_approx": float(a), "iid_baseline": float(b)}
            for g, e, a, b in zip(grid, emp.values, approx_max_cdf(links, grid), approx_max_cdf(base, grid))
        ]
        ks_inid = ks_statistic(samples, lambda x: approx_max_cdf(links, x))
        ks_iid = ks_statistic(samples, lambda x: approx_max_cdf(base, x))
        summary.append({
            "geometry": kind, "L": int(size), "nu": float(nu),
            "ks_inid": ks_inid, "ks_iid_baseline": ks_iid, "ratio": ks_iid / ks_inid,
        })
    return ExperimentOutput(summary, curves)


def capacity_sweep(m: Manifest) -> ExperimentOutput:
    """Capacity, throughput and outage against L and source SNR, with a Monte Carlo check."""
    gamma_th = db_to_linear(m.grid.get("gamma_th_db", 1.0))
    snrs = m.grid.get("gamma_s_dbm", [m.scenario_config().gamma_s_dbm])
    summary, curve = [], []
    for size in m.grid.get("L", [10, 20, 40]):
        base = m.scenario_config(size)
        for snr in snrs:
            cfg = replace(base, gamma_s_dbm=float(snr))
            links = build_links(cfg)
            rep = capacity_report(links, cfg.ts_factor, gamma_th)
            samples = sample_max(links, m.monte_carlo_n, m.sampling_seed)
            mc = 0.5 * float(np.mean(np.log2(1.0 + samples)))
            mc_outage = float(np.mean(samples <= gamma_th))
            row = {"L": int(size), "gamma_s_dbm": float(snr)}
            row.update(zip(rep.field_names(), rep.as_row()))
            row.update({"mc_capacity": mc, "capacity_rel_err": rep.ergodic_capacity / mc - 1.0,
                        "mc_outage": mc_outage})
            summary.append(row)
            curve.append({"L": int(size), "gamma_s_dbm": float(snr),
                          "ergodic_capacity": rep.ergodic_capacity, "mc_capacity": mc})
    return ExperimentOutput(summary, {"capacity_curve": curve})


def outage_surface(m: Manifest) -> ExperimentOutput:
    """Outage probability over the (alpha, lambda) grid."""
    cfg = m.scenario_config()
    gamma_th = db_to_linear(m.grid.get("gamma_th_db", 15.0))
    alphas = m.grid.get("alpha", _step_grid(0.05, 0.9))
    lambdas = m.grid.get("lambda", _step_grid(0.05, 0.9))
    curve = []
    for a in alphas:
        for lam in lambdas:
            p = outage_probability(build_links(cfg.with_factors(a, lam)), gamma_th)
            curve.append({"alpha": float(a), "lambda": float(lam), "outage": p,
                          "log_outage": math.log(p) if p > 0.0 else -math.inf})
    best = min(curve, key=lambda r: (r["outage"], r["alpha"], r["lambda"]))
    summary = [{"gamma_s_dbm": cfg.gamma_s_dbm, "gamma_th": gamma_th, "alpha_best": best["alpha"],
                "lambda_best": best["lambda"], "outage_best": best["outage"]}]
    return ExperimentOutput(summary, {"outage_surface": curve})


def _random_scenario(rng, size):
    return ScenarioConfig(
        d1=tuple(rng.uniform(0.3, 1.0, size)),
        d2=tuple(rng.uniform(0.3, 1.0, size)),
        path_loss_exponent=float(rng.uniform(2.0, 4.0)),
        gamma_s_dbm=float(rng.uniform(0.0, 40.0)),
        eh_efficiency=float(rng.uniform(0.3, 1.0)),
        ts_factor=float(rng.uniform(0.0, 0.8)),
        ps_factor=float(rng.uniform(0.0, 0.8)),
    )


def ordering_sweep(num_scenarios, seed, tol=1e-9):
    """Dominance verdicts for P_s, alpha and sigma^2 moves over random scenarios."""
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))
    rows = []
    for i in range(num_scenarios):
        cfg = _random_scenario(rng, int(rng.integers(2, 41)))
        if cfg.ts_factor == 0.0 and cfg.ps_factor == 0.0:
            cfg = cfg.with_factors(alpha=0.1)
        a = build_links(cfg)
        moves = {
            "source_power": (cfg.source_power, 2.0 * cfg.source_power,
                             cfg.with_source_power(2.0 * cfg.source_power)),
            "ts_factor": (cfg.ts_factor, cfg.ts_factor + 0.1, cfg.with_factors(alpha=cfg.ts_factor + 0.1)),
            "noise_power": (cfg.noise_power, 2.0 * cfg.noise_power, cfg.with_noise_power(2.0 * cfg.noise_power)),
        }
        for name, (old, new, cfg_b) in moves.items():
            v = check_dominance(a, build_links(cfg_b), tol=tol, parameter=name)
            rows.append({"scenario": i, "parameter": name, "predicted": predict_order(name, old, new),
                         "direction": v.direction, "max_violation": v.max_violation})
    return rows


def ordering_check(m: Manifest) -> ExperimentOutput:
    """Random-scenario dominance sweep plus the frozen lambda crossing example."""
    rows = ordering_sweep(m.grid.get("num_scenarios", 100), m.grid.get("scenario_seed", 2024))
    cfg, lam_a, lam_b = crossing_pair()
    la, lb = build_links(cfg.with_factors(lam=lam_a)), build_links(cfg.with_factors(lam=lam_b))
    v = check_dominance(la, lb, parameter="ps_factor")
    rows.append({"scenario": -1, "parameter": "ps_factor",
                 "predicted": predict_order("ps_factor", lam_a, lam_b, "mid"),
                 "direction": v.direction, "max_violation": v.max_violation})
    curve = [{"gamma": float(g), "cdf_a": float(fa), "cdf_b": float(fb)}
             for g, fa, fb in zip(v.grid, approx_max_cdf(la, v.grid), approx_max_cdf(lb, v.grid))]
    return ExperimentOutput(rows, {"ordering_crossing": curve})


def _result_row(res):
    return {"objective_kind": res.objective_kind, "alpha_star": res.alpha_star,
            "lambda_star": res.lambda_star, "value": res.objective_value,
            "evaluations": res.evaluations, "converged": res.converged}


def _eval_curve(res):
    return [{"alpha": float(a), "lambda": float(lam), "value": float(v)} for (a, lam), v in res.evaluated]


def optimize_outage(m: Manifest) -> ExperimentOutput:
    """Outage-minimising lambda at alpha_max, with the full outage profile."""
    cfg = m.scenario_config()
    gamma_th = db_to_linear(m.grid.get("gamma_th_db", 15.0))
    alpha_max = m.grid.get("alpha_max", 0.9)
    lambda_max = m.grid.get("lambda_max", 0.9)
    res = minimize_outage(cfg, gamma_th, alpha_max, lambda_max, m.grid.get("lambda0"))
    profile = [{"lambda": lam, "outage": outage_probability(build_links(cfg.with_factors(alpha_max, lam)), gamma_th)}
               for lam in _step_grid(0.01, lambda_max)]
    return ExperimentOutput([_result_row(res)], {"outage_profile": profile, "outage_trace": _eval_curve(res)})


def optimize_ergodic(m: Manifest) -> ExperimentOutput:
    """Capacity-maximising lambda over a finite set at alpha_max."""
    cfg = m.scenario_config()
    res = maximize_ergodic(cfg, m.grid.get("alpha_max", 0.9), m.grid.get("lambda", _step_grid(0.1, 0.9)))
    return ExperimentOutput([_result_row(res)], {"ergodic_profile": _eval_curve(res)})


def optimize_throughput(m: Manifest) -> ExperimentOutput:
    """Throughput-maximising (alpha, lambda) by 2-D grid search."""
    cfg = m.scenario_config()
    res = maximize_throughput(cfg, m.grid.get("alpha", _step_grid(0.1, 0.9)),
                              m.grid.get("lambda", _step_grid(0.1, 0.9)),
                              m.grid.get("convention", "as_written"))
    return ExperimentOutput([_result_row(res)], {"throughput_surface": _eval_curve(res)})


def protocol_compare(m: Manifest) -> ExperimentOutput:
    """TS-only, PS-only and hybrid relays across source SNR."""
    cfg = m.scenario_config()
    rows = protocol_comparison(
        cfg, m.grid.get("gamma_s_dbm", _floats(range(0, 41, 5))),
        db_to_linear(m.grid.get("gamma_th_db", 15.0)),
        m.grid.get("alpha_max", 0.9), m.grid.get("lambda_max", 0.9),
        m.grid.get("lambda"), bool(m.grid.get("report_throughput", False)))
    summary = [{"gamma_s_dbm": float(r.gamma_s_dbm), "protocol": r.protocol, "metric": r.metric,
                "alpha": float(r.alpha), "lambda": float(r.lam), "value": float(r.value)} for r in rows]
    return ExperimentOutput(summary)


RUNNERS = {
    "cdf_convergence": cdf_convergence,
    "cdf_compare": cdf_compare,
    "iid_pitfall": iid_pitfall,
    "capacity_sweep": capacity_sweep,
    "outage_surface": outage_surface,
    "ordering_check": ordering_check,
    "optimize_outage": optimize_outage,
    "optimize_ergodic": optimize_ergodic,
    "optimize_throughput": optimize_throughput,
    "protocol_compare": protocol_compare,
}


def describe(name) -> str:
    return RUNNERS[name].__doc__.strip().splitlines()[0]


def run_experiment(manifest: Manifest) -> ExperimentOutput:
    return RUNNERS[manifest.experiment](manifest)
