"""JSON scenario configs and experiment manifests.

Scenario config keys::

    L, d1, d2, zeta, gamma_s_dbm, sigma2, eta, alpha, lambda, T

``d1`` and ``d2`` are either explicit distance lists or
``{"min": ..., "max": ..., "seed": ...}`` draws.  A draw without its own
seed takes the manifest's geometry seed (d1) or geometry seed + 1 (d2).
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

from .scenario import ScenarioConfig, draw_distances

__all__ = [
    "EXPERIMENTS",
    "MC_EXPERIMENTS",
    "ConfigError",
    "Manifest",
    "scenario_violations",
    "scenario_from_dict",
    "manifest_violations",
    "load_manifest",
    "load_json",
    "config_hash",
]

EXPERIMENTS = (
    "cdf_convergence",
    "cdf_compare",
    "iid_pitfall",
    "capacity_sweep",
    "outage_surface",
    "ordering_check",
    "optimize_outage",
    "optimize_ergodic",
    "optimize_throughput",
    "protocol_compare",
)
MC_EXPERIMENTS = ("cdf_convergence", "cdf_compare", "iid_pitfall", "capacity_sweep")

SCENARIO_KEYS = ("L", "d1", "d2", "zeta", "gamma_s_dbm", "sigma2", "eta", "alpha", "lambda", "T")
_FIELD = {
    "zeta": "path_loss_exponent",
    "gamma_s_dbm": "gamma_s_dbm",
    "sigma2": "noise_power",
    "eta": "eh_efficiency",
    "alpha": "ts_factor",
    "lambda": "ps_factor",
    "T": "slot_length",
}
MANIFEST_KEYS = ("experiment", "scenario", "monte_carlo_n", "seeds", "output_dir", "grid")


class ConfigError(ValueError):
    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


def load_json(path):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def _is_number(v):
    return isinstance(v, (int, float)) and not isinstance(v, bool)


def _distance_violations(key, dist, num_relays):
    if isinstance(dist, list):
        out = []
        if not all(_is_number(v) for v in dist):
            out.append(f"bad_type:{key}")
        elif num_relays is not None and len(dist) != num_relays:
            out.append("distance_count_mismatch")
        return out
    if isinstance(dist, dict):
        out = [f"unknown_key:{key}.{k}" for k in dist if k not in ("min", "max", "seed")]
        for k in ("min", "max"):
            if k not in dist:
                out.append(f"missing_key:{key}.{k}")
            elif not _is_number(dist[k]):
                out.append(f"bad_type:{key}.{k}")
        if "seed" in dist and not (isinstance(dist["seed"], int) and dist["seed"] >= 0):
            out.append(f"bad_type:{key}.seed")
        if not out:
            if dist["min"] <= 0.0:
                out.append("nonpositive_distance")
            if dist["max"] < dist["min"]:
                out.append(f"inverted_range:{key}")
        if num_relays is None:
            out.append("missing_key:L")
        return out
    return [f"bad_type:{key}"]


def _schema_violations(obj):
    if not isinstance(obj, dict):
        return ["bad_type:scenario"]
    out = [f"unknown_key:{k}" for k in obj if k not in SCENARIO_KEYS]
    for k in ("d1", "d2"):
        if k not in obj:
            out.append(f"missing_key:{k}")
    num_relays = obj.get("L")
    if num_relays is not None and not (isinstance(num_relays, int) and not isinstance(num_relays, bool)):
        out.append("bad_type:L")
        num_relays = None
    elif num_relays is not None and num_relays < 1:
        out.append("nonpositive_relay_count")
        num_relays = None
    if num_relays is None and "L" not in obj:
        lists = [obj[k] for k in ("d1", "d2") if isinstance(obj.get(k), list)]
        num_relays = len(lists[0]) if lists else None
    for k in ("d1", "d2"):
        if k in obj:
            out += _distance_violations(k, obj[k], num_relays)
    for k in _FIELD:
        if k in obj and not _is_number(obj[k]):
            out.append(f"bad_type:{k}")
    return list(dict.fromkeys(out))


def _draw(dist, num_relays, seed):
    if isinstance(dist, list):
        return tuple(float(v) for v in dist)
    return tuple(draw_distances(num_relays, float(dist["min"]), float(dist["max"]), dist.get("seed", seed)))


def scenario_from_dict(obj, geometry_seed=None, num_relays=None) -> ScenarioConfig:
    """Build a :class:`ScenarioConfig`; ``num_relays`` overrides ``L`` for drawn distances.

    Raises :class:`ConfigError` listing every schema and invariant violation.
    """
    bad = _schema_violations(obj)
    if bad:
        raise ConfigError(bad)
    num_relays = num_relays or obj.get("L") or len(obj["d1"] if isinstance(obj["d1"], list) else obj["d2"])
    g = 0 if geometry_seed is None else geometry_seed
    d1 = _draw(obj["d1"], num_relays, g)
    d2 = _draw(obj["d2"], num_relays, g + 1)
    if len(d1) > num_relays:
        d1, d2 = d1[:num_relays], d2[:num_relays]
    kwargs = {_FIELD[k]: float(obj[k]) for k in _FIELD if k in obj}
    config = ScenarioConfig(d1=d1, d2=d2, num_relays=num_relays, **kwargs)
    bad = config.violations()
    if bad:
        raise ConfigError(bad)
    return config


def scenario_violations(obj, geometry_seed=None) -> list[str]:
    """Every violated schema rule or scenario invariant (empty when valid).

    Unknown keys do not stop the invariant checks on the remaining fields.
    """
    schema = _schema_violations(obj)
    if any(not v.startswith("unknown_key:") for v in schema):
        return schema
    known = {k: v for k, v in obj.items() if k in SCENARIO_KEYS}
    try:
        scenario_from_dict(known, geometry_seed)
    except ConfigError as exc:
        return schema + exc.violations
    return schema


@dataclass
class Manifest:
    experiment: str
    scenario: dict
    monte_carlo_n: int = 100_000
    geometry_seed: int = 1
    sampling_seed: int | None = None
    output_dir: str = "out"
    grid: dict = field(default_factory=dict)

    def scenario_config(self, num_relays=None) -> ScenarioConfig:
        return scenario_from_dict(self.scenario, self.geometry_seed, num_relays)

    def resolved(self) -> dict:
        """Canonical dictionary of everything that determines the outputs."""
        return {
            "experiment": self.experiment,
            "scenario": self.scenario,
            "monte_carlo_n": self.monte_carlo_n,
            "seeds": {"geometry": self.geometry_seed, "sampling": self.sampling_seed},
            "grid": self.grid,
        }


def config_hash(obj) -> str:
    text = json.dumps(obj, sort_keys=True, separators=(",", ":"), allow_nan=False)
    return hashlib.sha256(text.encode("utf-8")).hexdigest()[:16]


def _resolve_scenario(raw, base_dir):
    if isinstance(raw, str):
        path = Path(raw)
        if not path.is_absolute() and base_dir is not None:
            path = Path(base_dir) / path
        return load_json(path)
    return raw


def manifest_violations(obj, base_dir=None) -> list[str]:
    if not isinstance(obj, dict):
        return ["bad_type:manifest"]
    out = [f"unknown_manifest_key:{k}" for k in obj if k not in MANIFEST_KEYS]
    exp = obj.get("experiment")
    if exp not in EXPERIMENTS:
        out.append("unknown_experiment" if exp is not None else "missing_key:experiment")
    n = obj.get("monte_carlo_n", 1)
    if not (isinstance(n, int) and not isinstance(n, bool)) or n < 1:
        out.append("nonpositive_monte_carlo_n")
    seeds = obj.get("seeds", {})
    if not isinstance(seeds, dict) or any(k not in ("geometry", "sampling") for k in seeds):
        out.append("bad_seeds")
        seeds = {}
    for k, v in seeds.items():
        if not (isinstance(v, int) and not isinstance(v, bool) and v >= 0):
            out.append(f"bad_type:seeds.{k}")
    if exp in MC_EXPERIMENTS and "sampling" not in seeds:
        out.append("missing_sampling_seed")
    if "grid" in obj and not isinstance(obj["grid"], dict):
        out.append("bad_type:grid")
    if "scenario" not in obj:
        out.append("missing_key:scenario")
    else:
        try:
            scen = _resolve_scenario(obj["scenario"], base_dir)
        except (OSError, json.JSONDecodeError):
            out.append("unreadable_scenario")
        else:
            g = seeds.get("geometry", 1) if isinstance(seeds.get("geometry", 1), int) else 1
            out += scenario_violations(scen, g)
    return out


def load_manifest(path_or_obj, seed_override=None, mc_samples=None) -> Manifest:
    """Parse and check a manifest (path or dict); raises :class:`ConfigError`."""
    if isinstance(path_or_obj, dict):
        obj, base_dir = path_or_obj, None
    else:
        obj, base_dir = load_json(path_or_obj), Path(path_or_obj).parent
    if isinstance(obj, dict) and "experiment" not in obj and "d1" in obj:
        raise ConfigError(["not_a_manifest"])
    if seed_override is not None:
        obj = {**obj, "seeds": {**obj.get("seeds", {}), "sampling": int(seed_override)}}
    if mc_samples is not None:
        obj = {**obj, "monte_carlo_n": int(mc_samples)}
    bad = manifest_violations(obj, base_dir)
    if bad:
        raise ConfigError(bad)
    seeds = obj.get("seeds", {})
    scen = _resolve_scenario(obj["scenario"], base_dir)
    for v in scen.values():
        if isinstance(v, float) and not math.isfinite(v):
            raise ConfigError(["nonfinite_value"])
    return Manifest(
        experiment=obj["experiment"],
        scenario=scen,
        monte_carlo_n=obj.get("monte_carlo_n", 100_000),
        geometry_seed=seeds.get("geometry", 1),
        sampling_seed=seeds.get("sampling"),
        output_dir=obj.get("output_dir", "out"),
        grid=obj.get("grid", {}),
    )
