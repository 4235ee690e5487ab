import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from swiptevt.experiments import ordering_sweep
from swiptevt.frozen import baseline_config, crossing_pair
from swiptevt.metrics import ergodic_capacity
from swiptevt.ordering import (
    OrderingVerdict,
    check_dominance,
    check_dominance_empirical,
    dominance_grid,
    predict_order,
)
from swiptevt.scenario import ScenarioConfig, build_links, sample_max


def test_identical_links_both_orders():
    links = build_links(baseline_config(8))
    v = check_dominance(links, links)
    assert v.b_larger and v.b_smaller and v.max_violation == 0.0
    assert v.direction == "st_larger"


def test_source_power_doubling():
    cfg = baseline_config(15)
    v = check_dominance(build_links(cfg), build_links(cfg.with_source_power(2 * cfg.source_power)),
                        parameter="source_power")
    assert v.direction == "st_larger" and v.max_violation <= 1e-9 and not v.b_smaller
    assert v.as_row() == ("source_power", "st_larger", v.max_violation)


def test_frozen_lambda_crossing():
    cfg, lam_a, lam_b = crossing_pair()
    v = check_dominance(build_links(cfg.with_factors(lam=lam_a)), build_links(cfg.with_factors(lam=lam_b)))
    assert v.direction == "indeterminate"
    assert v.max_violation > 1e-3


def test_grid_shape_and_validation():
    links = build_links(baseline_config(5))
    g = dominance_grid(links)
    assert g.size == 400 and np.all(np.diff(g) > 0) and g[0] > 0
    with pytest.raises(ValueError):
        check_dominance(links, links, grid=[2.0, 1.0])


def test_predict_order_table():
    assert predict_order("source_power", 10, 20) == "st_larger"
    assert predict_order("source_power", 20, 10) == "st_smaller"
    assert predict_order("ts_factor", 0.2, 0.4) == "st_larger"
    assert predict_order("noise_power", 1.0, 2.0) == "st_smaller"
    assert predict_order("ps_factor", 0.2, 0.6, "mid") == "indeterminate"
    assert predict_order("ps_factor", 0.2, 0.6, "high") == "indeterminate"
    assert predict_order("ps_factor", 0.6, 0.2, "low") == "st_larger"
    with pytest.raises(ValueError):
        predict_order("distance", 1, 2)
    with pytest.raises(ValueError):
        predict_order("ts_factor", 0.2, 0.2)
    with pytest.raises(ValueError):
        predict_order("ts_factor", 0.2, 0.3, "extreme")


def test_low_snr_lambda_prediction_holds_on_baseline():
    cfg = baseline_config(10, gamma_s_dbm=0.0)
    v = check_dominance(build_links(cfg.with_factors(lam=0.6)), build_links(cfg.with_factors(lam=0.2)))
    assert v.direction == predict_order("ps_factor", 0.6, 0.2, "low")


def test_random_sweep_matches_predictions():
    rows = ordering_sweep(25, seed=77)
    assert all(r["direction"] == r["predicted"] and r["max_violation"] <= 1e-9 for r in rows)


@settings(max_examples=30, deadline=None)
@given(st.floats(0.0, 0.75), st.floats(0.0, 0.8), st.floats(0.0, 40.0), st.integers(0, 10_000))
def test_alpha_ordering_unconditional(alpha, lam, snr, seed):
    if alpha == 0.0 and lam == 0.0:
        alpha = 0.05
    cfg = baseline_config(12, (seed, seed + 1), gamma_s_dbm=snr, ts_factor=alpha, ps_factor=lam)
    v = check_dominance(build_links(cfg), build_links(cfg.with_factors(alpha=alpha + 0.1)))
    assert v.direction == "st_larger" and v.max_violation <= 1e-9


def test_power_ladder_transitive():
    cfg = baseline_config(10)
    rungs = [build_links(cfg.with_source_power(k * cfg.source_power)) for k in (1, 2, 4)]
    grid = dominance_grid(rungs[0])
    assert check_dominance(rungs[0], rungs[1], grid).b_larger
    assert check_dominance(rungs[1], rungs[2], grid).b_larger
    assert check_dominance(rungs[0], rungs[2], grid).b_larger


def test_dominance_implies_capacity_order():
    cfg = baseline_config(10)
    a = build_links(cfg)
    b = build_links(cfg.with_factors(alpha=0.5))
    assert check_dominance(a, b).b_larger
    assert ergodic_capacity(b) >= ergodic_capacity(a) - 1e-9


def test_empirical_mode():
    cfg = baseline_config(10)
    la, lb = build_links(cfg), build_links(cfg.with_source_power(2 * cfg.source_power))
    grid = dominance_grid(la)
    v = check_dominance_empirical(sample_max(la, 50_000, 1), sample_max(lb, 50_000, 2), grid, "source_power")
    assert isinstance(v, OrderingVerdict) and v.direction == "st_larger"
    same = check_dominance_empirical(sample_max(la, 50_000, 1), sample_max(la, 50_000, 3), grid)
    assert same.b_larger and same.b_smaller
