import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from swiptevt.exact import (
    CdfCurve,
    SeriesConvergenceError,
    empirical_cdf,
    exact_max_cdf,
    ks_distance,
    ks_statistic,
    link_cdf_quadrature,
    link_cdf_series,
    mean_theta_iid_baseline,
    quantile_grid,
)
from swiptevt.frozen import baseline_config, pitfall_links
from swiptevt.scenario import build_links, links_from_arrays, sample_batch, sample_max

from conftest import mpf


def test_golden_link_cdf(golden, backend):
    for theta, nu, g, ref in golden["link_cdf"]:
        assert link_cdf_series(theta, nu, g) == pytest.approx(mpf(ref), abs=1e-12)
        assert link_cdf_quadrature(theta, nu, g) == pytest.approx(mpf(ref), abs=1e-12)


def test_limits(backend):
    assert link_cdf_series(1.3, 0.4, 0.0) == 0.0
    assert link_cdf_quadrature(1.3, 0.4, 0.0) == 0.0
    g = np.linspace(0.0, 5.0, 20)
    np.testing.assert_allclose(link_cdf_series(1.3, 0.0, g), -np.expm1(-1.3 * g), atol=1e-15)
    np.testing.assert_allclose(link_cdf_quadrature(1.3, 0.0, g), -np.expm1(-1.3 * g), atol=1e-15)
    assert link_cdf_series(2.0, 0.5, 1e6) == 1.0


@pytest.mark.parametrize("args", [(-1.0, 0.2, 1.0), (1.0, -0.2, 1.0), (1.0, 0.2, -1.0), (0.0, 0.1, 1.0)])
def test_domain_errors(args):
    with pytest.raises(ValueError):
        link_cdf_series(*args)


def test_convergence_failure_is_reported(backend):
    with pytest.raises(SeriesConvergenceError):
        link_cdf_series(1.0, 150.0, 1.0, nu_max=np.inf)


def test_series_vs_quadrature_grid(backend):
    rng = np.random.default_rng(1)
    for theta, nu in zip(rng.uniform(0.1, 10.0, 12), rng.uniform(0.0, 8.0, 12)):
        g = np.geomspace(1e-3, 30.0, 40) / theta
        forced = link_cdf_series(theta, nu, g, nu_max=np.inf)
        np.testing.assert_allclose(forced, link_cdf_quadrature(theta, nu, g), rtol=0, atol=1e-11)


def test_large_nu_routed_to_quadrature(backend):
    g = np.array([0.1, 1.0, 5.0])
    np.testing.assert_array_equal(link_cdf_series(1.0, 30.0, g), link_cdf_quadrature(1.0, 30.0, g))


@settings(max_examples=50, deadline=None)
@given(st.floats(0.05, 20.0), st.floats(0.0, 6.0), st.floats(1e-4, 20.0))
def test_cdf_properties(theta, nu, x):
    g = x / theta
    f = link_cdf_series(theta, nu, g)
    assert 0.0 <= f <= 1.0
    assert link_cdf_series(theta, nu, 1.1 * g) >= f - 1e-12
    # a larger nu shrinks the second-hop factor, so the link gets worse
    assert link_cdf_series(theta, nu + 0.5, g) >= f - 1e-12
    # the e2e SNR never exceeds the first hop
    assert f >= -math.expm1(-theta * g) - 1e-12


def test_exact_max_cdf_product_and_bounds(backend):
    links = build_links(baseline_config(5))
    g = np.geomspace(100.0, 1e4, 15)
    per = np.array([link_cdf_series(p.theta, p.nu, g) for p in links])
    np.testing.assert_allclose(exact_max_cdf(links, g), per.prod(axis=0), rtol=1e-13)
    assert np.all(exact_max_cdf(links, g) <= per.min(axis=0) + 1e-15)
    one = links[:1]
    assert exact_max_cdf(one, 500.0) == pytest.approx(link_cdf_series(one[0].theta, one[0].nu, 500.0), rel=1e-15)


def test_exact_max_cdf_no_underflow_for_many_links():
    links = links_from_arrays(np.full(2000, 1.0), 0.1)
    v = exact_max_cdf(links, 3.0)
    assert 0.0 < v < 1e-20


def test_exact_product_matches_monte_carlo():
    links = build_links(baseline_config(8))
    s = sample_max(links, 200_000, 4)
    assert ks_statistic(s, lambda x: exact_max_cdf(links, x)) < 0.006


def test_empirical_cdf_single_sample():
    c = empirical_cdf(np.array([2.0]), np.array([1.0, 2.0, 3.0]))
    np.testing.assert_array_equal(c.values, [0.0, 1.0, 1.0])
    assert c.provenance == "empirical"


def test_empirical_cdf_permutation_invariant():
    rng = np.random.default_rng(3)
    s = rng.exponential(size=1000)
    grid = np.linspace(0.0, 5.0, 50)
    assert np.array_equal(empirical_cdf(s, grid).values, empirical_cdf(rng.permutation(s), grid).values)


def test_empirical_exponential_dkw():
    s = np.random.default_rng(5).exponential(size=1_000_000)
    assert ks_statistic(s, lambda x: -np.expm1(-x)) < 0.002


def test_empirical_cdf_from_batch_link():
    links = links_from_arrays([1.0, 2.0], [0.1, 0.2])
    batch = sample_batch(links, 1000, 1)
    grid = np.linspace(0.0, 3.0, 10)
    c = empirical_cdf(batch, grid, link=1)
    np.testing.assert_array_equal(c.values, empirical_cdf(batch.per_link_samples[1], grid).values)


def test_ks_distance_basics():
    g = np.linspace(0.0, 1.0, 5)
    a = CdfCurve(g, np.zeros(5), "empirical")
    b = CdfCurve(g, np.ones(5), "empirical")
    assert ks_distance(a, a) == 0.0
    assert ks_distance(a, b) == 1.0 == ks_distance(b, a)
    c = CdfCurve(np.linspace(0.0, 1.0, 9), np.linspace(0.0, 1.0, 9), "evt_approx")
    assert ks_distance(c, CdfCurve(g, g, "evt_approx")) == pytest.approx(0.0, abs=1e-15)


@pytest.mark.parametrize("grid, values", [
    ([0.0, 0.0], [0.1, 0.2]),
    ([0.0, 1.0], [0.5, 0.2]),
    ([0.0, 1.0], [0.5, 1.2]),
])
def test_curve_invariants(grid, values):
    with pytest.raises(ValueError):
        CdfCurve(np.array(grid), np.array(values), "empirical")
    with pytest.raises(ValueError):
        CdfCurve(np.array([0.0, 1.0]), np.array([0.0, 1.0]), "guess")


def test_curve_rows():
    c = CdfCurve(np.array([1.0, 2.0]), np.array([0.25, 0.5]), "exact_product")
    assert c.rows() == [(1.0, 0.25, "exact_product"), (2.0, 0.5, "exact_product")]


def test_quantile_grid():
    s = np.random.default_rng(0).exponential(size=10_000)
    g = quantile_grid(s, 100)
    assert g.size == 100 and np.all(np.diff(g) > 0)
    with pytest.raises(ValueError):
        quantile_grid(np.zeros(10))


def test_mean_theta_baseline():
    links = pitfall_links("two_level", 64)
    base = mean_theta_iid_baseline(links)
    assert np.all(base.theta == 2.0)
    assert np.array_equal(base.nu, links.nu)
    same = links_from_arrays([1.7, 1.7, 1.7], [0.1, 0.2, 0.3])
    assert mean_theta_iid_baseline(same) == same
