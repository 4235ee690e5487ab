"""The compiled and pure-Python kernels must agree to rounding."""

import numpy as np
import pytest

from swiptevt import _backend

pytestmark = pytest.mark.skipif(_backend.BACKEND != "cython", reason="compiled kernels not built")


@pytest.fixture(scope="module")
def pair():
    return _backend.get_kernels("python"), _backend.get_kernels("cython")


def test_expint_agree(pair):
    py, cy = pair
    for n in (0, 1, 2, 7, 40):
        for x in (1e-6, 0.5, 1.0, 1.0001, 3.3, 90.0, 650.0):
            if n == 0 or x > 0:
                assert cy.expint(n, x) == pytest.approx(py.expint(n, x), rel=1e-14)


def test_orders_agree(pair):
    py, cy = pair
    for x in (1e-3, 0.9, 12.0, 500.0):
        np.testing.assert_allclose(cy.expint_orders(x, 120), py.expint_orders(x, 120), rtol=1e-14)


def test_series_agree(pair):
    py, cy = pair
    g = np.r_[0.0, np.geomspace(1e-4, 50.0, 200)]
    for theta, nu in [(1.0, 0.0), (0.3, 0.2), (2.0, 4.5), (1.0, 9.0), (1.0, np.inf)]:
        args = (theta, nu, g, 1e-12, 200, 8.0, np.inf)
        v1, s1 = py.link_cdf_series_many(*args)
        v2, s2 = cy.link_cdf_series_many(*args)
        assert np.array_equal(s1, s2)
        np.testing.assert_allclose(v2, v1, rtol=0, atol=1e-14)


def test_u_sums_agree(pair):
    py, cy = pair
    rng = np.random.default_rng(0)
    theta = rng.uniform(0.1, 3.0, 37)
    nu = rng.uniform(0.0, 2.0, 37)
    g = np.geomspace(1e-3, 30.0, 50)
    for a, b in zip(py.u_sums(theta, nu, g), cy.u_sums(theta, nu, g)):
        np.testing.assert_allclose(b, a, rtol=1e-15)


def test_unknown_backend():
    with pytest.raises(ValueError):
        _backend.get_kernels("fortran")
