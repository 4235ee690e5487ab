"""Pure-Python reference for the kernels in ``_ckernels.pyx``.

Both modules expose the same four functions with the same argument order;
``swiptevt._backend`` picks one at import time.
"""

import math

import numpy as np

EULER = 0.57721566490153286061
_EPS = 1e-16
_FPMIN = 1e-300
_MAXIT = 10000

# link_cdf_series_many status codes
OK = 0
NEEDS_QUAD = 1
NO_CONVERGENCE = 2


def expint(n, x):
    """E_n(x) for integer n >= 1 and x > 0 (series below 1, Lentz CF above)."""
    nm1 = n - 1
    if x > 1.0:
        b = x + n
        c = 1.0 / _FPMIN
        d = 1.0 / b
        h = d
        for i in range(1, _MAXIT):
            an = -i * (nm1 + i)
            b += 2.0
            d = 1.0 / (an * d + b)
            c = b + an / c
            delta = c * d
            h *= delta
            if abs(delta - 1.0) <= _EPS:
                return h * math.exp(-x)
        raise ArithmeticError(f"continued fraction for E_{n}({x}) did not converge")
    ans = 1.0 / nm1 if nm1 else -math.log(x) - EULER
    fact = 1.0
    for i in range(1, _MAXIT):
        fact *= -x / i
        if i != nm1:
            delta = -fact / (i - nm1)
        else:
            psi = -EULER + math.fsum(1.0 / k for k in range(1, nm1 + 1))
            delta = fact * (psi - math.log(x))
        ans += delta
        if abs(delta) <= abs(ans) * _EPS:
            return ans
    raise ArithmeticError(f"series for E_{n}({x}) did not converge")


def expint_orders(x, kmax):
    """Array ``[E_0(x), ..., E_kmax(x)]`` for x > 0.

    One order near ``x`` is evaluated directly; the rest follow from the
    three-term recurrence run downward below it and upward above it, which
    is the stable direction on each side.
    """
    out = np.empty(kmax + 1)
    ex = math.exp(-x)
    out[0] = ex / x
    if kmax == 0:
        return out
    m = min(max(1, int(x)), kmax)
    out[m] = expint(m, x)
    for k in range(m - 1, 0, -1):
        out[k] = (ex - k * out[k + 1]) / x
    for k in range(m, kmax):
        out[k + 1] = (ex - x * out[k]) / k
    return out


def _terms_needed(nu, tol, max_terms):
    # smallest K > nu with nu^K / K! below tol / 100, or -1 if beyond max_terms
    if nu == 0.0:
        return 0
    log_nu = math.log(nu)
    target = math.log(tol) - math.log(100.0)
    k = int(nu) + 1
    while k <= max_terms:
        if k * log_nu - math.lgamma(k + 1.0) < target:
            return k
        k += 1
    return -1


def _series_point(theta, nu, g, tol, max_terms):
    x = theta * g
    if x > 700.0:
        return 1.0, OK
    kmax = _terms_needed(nu, tol, max_terms)
    if kmax < 0:
        return math.nan, NO_CONVERGENCE
    e = expint_orders(x, kmax)
    # Neumaier-compensated sum of (-nu)^k / k! * x * E_k(x)
    s = 0.0
    comp = 0.0
    coef = 1.0
    done = False
    for k in range(kmax + 1):
        if k:
            coef *= -nu / k
        t = coef * x * e[k]
        y = s + t
        if abs(s) >= abs(t):
            comp += (s - y) + t
        else:
            comp += (t - y) + s
        s = y
        if k > nu and abs(t) < tol:
            done = True
            break
    if not done:
        return math.nan, NO_CONVERGENCE
    f = 1.0 - (s + comp)
    return min(1.0, max(0.0, f)), OK


def link_cdf_series_many(theta, nu, gammas, tol, max_terms, nu_max, nugamma_max):
    """Per-link series CDF on an array of thresholds.

    Points whose (nu, nu*gamma) fall outside the series' reliable range get
    status ``NEEDS_QUAD`` and value nan; the caller evaluates them by
    quadrature.
    """
    gammas = np.asarray(gammas, dtype=float)
    vals = np.empty(gammas.shape)
    status = np.zeros(gammas.shape, dtype=np.int8)
    flat_g = gammas.ravel()
    flat_v = vals.ravel()
    flat_s = status.ravel()
    for i, g in enumerate(flat_g):
        if g == 0.0:
            flat_v[i] = 0.0
        elif nu == 0.0:
            flat_v[i] = -math.expm1(-theta * g)
        elif math.isinf(nu):
            flat_v[i] = 1.0
        elif nu > nu_max or nu * g > nugamma_max:
            flat_v[i] = math.nan
            flat_s[i] = NEEDS_QUAD
        else:
            flat_v[i], flat_s[i] = _series_point(theta, nu, g, tol, max_terms)
    return vals, status


def u_sums(theta, nu, gammas):
    """Return ``(u, w)`` with u = sum exp(-theta*g - nu), w = sum theta*exp(...)."""
    theta = np.asarray(theta, dtype=float)
    nu = np.asarray(nu, dtype=float)
    gammas = np.asarray(gammas, dtype=float)
    u = np.empty(gammas.shape)
    w = np.empty(gammas.shape)
    flat_g = gammas.ravel()
    flat_u = u.ravel()
    flat_w = w.ravel()
    for i, g in enumerate(flat_g):
        terms = np.exp(-theta * g - nu)
        flat_u[i] = math.fsum(terms)
        flat_w[i] = math.fsum(theta * terms)
    return u, w
