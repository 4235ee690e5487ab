# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled counterparts of the functions in ``_pykernels``."""

import numpy as np
cimport numpy as cnp
from libc.math cimport exp, log, lgamma, fabs, expm1, isinf, NAN

cnp.import_array()

cdef double EULER = 0.57721566490153286061
cdef double _EPS = 1e-16
cdef double _FPMIN = 1e-300
cdef int _MAXIT = 10000
cdef int _MAX_ORDERS = 1024

OK = 0
NEEDS_QUAD = 1
NO_CONVERGENCE = 2


cdef int _expint(int n, double x, double* out) noexcept nogil:
    cdef int nm1 = n - 1
    cdef int i, k
    cdef double b, c, d, h, an, delta, ans, fact, psi
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
            if fabs(delta - 1.0) <= _EPS:
                out[0] = h * exp(-x)
                return 0
        return -1
    if nm1 != 0:
        ans = 1.0 / nm1
    else:
        ans = -log(x) - EULER
    fact = 1.0
    for i in range(1, _MAXIT):
        fact *= -x / i
        if i != nm1:
            delta = -fact / (i - nm1)
        else:
            psi = -EULER
            for k in range(1, nm1 + 1):
                psi += 1.0 / k
            delta = fact * (psi - log(x))
        ans += delta
        if fabs(delta) <= fabs(ans) * _EPS:
            out[0] = ans
            return 0
    return -1


cdef int _orders(double x, int kmax, double* out) noexcept nogil:
    cdef double ex = exp(-x)
    cdef int m, k
    out[0] = ex / x
    if kmax == 0:
        return 0
    m = <int>x
    if m < 1:
        m = 1
    if m > kmax:
        m = kmax
    if _expint(m, x, &out[m]) != 0:
        return -1
    for k in range(m - 1, 0, -1):
        out[k] = (ex - k * out[k + 1]) / x
    for k in range(m, kmax):
        out[k + 1] = (ex - x * out[k]) / k
    return 0


def expint(int n, double x):
    cdef double v
    if _expint(n, x, &v) != 0:
        raise ArithmeticError(f"E_{n}({x}) did not converge")
    return v


def expint_orders(double x, int kmax):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(kmax + 1)
    if _orders(x, kmax, &out[0]) != 0:
        raise ArithmeticError(f"E_k({x}) did not converge")
    return out


cdef int _terms_needed(double nu, double tol, int max_terms) noexcept nogil:
    cdef double log_nu, target
    cdef int k
    if nu == 0.0:
        return 0
    log_nu = log(nu)
    target = log(tol) - log(100.0)
    k = <int>nu + 1
    while k <= max_terms:
        if k * log_nu - lgamma(k + 1.0) < target:
            return k
        k += 1
    return -1


cdef int _series_point(double theta, double nu, double g, double tol,
                       int kmax, double* e, double* out) noexcept nogil:
    cdef double x = theta * g
    cdef double s = 0.0, comp = 0.0, coef = 1.0, t, y, f
    cdef int k
    if x > 700.0:
        out[0] = 1.0
        return 0
    if _orders(x, kmax, e) != 0:
        return 2
    for k in range(kmax + 1):
        if k:
            coef *= -nu / k
        t = coef * x * e[k]
        y = s + t
        if fabs(s) >= fabs(t):
            comp += (s - y) + t
        else:
            comp += (t - y) + s
        s = y
        if k > nu and fabs(t) < tol:
            f = 1.0 - (s + comp)
            if f < 0.0:
                f = 0.0
            elif f > 1.0:
                f = 1.0
            out[0] = f
            return 0
    return 2


def link_cdf_series_many(double theta, double nu, gammas, double tol,
                         int max_terms, double nu_max, double nugamma_max):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] g = np.ascontiguousarray(
        np.asarray(gammas, dtype=np.float64).ravel())
    cdef Py_ssize_t n = g.shape[0], i
    cdef cnp.ndarray[cnp.float64_t, ndim=1] vals = np.empty(n)
    cdef cnp.ndarray[cnp.int8_t, ndim=1] status = np.zeros(n, dtype=np.int8)
    cdef double[1024] ebuf
    cdef int kmax = _terms_needed(nu, tol, max_terms)
    cdef int rc
    if max_terms >= _MAX_ORDERS:
        raise ValueError("max_terms too large for the compiled kernel")
    with nogil:
        for i in range(n):
            if g[i] == 0.0:
                vals[i] = 0.0
            elif nu == 0.0:
                vals[i] = -expm1(-theta * g[i])
            elif isinf(nu):
                vals[i] = 1.0
            elif nu > nu_max or nu * g[i] > nugamma_max:
                vals[i] = NAN
                status[i] = 1
            elif kmax < 0:
                vals[i] = NAN
                status[i] = 2
            else:
                rc = _series_point(theta, nu, g[i], tol, kmax, ebuf, &vals[i])
                if rc != 0:
                    vals[i] = NAN
                    status[i] = rc
    shape = np.shape(gammas)
    return vals.reshape(shape), status.reshape(shape)


def u_sums(theta, nu, gammas):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] th = np.ascontiguousarray(theta, dtype=np.float64).ravel()
    cdef cnp.ndarray[cnp.float64_t, ndim=1] nv = np.ascontiguousarray(nu, dtype=np.float64).ravel()
    cdef cnp.ndarray[cnp.float64_t, ndim=1] g = np.ascontiguousarray(
        np.asarray(gammas, dtype=np.float64).ravel())
    cdef Py_ssize_t n = g.shape[0], L = th.shape[0], i, l
    cdef cnp.ndarray[cnp.float64_t, ndim=1] u = np.empty(n)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] w = np.empty(n)
    cdef double su, cu, sw, cw, t, tw, y
    with nogil:
        for i in range(n):
            su = 0.0
            cu = 0.0
            sw = 0.0
            cw = 0.0
            for l in range(L):
                t = exp(-th[l] * g[i] - nv[l])
                tw = th[l] * t
                y = su + t
                if fabs(su) >= fabs(t):
                    cu += (su - y) + t
                else:
                    cu += (t - y) + su
                su = y
                y = sw + tw
                if fabs(sw) >= fabs(tw):
                    cw += (sw - y) + tw
                else:
                    cw += (tw - y) + sw
                sw = y
            u[i] = su + cu
            w[i] = sw + cw
    shape = np.shape(gammas)
    return u.reshape(shape), w.reshape(shape)
