# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled mollification kernels (see _fallback.py for the semantics)."""
import numpy as np
cimport numpy as cnp
from libc.math cimport exp, fabs

cnp.import_array()


cdef inline double _bump(double x, double c) nogil:
    if fabs(x) >= 1.0:
        return 0.0
    return c * exp(-1.0 / (1.0 - x * x))


cdef inline Py_ssize_t _bisect(const double[::1] xs, double x) nogil:
    """Largest i with xs[i] <= x, clipped to [0, len-2]."""
    cdef Py_ssize_t lo = 0, hi = xs.shape[0] - 1, mid
    if x <= xs[0]:
        return 0
    if x >= xs[hi]:
        return hi - 1
    while hi - lo > 1:
        mid = (lo + hi) >> 1
        if xs[mid] <= x:
            lo = mid
        else:
            hi = mid
    return lo


cdef inline void _hermite(const double[::1] ks, const double[::1] kp,
                          const double[::1] kd, double s,
                          double* val, double* der) nogil:
    cdef Py_ssize_t i = _bisect(ks, s)
    cdef double h = ks[i + 1] - ks[i]
    cdef double u = (s - ks[i]) / h
    if u < 0.0:
        u = 0.0
    elif u > 1.0:
        u = 1.0
    cdef double um = 1.0 - u
    val[0] = ((1.0 + 2.0 * u) * um * um * kp[i]
              + u * um * um * h * kd[i]
              + u * u * (3.0 - 2.0 * u) * kp[i + 1]
              + u * u * (u - 1.0) * h * kd[i + 1])
    der[0] = (6.0 * u * (u - 1.0) * (kp[i] - kp[i + 1]) / h
              + um * (1.0 - 3.0 * u) * kd[i]
              + u * (3.0 * u - 2.0) * kd[i + 1])


cdef inline double _clip1(double x) nogil:
    if x < -1.0:
        return -1.0
    if x > 1.0:
        return 1.0
    return x


cdef inline void _breaks(double p, double t, double n, double sigma,
                         double* brk) nogil:
    """Sorted window breakpoints in the mollifier variable."""
    cdef double b1 = _clip1(n * (p - sigma * t))
    cdef double b2 = _clip1(n * p)
    cdef double b3 = _clip1(n * (p + sigma * t))
    cdef double tmp
    # b1 <= b2 <= b3 holds already (sigma, t, n > 0), but be safe
    if b2 < b1:
        tmp = b1; b1 = b2; b2 = tmp
    if b3 < b2:
        tmp = b2; b2 = b3; b3 = tmp
    if b2 < b1:
        tmp = b1; b1 = b2; b2 = tmp
    brk[0] = -1.0
    brk[1] = b1
    brk[2] = b2
    brk[3] = b3
    brk[4] = 1.0


def mollify_radial_batch(R, double t, double n,
                         knots_s, knots_phi, knots_a,
                         double sigma, double lam, double bump_norm,
                         glx, glw, int subdiv):
    cdef double[::1] Rv = np.ascontiguousarray(R, dtype=np.float64)
    cdef const double[::1] ks = np.ascontiguousarray(knots_s, dtype=np.float64)
    cdef const double[::1] kp = np.ascontiguousarray(knots_phi, dtype=np.float64)
    cdef const double[::1] kd = np.ascontiguousarray(knots_a, dtype=np.float64)
    cdef const double[::1] gx = np.ascontiguousarray(glx, dtype=np.float64)
    cdef const double[::1] gw = np.ascontiguousarray(glw, dtype=np.float64)
    cdef Py_ssize_t nr = Rv.shape[0], ng = gx.shape[0]
    out_wn = np.empty(nr); out_wr = np.empty(nr); out_wt = np.empty(nr)
    cdef double[::1] wn = out_wn, wr = out_wr, wt = out_wt

    cdef double brk[5]
    cdef Py_ssize_t i, ib, isub, ig
    cdef double p, lo, hi, mid, half, zeta, wgt, z, az, s, sgn
    cdef double w_cav = t * kp[0]
    cdef double acc_w, acc_r, acc_t, fb, val, der, wv, wRv, wtv

    with nogil:
        for i in range(nr):
            p = Rv[i]
            _breaks(p, t, n, sigma, brk)
            acc_w = 0.0; acc_r = 0.0; acc_t = 0.0
            for ib in range(4):
                for isub in range(subdiv):
                    lo = brk[ib] + (brk[ib + 1] - brk[ib]) * isub / subdiv
                    hi = brk[ib] + (brk[ib + 1] - brk[ib]) * (isub + 1) / subdiv
                    mid = 0.5 * (lo + hi)
                    half = 0.5 * (hi - lo)
                    if half == 0.0:
                        continue
                    for ig in range(ng):
                        zeta = mid + half * gx[ig]
                        wgt = half * gw[ig]
                        fb = _bump(zeta, bump_norm)
                        if fb == 0.0:
                            continue
                        z = p - zeta / n
                        az = fabs(z)
                        sgn = 1.0 if z > 0.0 else (-1.0 if z < 0.0 else 0.0)
                        s = az / t
                        if s < sigma:
                            _hermite(ks, kp, kd, s, &val, &der)
                            wv = t * val
                            wRv = der
                            wtv = val - s * der
                        else:
                            wv = lam * az
                            wRv = lam
                            wtv = 0.0
                        acc_w += wgt * fb * sgn * wv
                        acc_r += wgt * fb * wRv
                        acc_t += wgt * fb * sgn * wtv
            wn[i] = acc_w
            wr[i] = acc_r + 2.0 * w_cav * n * _bump(n * p, bump_norm)
            wt[i] = acc_t
    return out_wn, out_wr, out_wt


def mollify_fan_batch(x, double t, double n, double sigma, double alpha,
                      double lam, double Y0, double bump_norm,
                      glx, glw, int subdiv):
    cdef double[::1] xv = np.ascontiguousarray(x, dtype=np.float64)
    cdef const double[::1] gx = np.ascontiguousarray(glx, dtype=np.float64)
    cdef const double[::1] gw = np.ascontiguousarray(glw, dtype=np.float64)
    cdef Py_ssize_t nx = xv.shape[0], ng = gx.shape[0]
    out_y = np.empty(nx); out_u = np.empty(nx)
    cdef double[::1] yn = out_y, un = out_u

    cdef double brk[5]
    cdef Py_ssize_t i, ib, isub, ig
    cdef double p, lo, hi, mid, half, zeta, wgt, z, fb
    cdef double acc_y, acc_u, yv, uv, sgn

    with nogil:
        for i in range(nx):
            p = xv[i]
            _breaks(p, t, n, sigma, brk)
            acc_y = 0.0; acc_u = 0.0
            for ib in range(4):
                for isub in range(subdiv):
                    lo = brk[ib] + (brk[ib + 1] - brk[ib]) * isub / subdiv
                    hi = brk[ib] + (brk[ib + 1] - brk[ib]) * (isub + 1) / subdiv
                    mid = 0.5 * (lo + hi)
                    half = 0.5 * (hi - lo)
                    if half == 0.0:
                        continue
                    for ig in range(ng):
                        zeta = mid + half * gx[ig]
                        wgt = half * gw[ig]
                        fb = _bump(zeta, bump_norm)
                        if fb == 0.0:
                            continue
                        z = p - zeta / n
                        if fabs(z) < sigma * t:
                            sgn = 1.0 if z > 0.0 else (-1.0 if z < 0.0 else 0.0)
                            yv = sgn * t * Y0 + alpha * z
                            uv = alpha
                        else:
                            yv = lam * z
                            uv = lam
                        acc_y += wgt * fb * yv
                        acc_u += wgt * fb * uv
            yn[i] = acc_y
            un[i] = acc_u + 2.0 * t * Y0 * n * _bump(n * p, bump_norm)
    return out_y, out_u
