# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled dense kernels: Hessenberg/QR eigenvalues and pivoted QR.

Mirrors ``socle._pykernels`` operation for operation.
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, hypot, fabs

cnp.import_array()

cdef double _EPS = np.finfo(float).eps


cdef inline double cabs(double complex z) nogil:
    return hypot(z.real, z.imag)


cdef inline double complex conj(double complex z) nogil:
    return z.real - 1j * z.imag


cdef inline double complex csqrt(double complex z) nogil:
    cdef double r = cabs(z)
    cdef double re, im
    if r == 0.0:
        return 0.0
    re = sqrt(0.5 * (r + z.real))
    im = sqrt(0.5 * (r - z.real))
    if z.imag < 0:
        im = -im
    return re + 1j * im


cdef void _householder_hessenberg(double complex[:, ::1] h) nogil:
    cdef Py_ssize_t n = h.shape[0]
    cdef Py_ssize_t k, i, j
    cdef double alpha, vnorm2, ax0
    cdef double complex s, x0, phase
    cdef double complex *v
    if n < 3:
        return
    with gil:
        vbuf = np.empty(n, dtype=complex)
        v = <double complex *> cnp.PyArray_DATA(vbuf)
    for k in range(n - 2):
        alpha = 0.0
        for i in range(k + 1, n):
            v[i] = h[i, k]
            alpha += v[i].real * v[i].real + v[i].imag * v[i].imag
        alpha = sqrt(alpha)
        if alpha == 0.0:
            continue
        x0 = v[k + 1]
        ax0 = cabs(x0)
        if ax0 != 0.0:
            phase = x0 / ax0
        else:
            phase = 1.0
        v[k + 1] = x0 + alpha * phase
        vnorm2 = 0.0
        for i in range(k + 1, n):
            vnorm2 += v[i].real * v[i].real + v[i].imag * v[i].imag
        if vnorm2 == 0.0:
            continue
        for j in range(k, n):
            s = 0.0
            for i in range(k + 1, n):
                s = s + conj(v[i]) * h[i, j]
            s = s * (2.0 / vnorm2)
            for i in range(k + 1, n):
                h[i, j] = h[i, j] - v[i] * s
        for i in range(n):
            s = 0.0
            for j in range(k + 1, n):
                s = s + h[i, j] * v[j]
            s = s * (2.0 / vnorm2)
            for j in range(k + 1, n):
                h[i, j] = h[i, j] - s * conj(v[j])
        for i in range(k + 2, n):
            h[i, k] = 0.0


def hessenberg(a):
    h = np.array(a, dtype=complex, order="C", copy=True)
    _householder_hessenberg(h)
    return h


cdef inline void _givens(double complex f, double complex g,
                         double *c, double complex *s) nogil:
    cdef double af = cabs(f)
    cdef double ag = cabs(g)
    cdef double norm
    if ag == 0.0:
        c[0] = 1.0
        s[0] = 0.0
        return
    if af == 0.0:
        c[0] = 0.0
        s[0] = conj(g) / ag
        return
    norm = hypot(af, ag)
    c[0] = af / norm
    s[0] = (f / af) * conj(g) / norm


def hqr_eigvals(a, int max_sweeps):
    """Eigenvalues by Hessenberg reduction and Wilkinson-shifted QR.

    Returns ``(eigs, converged)``.
    """
    cdef double complex[:, ::1] h = hessenberg(a)
    cdef Py_ssize_t n = h.shape[0]
    eigs_arr = np.zeros(n, dtype=complex)
    cdef double complex[::1] eigs = eigs_arr
    cs_arr = np.zeros(max(n, 1), dtype=float)
    sn_arr = np.zeros(max(n, 1), dtype=complex)
    cdef double[::1] cs = cs_arr
    cdef double complex[::1] sn = sn_arr
    cdef Py_ssize_t hi = n - 1
    cdef Py_ssize_t l, k, j, i, top
    cdef int steps = 0
    cdef int its = 0
    cdef double scale, c, hmax
    cdef double complex s, mu, p, q, r, t, half, disc, m1, m2, x, y
    cdef bint converged = True
    with nogil:
        while hi >= 0:
            if hi == 0:
                eigs[0] = h[0, 0]
                break
            l = hi
            while l > 0:
                scale = cabs(h[l - 1, l - 1]) + cabs(h[l, l])
                if scale == 0.0:
                    hmax = 0.0
                    for i in range(hi + 1):
                        for j in range(hi + 1):
                            if cabs(h[i, j]) > hmax:
                                hmax = cabs(h[i, j])
                    scale = hmax
                if cabs(h[l, l - 1]) <= _EPS * scale:
                    h[l, l - 1] = 0.0
                    break
                l -= 1
            if l == hi:
                eigs[hi] = h[hi, hi]
                hi -= 1
                its = 0
                continue
            if steps >= max_sweeps:
                converged = False
                break
            steps += 1
            its += 1
            if its % 11 == 10:
                mu = h[hi, hi] + cabs(h[hi, hi - 1]) * (0.75 + 0.5j)
            else:
                p = h[hi - 1, hi - 1]
                q = h[hi - 1, hi]
                r = h[hi, hi - 1]
                t = h[hi, hi]
                half = 0.5 * (p - t)
                disc = csqrt(half * half + q * r)
                m1 = 0.5 * (p + t) + disc
                m2 = 0.5 * (p + t) - disc
                if cabs(m1 - t) < cabs(m2 - t):
                    mu = m1
                else:
                    mu = m2
            for k in range(l, hi + 1):
                h[k, k] = h[k, k] - mu
            for k in range(l, hi):
                _givens(h[k, k], h[k + 1, k], &c, &s)
                cs[k] = c
                sn[k] = s
                for j in range(k, hi + 1):
                    x = h[k, j]
                    y = h[k + 1, j]
                    h[k, j] = c * x + s * y
                    h[k + 1, j] = -conj(s) * x + c * y
            for k in range(l, hi):
                c = cs[k]
                s = sn[k]
                top = k + 2
                if top > hi:
                    top = hi
                for i in range(l, top + 1):
                    x = h[i, k]
                    y = h[i, k + 1]
                    h[i, k] = c * x + conj(s) * y
                    h[i, k + 1] = -s * x + c * y
            for k in range(l, hi + 1):
                h[k, k] = h[k, k] + mu
    return eigs_arr, bool(converged)


def pivoted_qr(a):
    """Householder QR with column pivoting: ``a[:, perm] = q @ r``."""
    r_arr = np.array(a, dtype=complex, order="C", copy=True)
    cdef double complex[:, ::1] r = r_arr
    cdef Py_ssize_t m = r.shape[0]
    cdef Py_ssize_t n = r.shape[1]
    q_arr = np.eye(m, dtype=complex)
    cdef double complex[:, ::1] q = q_arr
    perm_arr = np.arange(n, dtype=np.intp)
    cdef Py_ssize_t[::1] perm = perm_arr
    v_arr = np.zeros(max(m, 1), dtype=complex)
    cdef double complex[::1] v = v_arr
    cdef Py_ssize_t k, i, j, best, tmp
    cdef double nrm, bestn, alpha, ax0, vnorm2
    cdef double complex s, x0, phase, sw
    with nogil:
        for k in range(min(m, n)):
            best = k
            bestn = -1.0
            for j in range(k, n):
                nrm = 0.0
                for i in range(k, m):
                    nrm += r[i, j].real * r[i, j].real + r[i, j].imag * r[i, j].imag
                if nrm > bestn:
                    bestn = nrm
                    best = j
            if best != k:
                for i in range(m):
                    sw = r[i, k]
                    r[i, k] = r[i, best]
                    r[i, best] = sw
                tmp = perm[k]
                perm[k] = perm[best]
                perm[best] = tmp
            alpha = sqrt(bestn)
            if alpha == 0.0:
                break
            x0 = r[k, k]
            ax0 = cabs(x0)
            if ax0 != 0.0:
                phase = x0 / ax0
            else:
                phase = 1.0
            for i in range(k, m):
                v[i] = r[i, k]
            v[k] = x0 + alpha * phase
            vnorm2 = 0.0
            for i in range(k, m):
                vnorm2 += v[i].real * v[i].real + v[i].imag * v[i].imag
            if vnorm2 == 0.0:
                continue
            for j in range(k, n):
                s = 0.0
                for i in range(k, m):
                    s = s + conj(v[i]) * r[i, j]
                s = s * (2.0 / vnorm2)
                for i in range(k, m):
                    r[i, j] = r[i, j] - v[i] * s
            for i in range(m):
                s = 0.0
                for j in range(k, m):
                    s = s + q[i, j] * v[j]
                s = s * (2.0 / vnorm2)
                for j in range(k, m):
                    q[i, j] = q[i, j] - s * conj(v[j])
            for i in range(k + 1, m):
                r[i, k] = 0.0
    return q_arr, r_arr, perm_arr
