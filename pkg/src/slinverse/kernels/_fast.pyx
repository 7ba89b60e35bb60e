# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled backend for the numerical kernels.

Mirrors ``slinverse.kernels._ref`` (same argument-regime logic for the
spherical Bessel sequences) with the per-spectral-term work fused into one
pass: both Bessel columns are generated in registers and accumulated into
the series sums with compensated (Kahan) summation, avoiding the large
intermediate tables of the NumPy backend.
"""

import numpy as np

from libc.math cimport ceil, cos, fabs, round as c_round, sin

cdef double PI = 3.141592653589793238462643383279502884
cdef double SMALL_Z = 1e-4
cdef double SERIES_ZMAX = 20.0
cdef double BIG = 1e250

# stack-buffer capacities; order is validated against them in the wrappers
DEF MAXCOL = 260
DEF MAXWORK = 340


cdef double _series_order(double z, int n) noexcept nogil:
    cdef double pref = 1.0
    cdef double u = 0.5 * z * z
    cdef double tot = 1.0
    cdef double term = 1.0
    cdef int k
    for k in range(1, n + 1):
        pref *= z / (2.0 * k + 1.0)
    for k in range(1, 500):
        term *= -u / (k * (2.0 * n + 2.0 * k + 1.0))
        tot += term
        if fabs(term) <= 1e-18 * fabs(tot):
            break
    return pref * tot


cdef void _fill_column(double z, int nmax, double* out, double zop,
                       bint have_zop, double* work) noexcept nogil:
    """j_0(z)..j_nmax(z) into ``out``; ``work`` holds >= nmax+36 doubles."""
    cdef int n, j, start
    cdef double s, c, prev, cur, nxt, m, f, sgn, j0t, j1t, scale, a, b

    if z == 0.0:
        out[0] = 1.0
        for n in range(1, nmax + 1):
            out[n] = 0.0
        return

    if z < SMALL_Z:
        for n in range(nmax + 1):
            out[n] = _series_order(z, n)
        return

    if z >= nmax + 2.0:
        if have_zop:
            m = c_round(zop)
            f = zop - m
            sgn = -1.0 if (<long long> m) & 1 else 1.0
            s = sgn * sin(PI * f)
            c = sgn * cos(PI * f)
        else:
            s = sin(z)
            c = cos(z)
        prev = s / z
        out[0] = prev
        if nmax >= 1:
            cur = s / (z * z) - c / z
            out[1] = cur
            for n in range(1, nmax):
                nxt = (2.0 * n + 1.0) / z * cur - prev
                prev = cur
                cur = nxt
                out[n + 1] = cur
        return

    if z <= SERIES_ZMAX:
        start = <int> ceil(1.4 * z) + 6
        if start < nmax + 2:
            start = nmax + 2
        a = _series_order(z, start)
        b = _series_order(z, start - 1)
        if a != 0.0 or b != 0.0:
            if start - 1 <= nmax:
                out[start - 1] = b
            for n in range(start - 1, 0, -1):
                nxt = (2.0 * n + 1.0) / z * b - a
                a = b
                b = nxt
                if n - 1 <= nmax:
                    out[n - 1] = b
            return

    # Miller restart: arbitrary seeds, rescaled, normalized to j_0 (or j_1)
    start = <int> ceil(z) + 32
    if start < nmax + 34:
        start = nmax + 34
    work[start + 1] = 0.0
    work[start] = 1e-280
    for n in range(start, 0, -1):
        work[n - 1] = (2.0 * n + 1.0) / z * work[n] - work[n + 1]
        if fabs(work[n - 1]) > BIG:
            for j in range(n - 1, start + 2):
                work[j] *= 1e-250
    s = sin(z)
    c = cos(z)
    j0t = s / z
    j1t = s / (z * z) - c / z
    if fabs(j1t) > fabs(j0t) and work[1] != 0.0:
        scale = j1t / work[1]
    else:
        scale = j0t / work[0]
    for n in range(nmax + 1):
        out[n] = work[n] * scale


def bessel_table(z, int nmax, z_over_pi=None):
    """Spherical Bessel table j_n(z), shape (nmax+1, len(z)); see _ref."""
    cdef double[::1] zv = np.ascontiguousarray(z, dtype=np.float64)
    cdef bint have_zop = z_over_pi is not None
    cdef double[::1] zop
    if have_zop:
        zop = np.ascontiguousarray(z_over_pi, dtype=np.float64)
    else:
        zop = np.empty(0)
    out_arr = np.empty((nmax + 1, zv.shape[0]))
    cdef double[:, ::1] out = out_arr
    work_arr = np.empty(nmax + 40)
    cdef double[::1] work = work_arr
    col_arr = np.empty(nmax + 1)
    cdef double[::1] col = col_arr
    cdef Py_ssize_t i
    cdef int n
    with nogil:
        for i in range(zv.shape[0]):
            _fill_column(zv[i], nmax, &col[0],
                         zop[i] if have_zop else 0.0, have_zop, &work[0])
            for n in range(nmax + 1):
                out[n, i] = col[n]
    return out_arr


def series_sums_modified(double x, rho, alpha, double omega, int order):
    """Fused series sums of the omega-form main system; see _ref for the terms."""
    if order < 0 or 2 * order + 1 >= MAXCOL:
        raise ValueError(f"order out of range for the compiled kernel: {order}")
    cdef double[::1] rv = np.ascontiguousarray(rho, dtype=np.float64)
    cdef double[::1] av = np.ascontiguousarray(alpha, dtype=np.float64)
    cdef int M = rv.shape[0]
    cdef int nmax = 2 * order + 1
    cdef int P = order + 1
    S_arr = np.zeros((P, P))
    T_arr = np.zeros(P)
    C_arr = np.zeros((P, P))
    Ct_arr = np.zeros(P)
    cdef double[:, ::1] S = S_arr
    cdef double[::1] T = T_arr
    cdef double[:, ::1] C = C_arr
    cdef double[::1] Ct = Ct_arr

    cdef double jr[MAXCOL]
    cdef double ji[MAXCOL]
    cdef double work[MAXWORK]
    cdef double two_over_pi = 2.0 / PI
    cdef Py_ssize_t i
    cdef int k, m, n
    cdef double zr, zi, wa, wn, cr, ci, si, jk, ik, ik1, term, y, t

    with nogil:
        for i in range(M):
            n = <int> (i + 1)
            zr = rv[i] * x
            zi = n * x
            _fill_column(zr, nmax, jr, 0.0, False, work)
            _fill_column(zi, nmax, ji, 0.0, False, work)
            wa = 1.0 / av[i]
            wn = 2.0 * omega / (PI * PI * n)
            cr = cos(zr)
            ci = cos(zi)
            si = sin(zi)
            for k in range(P):
                jk = jr[2 * k]
                ik = ji[2 * k]
                ik1 = ji[2 * k + 1]
                for m in range(P):
                    term = (jk * jr[2 * m] * wa
                            - two_over_pi * ik * ji[2 * m]
                            + wn * (x * ik * ji[2 * m + 1]
                                    + x * ik1 * ji[2 * m]
                                    - 2.0 * (k + m) / n * ik * ji[2 * m]))
                    y = term - C[k, m]
                    t = S[k, m] + y
                    C[k, m] = (t - S[k, m]) - y
                    S[k, m] = t
                term = (cr * jk * wa - two_over_pi * ci * ik
                        + wn * (x * si * ik + x * ci * ik1
                                - 2.0 * k / n * ci * ik))
                y = term - Ct[k]
                t = T[k] + y
                Ct[k] = (t - T[k]) - y
                T[k] = t
    return S_arr, T_arr


def series_sums_integrated(double x, rho, alpha, int order):
    """Fused series sums of the integrated-form system; see _ref for the terms."""
    if order < 0 or 2 * order + 1 >= MAXCOL:
        raise ValueError(f"order out of range for the compiled kernel: {order}")
    cdef double[::1] rv = np.ascontiguousarray(rho, dtype=np.float64)
    cdef double[::1] av = np.ascontiguousarray(alpha, dtype=np.float64)
    cdef int M = rv.shape[0]
    cdef int nmax = 2 * order + 1
    cdef int P = order + 1
    S_arr = np.zeros((P, P))
    T_arr = np.zeros(P)
    C_arr = np.zeros((P, P))
    Ct_arr = np.zeros(P)
    cdef double[:, ::1] S = S_arr
    cdef double[::1] T = T_arr
    cdef double[:, ::1] C = C_arr
    cdef double[::1] Ct = Ct_arr

    cdef double jr[MAXCOL]
    cdef double ji[MAXCOL]
    cdef double work[MAXWORK]
    cdef Py_ssize_t i
    cdef int k, m, n
    cdef double zr, zi, w1, w2, jk1, ik1, term, y, t

    with nogil:
        for i in range(M):
            n = <int> (i + 1)
            zr = rv[i] * x
            zi = n * x
            _fill_column(zr, nmax, jr, 0.0, False, work)
            _fill_column(zi, nmax, ji, 0.0, False, work)
            w1 = 1.0 / (av[i] * rv[i])
            w2 = 2.0 / (PI * n)
            for k in range(P):
                jk1 = jr[2 * k + 1]
                ik1 = ji[2 * k + 1]
                for m in range(P):
                    term = jk1 * jr[2 * m] * w1 - w2 * ik1 * ji[2 * m]
                    y = term - C[k, m]
                    t = S[k, m] + y
                    C[k, m] = (t - S[k, m]) - y
                    S[k, m] = t
                term = cos(zr) * jk1 * w1 - cos(zi) * ik1 * w2
                y = term - Ct[k]
                t = T[k] + y
                Ct[k] = (t - T[k]) - y
                T[k] = t
    return S_arr, T_arr
