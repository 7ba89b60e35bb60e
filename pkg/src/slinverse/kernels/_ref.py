"""Pure NumPy reference backend for the numerical kernels.

The compiled backend ``slinverse.kernels._fast`` implements the same three
functions; this module is the fallback selected when the extension is not
importable (see ``slinverse.kernels``).  Both backends must agree to a few
ulps; ``benchmarks/bench_kernels.py`` compares their speed.

Spherical Bessel sequences j_0(z)..j_nmax(z) are produced by three regimes:

* z = 0 or z below a small threshold: ascending power series per order
  (no cancellation, underflow gives exact zeros),
* z >= nmax + 2: closed-form j_0, j_1 and upward recursion (stable while
  the order stays below the argument),
* z <= 20: backward recursion seeded by the ascending series at a start
  order >= max(nmax + 2, 1.4 z + 6), where the series' first term dominates
  (beyond z ~ 25 the series cancellation exceeds 1e-12 at any practical
  start order, so this branch is capped),
* remaining mid-range arguments: Miller's backward recursion from arbitrary
  seeds, rescaled against overflow and normalized to the closed-form j_0
  (or j_1 near zeros of sin z).  Seed underflow in the series branch falls
  back to the same Miller path.
"""

import math

import numpy as np

_SMALL_Z = 1e-4
_SERIES_ZMAX = 20.0
_SEED_FACTOR = 1.4
_SEED_PAD = 6
_MILLER_PAD = 32
_BIG = 1e250


def _series_single_order(n, z):
    """Ascending series for j_n(z), vectorized over z >= 0.

    Well conditioned only when the leading term dominates (n >= ~1.4 z, or
    any n for small z); callers are responsible for that regime.
    """
    z = np.asarray(z, dtype=float)
    pref = np.ones_like(z)
    for k in range(1, n + 1):
        pref *= z / (2 * k + 1)
    u = 0.5 * z * z
    total = np.ones_like(z)
    term = np.ones_like(z)
    for k in range(1, 500):
        term = term * (-u) / (k * (2 * n + 2 * k + 1))
        total += term
        if np.all(np.abs(term) <= 1e-18 * np.abs(total)):
            break
    return pref * total


def _series_all_orders(z, nmax):
    """Per-order ascending series for the whole table; small-z branch."""
    cols = np.empty((nmax + 1, z.size))
    for n in range(nmax + 1):
        cols[n] = _series_single_order(n, z)
    return cols


def _miller(z, nmax):
    """Backward recursion from arbitrary seeds, normalized against j_0.

    Vectorized over z; immune to the series-seed cancellation.  Rescaling
    keeps intermediates in range, and the anchor (j_0 or j_1, whichever is
    larger in magnitude) fixes scale and sign.
    """
    start = int(max(nmax + 2, math.ceil(z.max()))) + _MILLER_PAD
    work = np.zeros((start + 2, z.size))
    work[start] = 1e-280
    for n in range(start, 0, -1):
        work[n - 1] = (2 * n + 1) / z * work[n] - work[n + 1]
        big = np.abs(work[n - 1]) > _BIG
        if big.any():
            work[n - 1 :, big] *= 1e-250
    s = np.sin(z)
    c = np.cos(z)
    j0t = s / z
    j1t = s / (z * z) - c / z
    use1 = (np.abs(j1t) > np.abs(j0t)) & (work[1] != 0.0)
    scale = np.where(use1, j1t / np.where(work[1] == 0.0, 1.0, work[1]),
                     j0t / work[0])
    return work[: nmax + 1] * scale


def bessel_table(z, nmax, z_over_pi=None):
    """Spherical Bessel table j_n(z) for n = 0..nmax, one column per z.

    Parameters
    ----------
    z : array_like
        Nonnegative arguments.
    nmax : int
        Highest order.
    z_over_pi : array_like, optional
        When the arguments are exactly z = r*pi, passing r enables
        argument-reduced trigonometry for the upward-recursion seeds
        (sin(r*pi) computed from the fractional part of r), which removes
        the ~z*eps phase error at large arguments.
    """
    z = np.ascontiguousarray(z, dtype=float)
    out = np.zeros((nmax + 1, z.size))
    if z.size == 0:
        return out

    at_zero = z == 0.0
    out[0, at_zero] = 1.0

    small = ~at_zero & (z < _SMALL_Z)
    if small.any():
        out[:, small] = _series_all_orders(z[small], nmax)

    up = z >= nmax + 2
    if up.any():
        zu = z[up]
        if z_over_pi is not None:
            r = np.asarray(z_over_pi, dtype=float)[up]
            m = np.round(r)
            f = r - m
            sgn = 1.0 - 2.0 * (np.asarray(m, dtype=np.int64) & 1)
            s = sgn * np.sin(np.pi * f)
            c = sgn * np.cos(np.pi * f)
        else:
            s = np.sin(zu)
            c = np.cos(zu)
        prev = s / zu
        out[0, up] = prev
        if nmax >= 1:
            cur = s / (zu * zu) - c / zu
            out[1, up] = cur
            for n in range(1, nmax):
                prev, cur = cur, (2 * n + 1) / zu * cur - prev
                out[n + 1, up] = cur

    down = ~(at_zero | small | up) & (z <= _SERIES_ZMAX)
    if down.any():
        zd = z[down]
        start = int(max(nmax + 2, math.ceil(_SEED_FACTOR * zd.max()) + _SEED_PAD))
        work = np.empty((start + 1, zd.size))
        work[start] = _series_single_order(start, zd)
        work[start - 1] = _series_single_order(start - 1, zd)
        for n in range(start - 1, 0, -1):
            work[n - 1] = (2 * n + 1) / zd * work[n] - work[n + 1]
        cols = work[: nmax + 1]
        bad = (work[start] == 0.0) & (work[start - 1] == 0.0)
        if bad.any():
            cols = cols.copy()
            cols[:, bad] = _miller(zd[bad], nmax)
        out[:, down] = cols

    mid = ~(at_zero | small | up | down)
    if mid.any():
        out[:, mid] = _miller(z[mid], nmax)

    return out


def series_sums_modified(x, rho, alpha, omega, order):
    """Series sums of the omega-form main system at one mesh point.

    ``rho``/``alpha`` exclude the zero ground entry, so position i holds the
    data of index n = i + 1.  Returns (S, T) with

        S[k, m] = sum_n [ j_{2k}(r_n x) j_{2m}(r_n x)/a_n
                          - (2/pi) j_{2k}(n x) j_{2m}(n x)
                          + (2 w/(pi^2 n)) ( x j_{2k}(n x) j_{2m+1}(n x)
                                            + x j_{2k+1}(n x) j_{2m}(n x)
                                            - 2(k+m) j_{2k}(n x) j_{2m}(n x)/n ) ]

    and T[k] the matching right-hand-side sums with cos(r_n x), sin(n x)
    weights; k, m = 0..order.
    """
    rho = np.ascontiguousarray(rho, dtype=float)
    alpha = np.ascontiguousarray(alpha, dtype=float)
    m = rho.size
    n_idx = np.arange(1, m + 1, dtype=float)
    zr = rho * x
    zi = n_idx * x
    jr = bessel_table(zr, 2 * order + 1)
    ji = bessel_table(zi, 2 * order + 1)
    evr = jr[0::2]
    evi = ji[0::2]
    odi = ji[1::2]

    w_alpha = 1.0 / alpha
    wn = 2.0 * omega / (np.pi * np.pi * n_idx)
    two_over_pi = 2.0 / np.pi

    S = (evr * w_alpha) @ evr.T
    S -= two_over_pi * (evi @ evi.T)
    cross = x * ((evi * wn) @ odi.T)
    S += cross + cross.T
    kk = np.arange(order + 1, dtype=float)
    S -= 2.0 * (kk[:, None] + kk[None, :]) * ((evi * (wn / n_idx)) @ evi.T)

    cr = np.cos(zr)
    ci = np.cos(zi)
    si = np.sin(zi)
    T = evr @ (cr * w_alpha)
    T -= two_over_pi * (evi @ ci)
    T += x * (evi @ (wn * si))
    T += x * (odi @ (wn * ci))
    T -= 2.0 * kk * (evi @ (wn * ci / n_idx))
    return S, T


def series_sums_integrated(x, rho, alpha, order):
    """Series sums of the integrated-form system at one mesh point.

        S[k, m] = sum_n [ j_{2k+1}(r_n x) j_{2m}(r_n x)/(a_n r_n)
                          - 2 j_{2k+1}(n x) j_{2m}(n x)/(pi n) ]
        T[k]    = sum_n [ cos(r_n x) j_{2k+1}(r_n x)/(a_n r_n)
                          - 2 cos(n x) j_{2k+1}(n x)/(pi n) ]

    with the same data layout as :func:`series_sums_modified`.
    """
    rho = np.ascontiguousarray(rho, dtype=float)
    alpha = np.ascontiguousarray(alpha, dtype=float)
    m = rho.size
    n_idx = np.arange(1, m + 1, dtype=float)
    zr = rho * x
    zi = n_idx * x
    jr = bessel_table(zr, 2 * order + 1)
    ji = bessel_table(zi, 2 * order + 1)
    evr, odr = jr[0::2], jr[1::2]
    evi, odi = ji[0::2], ji[1::2]

    w1 = 1.0 / (alpha * rho)
    w2 = 2.0 / (np.pi * n_idx)
    S = (odr * w1) @ evr.T - (odi * w2) @ evi.T
    T = odr @ (np.cos(zr) * w1) - odi @ (np.cos(zi) * w2)
    return S, T
