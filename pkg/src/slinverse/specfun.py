"""Special-function kernel shared by all assemblers.

Spherical Bessel sequences j_0(z)..j_N(z) via backward recursion (with
upward recursion from the closed forms once the argument exceeds the top
order) and Legendre polynomials via the standard three-term recurrence.
Everything here is a pure function of its arguments.
"""

from dataclasses import dataclass

import numpy as np

from . import kernels


@dataclass(frozen=True)
class BesselSequence:
    """Values j_0(z)..j_N(z) for a fixed real argument z."""

    argument: float
    values: np.ndarray


def bessel_table(z, nmax, z_over_pi=None):
    """Table of j_n(z), shape (nmax+1, len(z)), for nonnegative arguments."""
    return kernels.bessel_table(np.atleast_1d(z), nmax, z_over_pi)


def spherical_bessel_sequence(z: float, nmax: int) -> BesselSequence:
    """Spherical Bessel values j_0(z)..j_nmax(z) for a single real z.

    Total on real inputs; negative arguments use the parity
    j_n(-z) = (-1)^n j_n(z).
    """
    if nmax < 0:
        raise ValueError("nmax must be nonnegative")
    zz = float(z)
    vals = kernels.bessel_table(np.array([abs(zz)]), nmax)[:, 0].copy()
    if zz < 0.0:
        vals[1::2] = -vals[1::2]
    return BesselSequence(argument=zz, values=vals)


def legendre_eval(n: int, t):
    """Legendre polynomial P_n(t) on [-1, 1] by the three-term recurrence.

    The convention P_{-2} == 0 is honored (it appears in banded terms of the
    main-system assembly); other negative orders are rejected, as are
    arguments outside [-1, 1].
    """
    t = np.asarray(t, dtype=float)
    if np.any(np.abs(t) > 1.0 + 1e-14):
        raise ValueError("legendre_eval requires |t| <= 1")
    if n == -2:
        out = np.zeros_like(t)
        return out if out.ndim else float(out)
    if n < 0:
        raise ValueError("order must be nonnegative (or -2 by convention)")
    p_prev = np.ones_like(t)
    if n == 0:
        return p_prev if p_prev.ndim else float(p_prev)
    p_cur = t.copy()
    for k in range(1, n):
        p_prev, p_cur = p_cur, ((2 * k + 1) * t * p_cur - k * p_prev) / (k + 1)
    return p_cur if p_cur.ndim else float(p_cur)
