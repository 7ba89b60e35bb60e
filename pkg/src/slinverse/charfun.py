"""Boundary-coefficient recovery and the characteristic function.

From a (shifted, optionally augmented) list of square-root eigenvalues the
coefficients h_n = gamma_n(pi) + H g_n(pi) are obtained by least squares
from the overdetermined system

    h_0 cos(r_k pi) - sum_n (-1)^n h_n j_{2n}(r_k pi) = -r_k sin(r_k pi),

with rescaled unknowns (h_n / sqrt(4n+1), generalized here to full column
equilibration, which also evens out the cos term in the h_0 column);
omega = -h_0 follows without any use of eigenvalue asymptotics.  The
number of retained unknowns is the largest keeping the equilibrated
matrix condition number below a threshold.  The same
machinery recovers g_n(pi) from a Robin-Dirichlet spectrum, evaluates the
characteristic function, produces norming constants for the two-spectra
problem, and maps norming constants to those of the flipped problem
(potential reflected, boundary parameters interchanged).

Asymptotic and exact rows enter the least-squares solves with uniform
weight, as in the source method; down-weighting synthetic rows is a
possible variation that is deliberately not taken.
"""

from dataclasses import dataclass

import numpy as np

from .kernels import bessel_table

#: relative SVD cutoff of the pseudoinverse solves
PINV_RCOND = 1e-13


class ConditioningError(RuntimeError):
    """No unknown count satisfies the condition-number threshold."""


@dataclass(frozen=True)
class BoundaryCoefficients:
    """Recovered h_n (and optionally g_n(pi)) with solve diagnostics.

    omega is exactly -h[0]; cond_h / cond_g are the condition numbers of
    the retained overdetermined systems.
    """

    h: np.ndarray
    omega: float
    cond_h: float
    g_pi: np.ndarray | None = None
    cond_g: float | None = None
    omega1: float | None = None

    @property
    def n1o(self):
        return self.h.size - 1

    @property
    def n2o(self):
        return None if self.g_pi is None else self.g_pi.size - 1


def _reduced_trig(rho):
    """(sin(rho*pi), cos(rho*pi)) via fractional-part reduction.

    Naive evaluation at large rho*pi loses ~rho*eps absolutely, which is
    fatal for the h_n right-hand side; the reduction keeps full relative
    accuracy.
    """
    rho = np.asarray(rho, dtype=float)
    m = np.round(rho)
    f = rho - m
    sgn = 1.0 - 2.0 * (np.asarray(m, dtype=np.int64) & 1)
    return sgn * np.sin(np.pi * f), sgn * np.cos(np.pi * f)


def _solve_by_condition(columns, rhs, cond_threshold):
    """Pseudoinverse solve with the largest column count passing the policy.

    Columns are equilibrated to unit norm first: the sqrt(4n+1) unknown
    scaling evens out the Bessel columns, but the h_0 column with its
    cos(rho_k pi) part grows like sqrt(rows), which would swamp the
    condition number with a norm imbalance instead of the genuine
    near-dependence the threshold is meant to detect.
    Returns (solution in equilibrated variables / norms, count, cond).
    """
    norms = np.linalg.norm(columns, axis=0)
    norms[norms == 0] = 1.0
    eq = columns / norms

    def cond_of(count):
        sv = np.linalg.svd(eq[:, :count], compute_uv=False)
        return np.inf if sv[-1] == 0 else sv[0] / sv[-1]

    # the condition number grows with the column count; bisect for the
    # largest admissible count instead of scanning every candidate
    hi = columns.shape[1]
    cond = cond_of(hi)
    if cond >= cond_threshold:
        lo = 1
        cond_lo = cond_of(lo)
        if cond_lo >= cond_threshold:
            raise ConditioningError(
                f"condition number exceeds {cond_threshold} even for a single unknown"
            )
        while hi - lo > 1:
            mid = (lo + hi) // 2
            c = cond_of(mid)
            if c < cond_threshold:
                lo, cond_lo = mid, c
            else:
                hi = mid
        hi, cond = lo, cond_lo
    count = hi
    sol, *_ = np.linalg.lstsq(eq[:, :count], rhs, rcond=PINV_RCOND)
    return sol / norms[:count], count, cond


def recover_hn(rho_extended, cond_threshold=10.0, max_unknowns=250):
    """Solve the overdetermined system for h_0..h_{N1o}; omega = -h_0.

    ``rho_extended`` is the shifted eigenvalue list (rho_0 = 0), exact
    entries optionally extended by asymptotic ones; rows k = 1..M.
    Unknowns are capped at ``max_unknowns`` and reduced until the scaled
    matrix has condition number below ``cond_threshold``.
    """
    rho = np.asarray(rho_extended, dtype=float)
    if rho.size < 3:
        raise ValueError("need at least two nonzero eigenvalues")
    if abs(rho[0]) > 1e-9:
        raise ValueError("expected shifted data with rho_0 = 0")
    rk = rho[1:]
    cap = int(min(max_unknowns, rk.size))
    s, c = _reduced_trig(rk)
    jt = bessel_table(rk * np.pi, 2 * cap - 2, z_over_pi=rk)[0::2]
    cols = np.empty((rk.size, cap))
    cols[:, 0] = c - jt[0]
    n = np.arange(1, cap)
    cols[:, 1:] = -((-1.0) ** n) * jt[1:cap].T
    rhs = -rk * s

    h, count, cond = _solve_by_condition(cols, rhs, cond_threshold)
    return BoundaryCoefficients(h=h, omega=float(-h[0]), cond_h=float(cond))


def recover_gn_pi(mu_extended, cond_threshold=10.0, max_unknowns=250):
    """Solve sum_n (-1)^n g_n(pi) j_{2n}(mu_k pi) = -cos(mu_k pi).

    Returns (g_pi, cond); the unknown count follows the same
    condition-number policy as :func:`recover_hn`.
    """
    mu = np.asarray(mu_extended, dtype=float)
    if mu.size < 2:
        raise ValueError("need at least two Dirichlet eigenvalues")
    cap = int(min(max_unknowns, mu.size - 1))
    _, c = _reduced_trig(mu)
    jt = bessel_table(mu * np.pi, 2 * cap - 2, z_over_pi=mu)[0::2]
    n = np.arange(cap)
    cols = ((-1.0) ** n) * jt[:cap].T
    rhs = -c

    g_pi, _, cond = _solve_by_condition(cols, rhs, cond_threshold)
    return g_pi, float(cond)


def evaluate_char_function(rho, coeffs: BoundaryCoefficients):
    """Characteristic function Phi(rho) of the Robin-Robin problem.

    Phi(rho) = -rho sin(rho pi) + omega cos(rho pi)
               + sum_n (-1)^n h_n j_{2n}(rho pi);
    its zeros are the square-root eigenvalues, and no knowledge of H is
    needed.
    """
    rho = np.atleast_1d(np.asarray(rho, dtype=float))
    s, c = _reduced_trig(rho)
    h = coeffs.h
    jt = bessel_table(np.abs(rho) * np.pi, max(0, 2 * h.size - 2),
                      z_over_pi=np.abs(rho))[0::2]
    n = np.arange(h.size)
    series = (((-1.0) ** n) * h) @ jt[: h.size]
    out = -rho * s + coeffs.omega * c + series
    return out if out.size > 1 else float(out[0])


def _phi_bracket(rho, coeffs, omega):
    """The two series factors of the norming-constant product formula.

    Returns (phi(rho_n, pi), B_n) for n >= 1, where

        B_n = (1 + pi omega) sin(r pi) + pi r cos(r pi)
              + sum_k (-1)^k h_k (pi j_{2k+1}(r pi) - (2k/r) j_{2k}(r pi)).
    """
    h = coeffs.h
    g = coeffs.g_pi if coeffs.g_pi is not None else np.zeros(1)
    nmax = 2 * max(h.size, g.size) - 1
    s, c = _reduced_trig(rho)
    jt = bessel_table(rho * np.pi, nmax, z_over_pi=rho)
    even = jt[0::2]
    odd = jt[1::2]
    kg = np.arange(g.size)
    phi = c + (((-1.0) ** kg) * g) @ even[: g.size]
    kh = np.arange(h.size)
    br = (1.0 + np.pi * omega) * s + np.pi * rho * c
    br += (((-1.0) ** kh) * h) @ (np.pi * odd[: h.size] - (2.0 * kh)[:, None] / rho * even[: h.size])
    return phi, br


def compute_norming_constants(rho, coeffs: BoundaryCoefficients, omega=None):
    """Norming constants from the recovered h_n and g_n(pi) coefficient series.

    alpha_0 = (1 + g_0(pi)) (pi + omega pi^2/3 + h_1 pi^2/15) and, for
    n >= 1, alpha_n = phi(rho_n, pi) * B_n / (2 rho_n).  ``omega`` defaults
    to the self-contained -h_0; the two-spectra pipeline passes the
    asymptotic-fit value instead.
    """
    rho = np.asarray(rho, dtype=float)
    if abs(rho[0]) > 1e-9:
        raise ValueError("expected shifted data with rho_0 = 0")
    if np.any(rho[1:] <= 0.0):
        raise ValueError("rho_n = 0 for n >= 1 is not admissible")
    if coeffs.g_pi is None:
        raise ValueError("g_n(pi) coefficients required (two-spectra recovery)")
    om = coeffs.omega if omega is None else float(omega)
    h1 = coeffs.h[1] if coeffs.h.size > 1 else 0.0
    alpha0 = (1.0 + coeffs.g_pi[0]) * (np.pi + om * np.pi**2 / 3 + h1 * np.pi**2 / 15)
    phi, br = _phi_bracket(rho[1:], coeffs, om)
    return np.concatenate([[alpha0], phi * br / (2.0 * rho[1:])])


def flip_norming_constants(rho, alpha, coeffs: BoundaryCoefficients, omega=None):
    """Norming constants of the flipped problem (q(pi-x), h and H swapped).

    alpha_0^r = (pi + omega pi^2/3 + h_1 pi^2/15)^2 / alpha_0 and
    alpha_n^r = B_n^2 / (4 alpha_n rho_n^2); the flipped problem shares the
    eigenvalues, so (rho, alpha^r) is again admissible spectral data.
    """
    rho = np.asarray(rho, dtype=float)
    alpha = np.asarray(alpha, dtype=float)
    if np.any(alpha <= 0.0):
        raise ValueError("norming constants must be positive")
    if abs(rho[0]) > 1e-9:
        raise ValueError("expected shifted data with rho_0 = 0")
    om = coeffs.omega if omega is None else float(omega)
    h1 = coeffs.h[1] if coeffs.h.size > 1 else 0.0
    alpha0_r = (np.pi + om * np.pi**2 / 3 + h1 * np.pi**2 / 15) ** 2 / alpha[0]
    _, br = _phi_bracket(rho[1:], coeffs, om)
    alpha_r = br**2 / (4.0 * alpha[1:] * rho[1:] ** 2)
    return np.concatenate([[alpha0_r], alpha_r])


def recover_omega1_from_gn(g_pi):
    """omega_1 = sum_n g_n(pi) / pi (value of the kernel diagonal at pi)."""
    return float(np.sum(g_pi) / np.pi)
