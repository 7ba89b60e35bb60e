"""Forward Sturm-Liouville eigenvalue solver (test-data oracle).

Solves -y'' + q y = lambda y on (0, pi) with y(0) = 1, y'(0) = h by
high-order adaptive integration, locates eigenvalues of the Robin
(y' + H y = 0 at pi) or Dirichlet (y = 0 at pi) right condition by sign
changes of the boundary residual, and refines them with a safeguarded
false-position iteration.  Norming constants are the quadratures
int_0^pi phi^2 dx, carried as an extra state so they share the ODE error
budget.

Whole batches of lambda values are integrated as one stacked ODE system:
the boundary residual is then available on a grid (for bracketing) or for
all eigenvalue candidates at once (for lockstep refinement), which avoids
thousands of per-root integrations.

Used to generate datasets for the inverse solvers and to verify round
trips; it is deliberately independent of the series machinery they use.
"""

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.integrate import solve_ivp

from .spectral import SpectralDataset, TwoSpectraDataset


class BracketingError(RuntimeError):
    """An eigenvalue bracket could not be established (index attached)."""

    def __init__(self, index, message):
        super().__init__(f"eigenvalue {index}: {message}")
        self.index = index


class RefinementError(RuntimeError):
    """The safeguarded root refinement failed to converge."""


@dataclass
class ForwardProblem:
    """Potential, Robin parameters and output request for the oracle."""

    q: Callable
    h: float
    H: float
    count: int
    bc_right: str = "robin"  # "robin" | "dirichlet"
    breakpoints: tuple = ()
    rtol: float = 2e-13
    atol: float = 2e-13
    _segments: tuple = field(init=False, repr=False)

    def __post_init__(self):
        if self.count < 1:
            raise ValueError("count must be >= 1")
        if self.bc_right not in ("robin", "dirichlet"):
            raise ValueError(f"unknown right boundary condition {self.bc_right!r}")
        cuts = sorted(t for t in self.breakpoints if 0.0 < t < np.pi)
        self._segments = tuple([0.0] + cuts + [np.pi])


#: lambda above which the slowly-varying (variation-of-parameters) form is used
_VOP_LAMBDA = 9.0


def _integrate_segments(problem, rhs, state):
    for a, c in zip(problem._segments[:-1], problem._segments[1:]):
        sol = solve_ivp(
            rhs, (a, c), state, method="DOP853", rtol=problem.rtol, atol=problem.atol
        )
        if not sol.success:
            raise RuntimeError(f"ODE integration failed on [{a}, {c}]: {sol.message}")
        state = sol.y[:, -1]
    return state


def _terminal_direct(problem, lams, with_quad):
    """phi, phi' (and int phi^2) at pi by integrating [phi, phi'] directly."""
    b = lams.size
    q = problem.q
    nstate = 3 if with_quad else 2

    def rhs(x, y):
        y = y.reshape(nstate, b)
        out = np.empty_like(y)
        out[0] = y[1]
        out[1] = (q(x) - lams) * y[0]
        if with_quad:
            out[2] = y[0] * y[0]
        return out.ravel()

    y = np.zeros((nstate, b))
    y[0] = 1.0
    y[1] = problem.h
    y = _integrate_segments(problem, rhs, y.ravel()).reshape(nstate, b)
    return (y[0], y[1], y[2]) if with_quad else (y[0], y[1])


def _terminal_vop(problem, lams, with_quad):
    """Slowly-varying formulation phi = c(x) cos(rho x) + s(x) sin(rho x).

    With phi' = rho(-c sin + s cos) the amplitudes obey
    c' = -(q/rho) sin(rho x) phi, s' = (q/rho) cos(rho x) phi; their total
    variation is O(|q|_1 / rho), which removes the phase-error accumulation
    that plain shooting suffers at large rho (the dominant data error for
    high-index eigenvalues).
    """
    b = lams.size
    q = problem.q
    rho = np.sqrt(lams)
    nstate = 3 if with_quad else 2

    def rhs(x, y):
        y = y.reshape(nstate, b)
        sn = np.sin(rho * x)
        cs = np.cos(rho * x)
        phi = y[0] * cs + y[1] * sn
        w = (q(x) / rho) * phi
        out = np.empty_like(y)
        out[0] = -w * sn
        out[1] = w * cs
        if with_quad:
            out[2] = phi * phi
        return out.ravel()

    y = np.zeros((nstate, b))
    y[0] = 1.0
    y[1] = problem.h / rho
    y = _integrate_segments(problem, rhs, y.ravel()).reshape(nstate, b)
    sn = np.sin(rho * np.pi)
    cs = np.cos(rho * np.pi)
    phi = y[0] * cs + y[1] * sn
    dphi = rho * (y[1] * cs - y[0] * sn)
    return (phi, dphi, y[2]) if with_quad else (phi, dphi)


def _terminal_states(problem, lams, with_quad=False):
    """Integrate phi for a batch of lambda values to x = pi.

    Returns (phi(pi), phi'(pi)) or (phi, phi', int phi^2) as arrays over the
    batch.  One stacked ODE system keeps the solver overhead amortized; the
    batch is split between the direct form (small or negative lambda) and
    the slowly-varying form (large lambda).
    """
    lams = np.asarray(lams, dtype=float)
    big = lams >= _VOP_LAMBDA
    if big.all():
        return _terminal_vop(problem, lams, with_quad)
    if not big.any():
        return _terminal_direct(problem, lams, with_quad)
    small_out = _terminal_direct(problem, lams[~big], with_quad)
    big_out = _terminal_vop(problem, lams[big], with_quad)
    outs = []
    for a, c in zip(small_out, big_out):
        full = np.empty(lams.size)
        full[~big] = a
        full[big] = c
        outs.append(full)
    return tuple(outs)


def _residuals(problem, lams):
    phi, dphi = _terminal_states(problem, lams)
    if problem.bc_right == "robin":
        return dphi + problem.H * phi
    return phi


def _lambda_floor(problem):
    """Crude lower bound for the first eigenvalue.

    With q >= 0 and h, H >= 0 the Rayleigh quotient gives lambda_0 >= min q;
    otherwise fall back to a generous penalty bound.
    """
    xs = np.linspace(0.0, np.pi, 513)
    qmin = float(np.min(problem.q(xs)))
    if qmin >= 0.0 and problem.h >= 0.0 and problem.H >= 0.0:
        return qmin - 0.5
    return min(0.0, qmin) - (1.0 + abs(problem.h) + abs(problem.H)) ** 2 - 1.0


def _width_tol(lo, hi, rho_tol):
    scale = np.maximum(1.0, np.maximum(np.abs(lo), np.abs(hi)))
    return np.maximum(
        8e-16 * scale,
        2.0 * np.sqrt(np.maximum(lo, 0.0)) * rho_tol + rho_tol * rho_tol,
    )


def _illinois(problem, lo, hi, flo, fhi, rho_tol=1e-12, max_iter=90):
    """Vectorized safeguarded false-position on batches of lambda brackets.

    Stops each bracket once its width corresponds to ~rho_tol in
    rho = sqrt(lambda) (or a few ulps of lambda, whichever is larger);
    pushing further only churns on ODE noise.  Each iteration re-evaluates
    only the still-open brackets, so the batch shrinks as roots converge.
    """
    lo = lo.copy()
    hi = hi.copy()
    flo = flo.copy()
    fhi = fhi.copy()
    side = np.zeros(lo.size, dtype=int)
    for _ in range(max_iter):
        width = hi - lo
        wtol = _width_tol(lo, hi, rho_tol)
        live = np.nonzero(width > wtol)[0]
        if live.size == 0:
            break
        l, h, fl, fh = lo[live], hi[live], flo[live], fhi[live]
        denom = fh - fl
        mid = np.where(
            denom != 0.0, h - fh * (h - l) / np.where(denom == 0, 1, denom),
            0.5 * (l + h),
        )
        bad = ~((mid > l) & (mid < h))
        mid[bad] = 0.5 * (l[bad] + h[bad])
        fm = _residuals(problem, mid)
        neg = (fm < 0) == (fl < 0)
        i_lo = live[neg]
        i_hi = live[~neg]
        fhi[i_lo[side[i_lo] == 1]] *= 0.5
        flo[i_hi[side[i_hi] == -1]] *= 0.5
        lo[i_lo] = mid[neg]
        flo[i_lo] = fm[neg]
        side[i_lo] = 1
        hi[i_hi] = mid[~neg]
        fhi[i_hi] = fm[~neg]
        side[i_hi] = -1
    else:
        raise RefinementError("false-position iteration did not converge")
    root = np.where(np.abs(flo) <= np.abs(fhi), lo, hi)
    return root


def _scan_first_roots(problem, needed):
    """Bracket and refine the lowest eigenvalues by a lambda grid scan.

    Scanning in lambda (not rho) keeps the ground state detectable when
    lambda_0 is at or near zero, where the residual as a function of rho
    has a double zero.
    """
    floor = _lambda_floor(problem)
    top = (needed + 2.5) ** 2
    grid = [floor]
    lam = floor
    while lam < top:
        lam += 0.5 if lam < -0.25 else 0.09 * max(1.0, 2.0 * np.sqrt(max(lam, 1.0)))
        grid.append(lam)
    grid = np.asarray(grid)
    vals = _residuals(problem, grid)
    # a root exactly on a grid node belongs to the cell on its right
    sign_change = np.nonzero(
        (vals[:-1] == 0) | (np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)
    )[0]
    if sign_change.size < needed:
        raise BracketingError(sign_change.size, "initial lambda scan exhausted")
    idx = sign_change[:needed]
    roots = _illinois(problem, grid[idx], grid[idx + 1], vals[idx], vals[idx + 1])
    return np.sqrt(np.maximum(roots, 0.0))


def _eigenvalues(problem):
    offset = 0.0 if problem.bc_right == "robin" else 0.5
    count = problem.count
    n_scan = min(count, 6)
    rho_head = _scan_first_roots(problem, n_scan)
    if count == n_scan:
        return rho_head

    # predict the remaining roots from the second-order asymptotics
    ns = np.arange(max(1, n_scan - 3), n_scan)
    omega_est = np.pi * np.median(ns * (rho_head[ns] - ns - offset))
    n = np.arange(n_scan, count, dtype=float)
    centers = n + offset + omega_est / (np.pi * n)
    width = np.full(n.size, 0.25)
    lo = centers - width
    hi = centers + width
    flo = _residuals(problem, lo**2)
    fhi = _residuals(problem, hi**2)
    bad = np.sign(flo) == np.sign(fhi)
    for i in np.nonzero(bad)[0]:
        # rare: widen individually until a sign change appears
        w = width[i]
        for _ in range(8):
            w *= 1.8
            lo[i] = centers[i] - w
            hi[i] = centers[i] + w
            flo[i] = _residuals(problem, np.array([lo[i] ** 2]))[0]
            fhi[i] = _residuals(problem, np.array([hi[i] ** 2]))[0]
            if np.sign(flo[i]) != np.sign(fhi[i]):
                break
        else:
            raise BracketingError(int(n[i]), f"no sign change near rho ~ {centers[i]:.6g}")
    lam = _illinois(problem, lo**2, hi**2, flo, fhi)
    rho_tail = np.sqrt(lam)
    rho = np.concatenate([rho_head, rho_tail])
    gaps = np.diff(rho)
    if np.any(gaps <= 0) or np.any(gaps > 1.9):
        k = int(np.argmax((gaps <= 0) | (gaps > 1.9)))
        raise BracketingError(k + 1, "eigenvalue sequence has an implausible gap")
    return rho


def solve_forward(problem: ForwardProblem):
    """Eigen-data of the forward problem.

    Robin right condition: returns a SpectralDataset (rho and alpha).
    Dirichlet: returns the array of square-root eigenvalues mu.
    Eigenvalues are refined to ~1e-12 relative; a missed bracket raises
    BracketingError with the failing index.
    """
    rho = _eigenvalues(problem)
    if problem.bc_right == "dirichlet":
        return rho
    _, _, alpha = _terminal_states(problem, rho**2, with_quad=True)
    return SpectralDataset.from_arrays(rho, alpha.copy())


def solution_at_zero(q, h, mesh, breakpoints=(), rtol=1e-12, atol=1e-13):
    """phi(0, x) on a mesh: the solution of -y'' + q y = 0, y(0)=1, y'(0)=h.

    Oracle for the first transmutation coefficient, g_0(x) = phi(0, x) - 1.
    """
    mesh = np.asarray(mesh, dtype=float)
    cuts = sorted(t for t in breakpoints if 0.0 < t < np.pi)
    stops = np.unique(np.concatenate([mesh, np.asarray(cuts, dtype=float)]))
    stops = stops[stops > 0.0]

    def rhs(x, y):
        return (y[1], q(x) * y[0])

    y = np.array([1.0, h])
    vals = {0.0: 1.0}
    x_prev = 0.0
    for x_next in stops:
        sol = solve_ivp(rhs, (x_prev, x_next), y, method="DOP853", rtol=rtol, atol=atol)
        if not sol.success:
            raise RuntimeError(f"ODE integration failed: {sol.message}")
        y = sol.y[:, -1]
        vals[float(x_next)] = float(y[0])
        x_prev = x_next
    return np.array([vals[float(x)] if x > 0 else 1.0 for x in mesh])


def two_spectra(q, h, H, count, breakpoints=(), rtol=2e-13, atol=2e-13):
    """Convenience wrapper producing a TwoSpectraDataset for one potential."""
    rho = _eigenvalues(ForwardProblem(q, h, H, count, "robin", breakpoints, rtol, atol))
    mu = _eigenvalues(
        ForwardProblem(q, h, H, count, "dirichlet", breakpoints, rtol, atol)
    )
    return TwoSpectraDataset(rho=rho, mu=mu)
