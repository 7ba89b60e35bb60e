"""From g_0 to the potential and boundary parameters.

q(x) = g_0''(x) / (g_0(x) + 1), h = g_0'(0), and
H = omega - h - (1/2) int_0^pi q; the denominator g_0 + 1 = phi(0, x) is
the ground-state eigenfunction of the shifted problem and has no zeros.
Differentiation is the delicate step: either a quintic interpolating
spline or a filtered Chebyshev fit (truncating the coefficient series once
it falls below a relative threshold suppresses the oscillatory
series-truncation noise).
"""

from dataclasses import dataclass, replace

import numpy as np
from numpy.polynomial import chebyshev
from scipy.interpolate import make_interp_spline


class DegenerateEigenfunctionError(RuntimeError):
    """|1 + g_0| fell below tolerance; the data is corrupted."""


def chebyshev_mesh(a, size):
    """Chebyshev-extrema nodes on (0, a]: a/2 (1 - cos(pi j/size)), j=1..size.

    Prepending x = 0 completes the extrema set, so a fit of degree ``size``
    interpolates; the main-system mesh uses these nodes whenever the
    filtered-Chebyshev differentiation is selected.
    """
    j = np.arange(1, size + 1)
    return 0.5 * a * (1.0 - np.cos(np.pi * j / size))


def _is_chebyshev_mesh(mesh):
    a, b = mesh[0], mesh[-1]
    j = np.arange(mesh.size)
    nodes = a + 0.5 * (b - a) * (1.0 - np.cos(np.pi * j / (mesh.size - 1)))
    return bool(np.max(np.abs(mesh - nodes)) <= 1e-9 * max(1.0, abs(b)))


@dataclass(frozen=True)
class Reconstruction:
    """Recovered potential and boundary parameters with provenance tags."""

    mesh: np.ndarray
    q: np.ndarray
    h: float
    H: float
    omega: float
    lambda0: float
    method_tags: dict
    diagnostics: dict


def differentiate_g0(mesh, g0, method="chebyshev_filtered", cheb_rel_threshold=1e-12):
    """First and second derivatives of g_0 sampled on a mesh.

    ``spline6``: quintic interpolating spline differentiated twice.
    ``chebyshev_filtered``: Chebyshev fit truncated where its coefficients
    become relatively small, then differentiated.  The cut level is the
    larger of ``cheb_rel_threshold`` times the largest coefficient and a
    noise-plateau estimate (4x the median of the trailing eighth of the
    coefficients), so the filter adapts to the actual noise floor of g_0.
    On a Chebyshev-extrema mesh (see :func:`chebyshev_mesh`) the fit is
    interpolatory; on other meshes the degree is capped well below the
    point count, since an equispaced high-degree fit is unstable at the
    edges.
    """
    mesh = np.asarray(mesh, dtype=float)
    g0 = np.asarray(g0, dtype=float)
    if mesh.size < 20:
        raise ValueError("mesh too short for stable differentiation (need >= 20)")
    if np.any(np.diff(mesh) <= 0):
        raise ValueError("mesh must be strictly increasing")

    if method == "spline6":
        spl = make_interp_spline(mesh, g0, k=5)
        return spl.derivative(1)(mesh), spl.derivative(2)(mesh)
    if method == "chebyshev_filtered":
        deg = mesh.size - 1 if _is_chebyshev_mesh(mesh) else min(mesh.size // 2, 120)
        fit = chebyshev.Chebyshev.fit(mesh, g0, deg=deg)
        coef = np.abs(fit.coef)
        floor = np.median(coef[-max(5, coef.size // 8):])
        level = max(cheb_rel_threshold * coef.max(), 4.0 * floor)
        keep = np.nonzero(coef >= level)[0]
        cut = keep[-1] + 1 if keep.size else 1
        fit = chebyshev.Chebyshev(fit.coef[:cut], domain=fit.domain, window=fit.window)
        return fit.deriv(1)(mesh), fit.deriv(2)(mesh)
    raise ValueError(f"unknown differentiation method {method!r}")


def recover_potential(g0, g0_second, tol=1e-8):
    """Pointwise q = g_0'' / (g_0 + 1)."""
    g0 = np.asarray(g0, dtype=float)
    denom = 1.0 + g0
    if np.any(np.abs(denom) < tol):
        raise DegenerateEigenfunctionError(
            "1 + g_0 vanishes on the mesh; input data is not admissible"
        )
    return np.asarray(g0_second, dtype=float) / denom


def recover_h(g0_prime_at_0):
    """h = g_0'(0), read from the differentiated model at the left endpoint."""
    return float(g0_prime_at_0)


def recover_H(omega, h, mesh, q):
    """H = omega - h - (1/2) int_0^pi q via composite trapezoid."""
    mesh = np.asarray(mesh, dtype=float)
    if mesh[0] > 1e-6 or mesh[-1] < np.pi - 1e-6:
        raise ValueError("mesh must cover [0, pi] to integrate the potential")
    return float(omega - h - 0.5 * np.trapz(np.asarray(q, dtype=float), mesh))


def combine_halves(mesh_direct, q_direct, mesh_flipped, q_flipped):
    """Join the direct half with the reflected flipped half at pi/2.

    q(x) = q_direct(x) for x <= pi/2 and q_flipped(pi - x) beyond; if both
    halves supply the midpoint the two values are averaged.
    """
    mesh_direct = np.asarray(mesh_direct, dtype=float)
    mesh_flipped = np.asarray(mesh_flipped, dtype=float)
    q_direct = np.asarray(q_direct, dtype=float)
    q_flipped = np.asarray(q_flipped, dtype=float)
    half = np.pi / 2
    if mesh_direct[-1] < half - 1e-9 or mesh_flipped[-1] < half - 1e-9:
        raise ValueError("both halves must reach past pi/2")
    left = mesh_direct <= half + 1e-12
    xr = np.pi - mesh_flipped[::-1]
    qr = q_flipped[::-1]
    right = xr > half + 1e-12
    mesh = np.concatenate([mesh_direct[left], xr[right]])
    q = np.concatenate([q_direct[left], qr[right]])
    if np.isclose(mesh_direct[left][-1], half):
        j = np.nonzero(np.isclose(xr, half))[0]
        if j.size:
            q[np.count_nonzero(left) - 1] = 0.5 * (q_direct[left][-1] + qr[j[0]])
    return mesh, q


def unshift(recon: Reconstruction, lambda0):
    """Add the recorded shift back: q += lambda0 (and omega accordingly).

    h, H and the mesh are unchanged; omega gains pi*lambda0/2 so that
    omega = h + H + (1/2) int q continues to hold for the returned
    potential.
    """
    if lambda0 == 0.0:
        return recon
    return replace(
        recon,
        q=recon.q + lambda0,
        omega=recon.omega + np.pi * lambda0 / 2.0,
        lambda0=lambda0,
    )
