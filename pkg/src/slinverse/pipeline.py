"""End-to-end inverse solvers.

solve_problem1 recovers (q, h, H) from eigenvalues and norming constants:
shift so rho_0 = 0, fit the eigenvalue/norming-constant asymptotics,
append synthetic high-index data, solve the truncated main system on a
mesh for g_0, differentiate, read off q and h, optionally repeat on the
flipped problem to sharpen the right half, then H from omega and the mean
of q, and undo the shift.

solve_problem2 reduces two spectra to the same machinery: omega and
omega_1 come from the two asymptotic fits (H = omega - omega_1), the
boundary coefficient series h_n and g_n(pi) from the two overdetermined
systems, and the norming constants from the product formula.
"""

from dataclasses import dataclass, replace

import numpy as np

from . import charfun, glsystem, recovery, spectral


class SpectralValidationError(ValueError):
    """Input data violates the admissibility criteria."""

    def __init__(self, violations):
        super().__init__("; ".join(violations))
        self.violations = violations


@dataclass
class SolveConfig:
    """Tuning knobs of the inverse pipelines (defaults follow the method).

    N is the truncation order (N + 1 equations in the main system); M the
    final maximum data index after augmentation; ``ns`` the first index
    used by the asymptotic fits (default floor(N1/2)).  When flipping is
    on, each half is recovered on (0, a] with a = (1/2 + flip_overlap) pi.
    """

    N: int = 7
    M: int = 5000
    mesh_size: int = 201
    ns: int | None = None
    k_max: int = 5
    improvement_factor: float = 10.0
    cond_threshold: float = 10.0
    max_unknowns: int = 250
    flip: bool = True
    flip_overlap: float = 0.05
    diff_method: str = "chebyshev_filtered"
    cheb_rel_threshold: float = 1e-12
    omega_method: str = "fit"  # "fit" | "h0"

    def check(self, data_len):
        if self.N < 1:
            raise ValueError("truncation order N must be >= 1")
        if self.mesh_size < 20:
            raise ValueError("mesh_size must be >= 20")
        if self.M < data_len - 1:
            raise ValueError("augmentation target M must cover the dataset")


def _require_valid(data):
    violations = spectral.validate(data)
    if violations:
        raise SpectralValidationError(violations)


def _half_mesh(cfg):
    a = (0.5 + cfg.flip_overlap) * np.pi if cfg.flip else np.pi
    if cfg.diff_method == "chebyshev_filtered":
        return recovery.chebyshev_mesh(a, cfg.mesh_size)
    return a * np.arange(1, cfg.mesh_size + 1) / cfg.mesh_size


def _recover_half(aug, omega, mesh, cfg):
    """g_0 solve + differentiation + q on one half; returns with x=0 prepended."""
    g0, cond = glsystem.solve_g0_profile(aug, omega, cfg.N, mesh)
    mesh0 = np.concatenate([[0.0], mesh])
    g00 = np.concatenate([[0.0], g0])
    d1, d2 = recovery.differentiate_g0(
        mesh0, g00, cfg.diff_method, cfg.cheb_rel_threshold
    )
    q = recovery.recover_potential(g00, d2)
    return mesh0, q, float(d1[0]), cond


def _main_driver(aug, omega, lam0, cfg, coeffs, diagnostics):
    """Shared tail of both algorithms, from augmented data to Reconstruction."""
    mesh = _half_mesh(cfg)
    mesh_d, q_d, h, cond_d = _recover_half(aug, omega, mesh, cfg)
    diagnostics["main_cond_max"] = float(np.max(cond_d))

    if cfg.flip:
        alpha_r = charfun.flip_norming_constants(
            aug.rho, aug.alpha, coeffs, omega=omega
        )
        aug_r = replace(aug, alpha=alpha_r)
        mesh_f, q_f, h_rev, cond_f = _recover_half(aug_r, omega, mesh, cfg)
        diagnostics["flip_cond_max"] = float(np.max(cond_f))
        diagnostics["h_of_flipped"] = h_rev
        full_mesh, q = recovery.combine_halves(mesh_d, q_d, mesh_f, q_f)
    else:
        full_mesh, q = mesh_d, q_d

    if "H" in diagnostics:
        H = diagnostics["H"]
        diagnostics["H_check_mean_q"] = recovery.recover_H(omega, h, full_mesh, q)
    else:
        H = recovery.recover_H(omega, h, full_mesh, q)

    recon = recovery.Reconstruction(
        mesh=full_mesh,
        q=q,
        h=h,
        H=H,
        omega=omega,
        lambda0=0.0,
        method_tags={
            "diff_method": cfg.diff_method,
            "N": cfg.N,
            "M": cfg.M,
            "flip": cfg.flip,
            "omega_method": cfg.omega_method,
        },
        diagnostics=diagnostics,
    )
    return recovery.unshift(recon, lam0)


def solve_problem1(data: spectral.SpectralDataset, cfg: SolveConfig = None):
    """Recover (q, h, H) from eigenvalues and norming constants."""
    cfg = cfg or SolveConfig()
    cfg.check(len(data))
    _require_valid(data)

    data0, lam0 = spectral.shift_to_zero(data)
    model = spectral.fit_asymptotics(
        data0, cfg.ns, cfg.k_max, cfg.improvement_factor
    )
    aug = spectral.augment_with_asymptotics(data0, model, cfg.M)
    coeffs = charfun.recover_hn(aug.rho, cfg.cond_threshold, cfg.max_unknowns)
    omega = model.omega if cfg.omega_method == "fit" else coeffs.omega

    diagnostics = {
        "lambda0": lam0,
        "omega_fit": model.omega,
        "omega_h0": coeffs.omega,
        "omega_discrepancy": abs(model.omega - coeffs.omega),
        "K_rho": int(model.K),
        "fit_residuals_rho": list(model.residual_norms["rho"]),
        "n1o": coeffs.n1o,
        "cond_hn": coeffs.cond_h,
    }
    return _main_driver(aug, omega, lam0, cfg, coeffs, diagnostics)


def solve_problem2(data: spectral.TwoSpectraDataset, cfg: SolveConfig = None):
    """Recover (q, h, H) from the Robin-Robin and Robin-Dirichlet spectra."""
    cfg = cfg or SolveConfig()
    cfg.check(len(data))
    _require_valid(data)

    data0, lam0 = spectral.shift_to_zero(data)
    model = spectral.fit_asymptotics(
        data0, cfg.ns, cfg.k_max, cfg.improvement_factor
    )
    omega = model.omega
    omega1 = model.omega1
    H = omega - omega1

    aug2 = spectral.augment_with_asymptotics(data0, model, cfg.M)
    coeffs = charfun.recover_hn(aug2.rho, cfg.cond_threshold, cfg.max_unknowns)
    g_pi, cond_g = charfun.recover_gn_pi(
        aug2.mu, cfg.cond_threshold, cfg.max_unknowns
    )
    coeffs = replace(
        coeffs, g_pi=g_pi, cond_g=cond_g,
        omega1=charfun.recover_omega1_from_gn(g_pi),
    )
    omega_work = omega if cfg.omega_method == "fit" else coeffs.omega
    alpha = charfun.compute_norming_constants(aug2.rho, coeffs, omega=omega_work)
    origin = np.arange(aug2.rho.size) < len(data)
    aug = spectral.SpectralDataset(aug2.rho, alpha, origin, shift=lam0)

    diagnostics = {
        "lambda0": lam0,
        "omega_fit": omega,
        "omega_h0": coeffs.omega,
        "omega_discrepancy": abs(omega - coeffs.omega),
        "omega1_fit": omega1,
        "omega1_series": coeffs.omega1,
        "H": H,
        "K_rho": int(model.K),
        "K_mu": len(model.omega1_all) if model.omega1_all is not None else 0,
        "n1o": coeffs.n1o,
        "n2o": coeffs.n2o,
        "cond_hn": coeffs.cond_h,
        "cond_gn": cond_g,
    }
    return _main_driver(aug, omega_work, lam0, cfg, coeffs, diagnostics)
