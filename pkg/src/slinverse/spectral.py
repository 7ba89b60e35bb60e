"""Spectral-data containers, admissibility checks, shift and asymptotic fits.

Data for the Robin-Robin problem is the pair {rho_n, alpha_n} (square-root
eigenvalues and norming constants); the two-spectra problem supplies rho_n
together with the Robin-Dirichlet square roots mu_n.  Admissible data obey

    rho_n = n + omega/(pi n) + k_n/n,   alpha_n = pi/2 + K_n/n,
    mu_n  = n + 1/2 + omega_1/(pi n) + ...,   {k_n}, {K_n} in l2,

with alpha_n > 0, simple eigenvalues, and interlacing for two spectra.
Higher-order expansions in powers of 1/n are fitted by least squares and
used both to read off omega (= pi * leading coefficient) and to append
synthetic high-index "asymptotic" entries that extend a finite dataset.
"""

from dataclasses import dataclass, replace

import numpy as np

#: per-entry origin flags
EXACT = True
ASYMPTOTIC = False

# |n(rho_n - n)| above this is reported as a boundedness violation; the
# value is omega/pi + o(1) for admissible data, so 50 is generous.
DEFAULT_ASYMPTOTE_BOUND = 50.0


class FitDegenerateError(ValueError):
    """Too few trailing data points to fit the asymptotic expansion."""


@dataclass(frozen=True)
class SpectralDataset:
    """Square-root eigenvalues and norming constants of a Robin-Robin problem.

    ``origin`` flags entries as exact (input data) or asymptotic (appended
    from a fitted expansion); ``shift`` records lambda_0 = rho_0^2 of the
    original problem once the dataset has been shifted so that rho_0 = 0.
    """

    rho: np.ndarray
    alpha: np.ndarray
    origin: np.ndarray
    shift: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "rho", np.asarray(self.rho, dtype=float))
        object.__setattr__(self, "alpha", np.asarray(self.alpha, dtype=float))
        object.__setattr__(self, "origin", np.asarray(self.origin, dtype=bool))

    @classmethod
    def from_arrays(cls, rho, alpha, shift=0.0):
        rho = np.asarray(rho, dtype=float)
        return cls(rho, alpha, np.full(rho.size, EXACT), shift)

    @property
    def n_exact(self):
        return int(np.count_nonzero(self.origin))

    def __len__(self):
        return self.rho.size


@dataclass(frozen=True)
class TwoSpectraDataset:
    """Square roots of the Robin-Robin (rho) and Robin-Dirichlet (mu) spectra."""

    rho: np.ndarray
    mu: np.ndarray
    shift: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "rho", np.asarray(self.rho, dtype=float))
        object.__setattr__(self, "mu", np.asarray(self.mu, dtype=float))

    def __len__(self):
        return self.rho.size


@dataclass(frozen=True)
class AsymptoticModel:
    """Fitted coefficients of the 1/n expansions of the spectral data.

    ``omega_odd`` holds the eigenvalue coefficients of 1/n^(2j-1) (the even
    powers vanish), ``alpha_even`` the norming-constant coefficients of
    1/n^(2j), ``omega1_all`` the Robin-Dirichlet coefficients of 1/n^j (all
    powers).  ``residual_norms`` maps fit name -> residual 2-norms per
    candidate order, which embody the l2 remainder tails.
    """

    omega_odd: np.ndarray
    alpha_even: np.ndarray
    omega1_all: np.ndarray | None
    K: int
    residual_norms: dict

    @property
    def omega(self) -> float:
        return float(np.pi * self.omega_odd[0]) if self.omega_odd.size else 0.0

    @property
    def omega1(self) -> float:
        if self.omega1_all is None or not self.omega1_all.size:
            return 0.0
        return float(np.pi * self.omega1_all[0])

    def rho_tail(self, n):
        """Asymptotic rho_n = n + sum_j omega^(2j-1)/n^(2j-1)."""
        n = np.asarray(n, dtype=float)
        out = n.copy()
        for j, c in enumerate(self.omega_odd):
            out += c / n ** (2 * j + 1)
        return out

    def alpha_tail(self, n):
        """Asymptotic alpha_n = pi/2 + sum_j omega^(2j,+)/n^(2j)."""
        n = np.asarray(n, dtype=float)
        out = np.full_like(n, np.pi / 2)
        for j, c in enumerate(self.alpha_even):
            out += c / n ** (2 * j + 2)
        return out

    def mu_tail(self, n):
        """Asymptotic mu_n = n + 1/2 + sum_j omega_1^(j)/n^j."""
        n = np.asarray(n, dtype=float)
        out = n + 0.5
        if self.omega1_all is not None:
            for j, c in enumerate(self.omega1_all):
                out += c / n ** (j + 1)
        return out


def validate(data, asymptote_bound=DEFAULT_ASYMPTOTE_BOUND):
    """Check a dataset against the spectral characterization criteria.

    Returns a list of human-readable violations; an empty list means the
    data is admissible.  Diagnostic only, never raises.
    """
    out = []
    if isinstance(data, TwoSpectraDataset):
        rho, mu = data.rho, data.mu
        if np.any(np.diff(rho) <= 0):
            out.append("rho not strictly increasing (duplicate or unsorted eigenvalue)")
        if np.any(np.diff(mu) <= 0):
            out.append("mu not strictly increasing (duplicate or unsorted eigenvalue)")
        if rho.size and rho[0] < 0:
            out.append("negative rho_0")
        m = min(rho.size - 1, mu.size)
        lam, nu = rho**2, mu**2
        for n in range(m):
            if not (lam[n] < nu[n] < lam[n + 1]):
                out.append(f"interlacing lambda_{n} < nu_{n} < lambda_{n + 1} violated")
                break
        _check_tail(rho, np.ones(rho.size, dtype=bool), 0.0, asymptote_bound, out)
        return out

    rho, alpha = data.rho, data.alpha
    if rho.size != alpha.size:
        out.append("rho and alpha length mismatch")
    if np.any(np.diff(rho) == 0):
        out.append("duplicate eigenvalue (lambda_n != lambda_m violated)")
    elif np.any(np.diff(rho) < 0):
        out.append("rho not sorted increasing")
    if rho.size and rho[0] < 0:
        out.append("negative rho_0")
    if np.any(alpha <= 0):
        out.append("nonpositive norming constant")
    _check_tail(rho, data.origin, 0.0, asymptote_bound, out)
    return out


def _check_tail(rho, origin, offset, bound, out):
    n = np.arange(rho.size, dtype=float)
    mask = origin & (n >= 1)
    if mask.any():
        dev = np.abs(n[mask] * (rho[mask] - n[mask] - offset))
        if dev.max() > bound:
            out.append(
                f"n(rho_n - n) unbounded: max {dev.max():.3g} exceeds {bound:.3g}"
            )


def shift_to_zero(data):
    """Shift the spectra so the lowest eigenvalue becomes zero.

    Returns (shifted dataset, lambda_0).  Norming constants are unchanged;
    for two spectra both lists shift by the same lambda_0.  Idempotent when
    rho_0 = 0 already.
    """
    lam0 = float(data.rho[0]) ** 2
    if lam0 == 0.0:
        return data, 0.0
    rho = np.sqrt(np.maximum(data.rho**2 - lam0, 0.0))
    rho[0] = 0.0
    if isinstance(data, TwoSpectraDataset):
        mu = np.sqrt(data.mu**2 - lam0)
        return TwoSpectraDataset(rho, mu, shift=lam0), lam0
    return replace(data, rho=rho, shift=lam0), lam0


def _scaled_lstsq(columns, y):
    """Column-equilibrated least squares via SVD (no normal equations)."""
    norms = np.linalg.norm(columns, axis=0)
    norms[norms == 0] = 1.0
    sol, res, *_ = np.linalg.lstsq(columns / norms, y, rcond=None)
    fitted = (columns / norms) @ sol
    return sol / norms, float(np.linalg.norm(y - fitted))


def _select_order(y, n, powers_of_k, k_cap, improvement):
    """Grow the expansion order while the residual improves by ``improvement``.

    ``powers_of_k(K)`` returns the list of 1/n exponents for order K.
    Returns (coefficients, chosen K, residual list with entry 0 = |y|).
    """
    residuals = [float(np.linalg.norm(y))]
    best = None
    chosen = 0
    for K in range(1, k_cap + 1):
        cols = np.stack([n ** (-p) for p in powers_of_k(K)], axis=1)
        coef, r = _scaled_lstsq(cols, y)
        residuals.append(r)
        if K == 1 or (residuals[K - 1] > 0 and r <= residuals[K - 1] / improvement):
            best, chosen = coef, K
        else:
            break
    return best, chosen, residuals


def fit_eigenvalue_asymptotics(rho, ns=None, k_max=5, improvement=10.0):
    """Fit sum_j omega^(2j-1)/n^(2j-1) to rho_n - n over n in [ns, N1].

    ``ns`` defaults to floor(N1/2).  The order K grows while each extra term
    improves the residual 2-norm by the ``improvement`` factor, capped at
    min(k_max, N1 - ns - 1).  Returns (coefficients, residual list).
    """
    rho = np.asarray(rho, dtype=float)
    n1 = rho.size - 1
    if ns is None:
        ns = max(1, n1 // 2)
    if n1 - ns < 2:
        raise FitDegenerateError(f"need N1 - ns >= 2, got N1={n1}, ns={ns}")
    n = np.arange(ns, n1 + 1, dtype=float)
    y = rho[ns:] - n
    cap = max(1, min(k_max, n1 - ns - 1))
    coef, _, residuals = _select_order(
        y, n, lambda K: [2 * j - 1 for j in range(1, K + 1)], cap, improvement
    )
    return coef, residuals


def fit_norming_asymptotics(alpha, ns, K):
    """Fit sum_j omega^(2j,+)/n^(2j), j = 1..K-1, to alpha_n - pi/2.

    The order is tied to the eigenvalue fit (K-1 terms); K = 1 yields the
    bare tail alpha_n = pi/2.  Returns (coefficients, residual norm).
    """
    alpha = np.asarray(alpha, dtype=float)
    n1 = alpha.size - 1
    ns = max(1, ns)
    if n1 - ns < 2:
        raise FitDegenerateError(f"need N1 - ns >= 2, got N1={n1}, ns={ns}")
    terms = max(0, min(K - 1, n1 - ns - 1))
    n = np.arange(ns, n1 + 1, dtype=float)
    y = alpha[ns:] - np.pi / 2
    if terms == 0:
        return np.empty(0), float(np.linalg.norm(y))
    cols = np.stack([n ** (-2.0 * j) for j in range(1, terms + 1)], axis=1)
    coef, r = _scaled_lstsq(cols, y)
    return coef, r


def fit_mu_asymptotics(mu, ns=None, k_max=5, improvement=10.0):
    """Fit sum_j omega_1^(j)/n^j (all powers) to mu_n - n - 1/2.

    Same order selection as the eigenvalue fit; the optimal order is
    typically up to 5.  Returns (coefficients, residual list).
    """
    mu = np.asarray(mu, dtype=float)
    n2 = mu.size - 1
    if ns is None:
        ns = max(1, n2 // 2)
    if n2 - ns < 2:
        raise FitDegenerateError(f"need N2 - ns >= 2, got N2={n2}, ns={ns}")
    n = np.arange(ns, n2 + 1, dtype=float)
    y = mu[ns:] - n - 0.5
    cap = max(1, min(k_max, n2 - ns - 1))
    coef, _, residuals = _select_order(
        y, n, lambda K: list(range(1, K + 1)), cap, improvement
    )
    return coef, residuals


def fit_asymptotics(data, ns=None, k_max=5, improvement=10.0):
    """Fit all applicable expansions of a dataset into an AsymptoticModel."""
    if isinstance(data, TwoSpectraDataset):
        omega_odd, res_rho = fit_eigenvalue_asymptotics(
            data.rho, ns, k_max, improvement
        )
        omega1_all, res_mu = fit_mu_asymptotics(data.mu, ns, k_max, improvement)
        return AsymptoticModel(
            omega_odd=omega_odd,
            alpha_even=np.empty(0),
            omega1_all=omega1_all,
            K=omega_odd.size,
            residual_norms={"rho": res_rho, "mu": res_mu},
        )
    exact = data.rho[data.origin]
    omega_odd, res_rho = fit_eigenvalue_asymptotics(exact, ns, k_max, improvement)
    alpha_even, res_alpha = fit_norming_asymptotics(
        data.alpha[data.origin], ns if ns is not None else max(1, (exact.size - 1) // 2),
        omega_odd.size,
    )
    return AsymptoticModel(
        omega_odd=omega_odd,
        alpha_even=alpha_even,
        omega1_all=None,
        K=omega_odd.size,
        residual_norms={"rho": res_rho, "alpha": [res_alpha]},
    )


def augment_with_asymptotics(data, model, M):
    """Append asymptotic entries for n = N1+1 .. M (M = final max index).

    Appended eigenvalues/norming constants follow the fitted expansions and
    are flagged asymptotic.  For two spectra both lists are extended.
    """
    n1 = len(data) - 1
    if M <= n1:
        return data
    n_new = np.arange(n1 + 1, M + 1, dtype=float)
    if isinstance(data, TwoSpectraDataset):
        n2 = data.mu.size - 1
        m_new = np.arange(n2 + 1, M + 1, dtype=float)
        return TwoSpectraDataset(
            rho=np.concatenate([data.rho, model.rho_tail(n_new)]),
            mu=np.concatenate([data.mu, model.mu_tail(m_new)]),
            shift=data.shift,
        )
    return SpectralDataset(
        rho=np.concatenate([data.rho, model.rho_tail(n_new)]),
        alpha=np.concatenate([data.alpha, model.alpha_tail(n_new)]),
        origin=np.concatenate([data.origin, np.full(n_new.size, ASYMPTOTIC)]),
        shift=data.shift,
    )
