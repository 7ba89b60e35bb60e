"""Shared oracle datasets for the test suite.

Forward-solver runs are the expensive part, so each dataset is generated
once per session and cached on disk under tests/_cache (safe to delete;
regenerated on demand).  All reference data comes from the forward oracle
at its stated tolerances or from closed forms.
"""

import pathlib

import numpy as np
import pytest

from slinverse import forward, potentials
from slinverse.spectral import SpectralDataset, TwoSpectraDataset

CACHE = pathlib.Path(__file__).parent / "_cache"


def _cached(name, builder):
    CACHE.mkdir(exist_ok=True)
    path = CACHE / f"{name}.npz"
    if path.exists():
        return dict(np.load(path))
    data = builder()
    np.savez(path, **data)
    return data


def _robin(name, count, h, H):
    fn, breaks = potentials.get_potential(name)

    def build():
        ds = forward.solve_forward(forward.ForwardProblem(fn, h, H, count, "robin", breaks))
        return {"rho": ds.rho, "alpha": ds.alpha}

    return _cached(f"{name}_h{h}_H{H}_robin{count}", build)


def _dirichlet(name, count, h, H):
    fn, breaks = potentials.get_potential(name)

    def build():
        mu = forward.solve_forward(
            forward.ForwardProblem(fn, h, H, count, "dirichlet", breaks)
        )
        return {"mu": mu}

    return _cached(f"{name}_h{h}_H{H}_dir{count}", build)


@pytest.fixture(scope="session")
def ex1_data():
    """q = 2 + sin 2x, h = 1, H = 1/2; 301 pairs (use [:201] for the paper size)."""
    d = _robin("sin2x", 301, 1.0, 0.5)
    return SpectralDataset.from_arrays(d["rho"], d["alpha"])


@pytest.fixture(scope="session")
def ex1_flipped_data():
    """The flipped Example-1 problem: q(pi-x) = 2 - sin 2x, h and H swapped."""

    def build():
        q = lambda x: 2.0 - np.sin(2.0 * np.asarray(x, dtype=float))
        ds = forward.solve_forward(forward.ForwardProblem(q, 0.5, 1.0, 60, "robin"))
        return {"rho": ds.rho, "alpha": ds.alpha}

    d = _cached("sin2x_flipped_robin60", build)
    return SpectralDataset.from_arrays(d["rho"], d["alpha"])


@pytest.fixture(scope="session")
def ex2_data():
    """q = |3 - |x^2 - 3||, h = 1, H = 2; 201 pairs (eigen/norming data)."""
    d = _robin("abs3", 201, 1.0, 2.0)
    return SpectralDataset.from_arrays(d["rho"], d["alpha"])


@pytest.fixture(scope="session")
def ex4_abs3_two_spectra(ex2_data):
    d = _dirichlet("abs3", 201, 1.0, 2.0)
    return TwoSpectraDataset(rho=ex2_data.rho, mu=d["mu"])


@pytest.fixture(scope="session")
def ex4_sawtooth_two_spectra():
    dr = _robin("sawtooth", 201, 1.0, 2.0)
    dm = _dirichlet("sawtooth", 201, 1.0, 2.0)
    return TwoSpectraDataset(rho=dr["rho"], mu=dm["mu"])


@pytest.fixture(scope="session")
def ex5_two_spectra():
    dr = _robin("piecewise5", 201, 1.0, 2.0)
    dm = _dirichlet("piecewise5", 201, 1.0, 2.0)
    return TwoSpectraDataset(rho=dr["rho"], mu=dm["mu"])


@pytest.fixture(scope="session")
def const1_data():
    """q = 1, h = H = 0: closed-form data, any length."""
    n = np.arange(0, 121, dtype=float)
    rho = np.sqrt(n**2 + 1.0)
    alpha = np.where(n == 0, np.pi, np.pi / 2)
    return SpectralDataset.from_arrays(rho, alpha)


def free_dataset(count):
    """q = 0, h = H = 0 spectral data in closed form."""
    n = np.arange(count, dtype=float)
    alpha = np.where(n == 0, np.pi, np.pi / 2)
    return SpectralDataset.from_arrays(n, alpha)


@pytest.fixture()
def free_data():
    return free_dataset(201)
