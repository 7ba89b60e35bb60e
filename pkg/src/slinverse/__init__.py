"""Direct recovery of Sturm-Liouville potentials and boundary parameters.

Recovers a potential q on (0, pi) and Robin parameters h, H either from
eigenvalues plus norming constants or from two spectra, by reducing the
Gelfand-Levitan equation to a small linear system for the Fourier-Legendre
coefficients of the transmutation kernel.  A forward eigenvalue solver is
included for generating test data and verifying round trips.
"""

from .kernels import backend_name

__all__ = ["backend_name"]
__version__ = "0.1.0"
