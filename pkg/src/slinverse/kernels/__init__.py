"""Numerical kernel backend selection.

The compiled Cython backend is preferred when present; the pure NumPy
reference backend is used otherwise.  Set ``SLINVERSE_FORCE_REF=1`` in the
environment to force the reference backend (useful for benchmarking and
for debugging suspected extension issues).
"""

import os

from . import _ref

_impl = _ref
if not os.environ.get("SLINVERSE_FORCE_REF"):
    try:
        from . import _fast as _impl  # type: ignore[no-redef]
    except ImportError:
        pass

bessel_table = _impl.bessel_table
series_sums_modified = _impl.series_sums_modified
series_sums_integrated = _impl.series_sums_integrated


def backend_name():
    """'compiled' when the Cython core is active, else 'reference'."""
    return "reference" if _impl is _ref else "compiled"
