"""Builtin benchmark potentials on (0, pi).

Each entry provides the callable, its breakpoints (where a derivative or
the value jumps, so integrators can stop there) and a short description.
The set covers the standard benchmark family: smooth, kinked, sawtooth and
a discontinuous staircase.
"""

import numpy as np

_SQRT3 = np.sqrt(3.0)
_SQRT6 = np.sqrt(6.0)

#: breakpoints of the sawtooth slope sign(sin(10 t / (4 - t)))
_SAW_BREAKS = tuple(4.0 * k * np.pi / (10.0 + k * np.pi) for k in range(1, 12))


def _zero(x):
    return np.zeros_like(np.asarray(x, dtype=float))


def _const1(x):
    return np.ones_like(np.asarray(x, dtype=float))


def _sin2x(x):
    return 2.0 + np.sin(2.0 * np.asarray(x, dtype=float))


def _abs3(x):
    x = np.asarray(x, dtype=float)
    return np.abs(3.0 - np.abs(x * x - 3.0))


def _sawtooth(x):
    x = np.asarray(x, dtype=float)
    pts = np.concatenate([[0.0], _SAW_BREAKS])
    # integral of the +/-1 slope accumulated at the breakpoints
    vals = np.zeros(pts.size)
    sign = 1.0
    for i in range(1, pts.size):
        vals[i] = vals[i - 1] + sign * (pts[i] - pts[i - 1])
        sign = -sign
    idx = np.clip(np.searchsorted(pts, x, side="right") - 1, 0, pts.size - 1)
    slope = 1.0 - 2.0 * (idx % 2)
    return vals[idx] + slope * (x - pts[idx])


def _piecewise5(x):
    x = np.asarray(x, dtype=float)
    return np.select(
        [
            x <= np.pi / 8,
            x <= np.pi / 4,
            x < 3 * np.pi / 8,
            x < 3 * np.pi / 5,
            x < 4 * np.pi / 5,
        ],
        [
            np.zeros_like(x),
            -12.0 * x / np.pi + 1.5,
            12.0 * x / np.pi - 4.5,
            np.zeros_like(x),
            np.full_like(x, 4.0),
        ],
        default=2.0,
    )


BUILTIN = {
    "zero": (_zero, (), "q = 0"),
    "const1": (_const1, (), "q = 1"),
    "sin2x": (_sin2x, (), "q = 2 + sin 2x (smooth)"),
    "abs3": (_abs3, (_SQRT3, _SQRT6), "q = |3 - |x^2 - 3|| (kinked)"),
    "sawtooth": (_sawtooth, _SAW_BREAKS, "piecewise-linear sawtooth slope +-1"),
    "piecewise5": (
        _piecewise5,
        (np.pi / 8, np.pi / 4, 3 * np.pi / 8, 3 * np.pi / 5, 4 * np.pi / 5),
        "discontinuous staircase with a triangular dip",
    ),
}


def get_potential(name):
    """(callable, breakpoints) for a builtin name; raises KeyError otherwise."""
    if name not in BUILTIN:
        raise KeyError(
            f"unknown potential {name!r}; builtins: {', '.join(sorted(BUILTIN))}"
        )
    fn, breaks, _ = BUILTIN[name]
    return fn, breaks
