"""Bessel-type functions needed by the Helmholtz single-layer kernel.

``J0``/``Y0`` come from :mod:`scipy.special`. The log-split form of the
kernel also needs the regular remainder

    Y0reg(x) = Y0(x) - (2/pi) J0(x) log(x/2),

which is evaluated by its power series for small arguments, where forming
the difference directly would lose digits, and by the difference otherwise.
"""

import numpy as np
from scipy import special as sp

EULER_GAMMA = float(np.euler_gamma)
SERIES_CUTOFF = 2.0
_SERIES_TERMS = 30


def j0(x):
    return sp.j0(x)


def y0(x):
    return sp.y0(x)


def hankel1_0(x):
    """First-kind Hankel function of order zero, ``J0 + i Y0``."""
    x = np.asarray(x, dtype=float)
    return sp.j0(x) + 1j * sp.y0(x)


def _y0reg_series(x):
    q = 0.25 * x * x
    term = np.ones_like(x)
    harmonic = 0.0
    acc = np.zeros_like(x)
    for m in range(1, _SERIES_TERMS + 1):
        term = term * q / (m * m)
        harmonic += 1.0 / m
        acc = acc + (-1) ** (m + 1) * harmonic * term
    return 2.0 / np.pi * (EULER_GAMMA * sp.j0(x) + acc)


def y0_regular(x):
    """``Y0(x) - (2/pi) J0(x) log(x/2)``; equals ``(2/pi) * euler_gamma`` at 0."""
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    small = x < SERIES_CUTOFF
    out[small] = _y0reg_series(x[small])
    big = ~small
    xb = x[big]
    out[big] = sp.y0(xb) - 2.0 / np.pi * sp.j0(xb) * np.log(0.5 * xb)
    return out
