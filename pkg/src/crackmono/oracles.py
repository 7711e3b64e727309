"""Independent reference computations used by the self-test and the test suite.

Nothing here shares code paths with the production routines it checks:
the eigenvalue count uses a hand-written Householder reduction and a Sturm
sequence (no LAPACK), segment integrals use brute-force composite Simpson
quadrature along the segment, and the circle Gram uses the Bessel identity

    int_{|y - c| = rho} exp(ik y.v) ds(y) = 2 pi rho exp(ik c.v) J0(k rho |v|).
"""

import numpy as np
from scipy import integrate
from scipy import special as sp

from crackmono.forward import directions


def householder_tridiagonal(A):
    """Reduce a Hermitian matrix to real symmetric tridiagonal form.

    Returns ``(diag, offdiag)`` with ``offdiag`` the moduli of the
    sub-diagonal, which leaves the spectrum unchanged.
    """
    A = np.array(A, dtype=complex)
    n = A.shape[0]
    for k in range(n - 2):
        x = A[k + 1:, k].copy()
        norm_x = np.linalg.norm(x)
        if norm_x == 0.0:
            continue
        phase = x[0] / abs(x[0]) if x[0] != 0 else 1.0
        v = x.copy()
        v[0] += phase * norm_x
        v /= np.linalg.norm(v)
        # A <- P A P with P = I - 2 v v^H acting on rows/cols k+1..n-1
        A[k + 1:, :] -= 2.0 * np.outer(v, v.conj() @ A[k + 1:, :])
        A[:, k + 1:] -= 2.0 * np.outer(A[:, k + 1:] @ v, v.conj())
    diag = A.diagonal().real.copy()
    off = np.abs(A.diagonal(-1))
    return diag, off


def sturm_count(diag, off, x: float) -> int:
    """Number of eigenvalues of the symmetric tridiagonal matrix below ``x``."""
    count = 0
    q = 1.0
    tiny = np.finfo(float).tiny
    scale = max(1.0, float(np.max(np.abs(diag), initial=0.0)), float(np.max(off, initial=0.0)))
    for i, a in enumerate(diag):
        b2 = off[i - 1] ** 2 if i > 0 else 0.0
        q = (a - x) - (b2 / q if i > 0 else 0.0)
        if q == 0.0:
            q = -tiny * scale
        if q < 0:
            count += 1
    return count


def sturm_negative_count(H, delta: float = 0.0) -> int:
    """Count of eigenvalues ``< -delta`` of a Hermitian matrix via Sturm sequences."""
    diag, off = householder_tridiagonal(H)
    return sturm_count(diag, off, -delta)


def segment_integral(center, direction, length, v, k, points: int = 10_001):
    """``int_sigma exp(ik y.v) ds(y)`` by composite Simpson on ``points`` nodes."""
    s = np.linspace(-0.5 * length, 0.5 * length, points)
    y = np.asarray(center, dtype=float) + s[:, None] * np.asarray(direction, dtype=float)
    f = np.exp(1j * k * (y @ np.asarray(v, dtype=float)))
    return integrate.simpson(f.real, x=s) + 1j * integrate.simpson(f.imag, x=s)


def segment_gram_bruteforce(probe, k, N, points: int = 10_001):
    dirs = directions(N)
    out = np.empty((N, N), dtype=complex)
    for l in range(N):
        for m in range(N):
            out[l, m] = segment_integral(probe.center, probe.direction, probe.length,
                                         dirs[m] - dirs[l], k, points)
    return (2 * np.pi / N) * out


def circle_gram(center, radius, k, N):
    dirs = directions(N)
    v = dirs[None, :, :] - dirs[:, None, :]
    phase = np.exp(1j * k * (v @ np.asarray(center, dtype=float)))
    return (2 * np.pi / N) * 2 * np.pi * radius * phase * sp.j0(k * radius * np.linalg.norm(v, axis=-1))
