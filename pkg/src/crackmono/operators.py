"""Discretized Herglotz Gram matrices used as monotonicity test operators.

For a set ``sigma`` the Gram operator ``H*H`` has kernel

    (x_hat, theta) -> int_sigma exp(ik y.(theta - x_hat)) ds(y),

and on ``N`` equispaced directions it becomes the ``N x N`` matrix of
these integrals times ``2 pi / N``. For straight segments the integral is
closed form; for closed curves it is computed with the trapezoid rule.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from crackmono.errors import InvalidArgumentError
from crackmono.forward import directions
from crackmono.geometry import ClosedCurve, ProbeSegment
from crackmono.matrixio import read_matrix_csv, write_matrix_csv

HERMITIAN_TOL = 1e-12
PSD_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class TestMatrix:
    """Hermitian positive semidefinite Gram matrix (weights included)."""

    __test__ = False  # not a pytest class

    values: np.ndarray
    kind: str           # "segment" | "boundary"
    k: float
    geometry: str = ""
    hermitian: bool = field(default=True)

    @property
    def N(self) -> int:
        return self.values.shape[0]

    def hermitian_defect(self) -> float:
        return float(np.max(np.abs(self.values - self.values.conj().T)))

    def check(self) -> None:
        """Raise if the Hermitian / PSD invariants are violated."""
        if self.hermitian_defect() > HERMITIAN_TOL * max(1.0, np.max(np.abs(self.values))):
            raise InvalidArgumentError(f"{self.kind} Gram matrix is not Hermitian")
        ev = np.linalg.eigvalsh(self.values)
        if ev[0] < -PSD_TOL * max(abs(ev[-1]), np.finfo(float).tiny):
            raise InvalidArgumentError(f"{self.kind} Gram matrix is not PSD (min eig {ev[0]:.3e})")

    def to_csv(self, path) -> Path:
        return write_matrix_csv(path, self.values, self.k, 1.0,
                                geometry=f"{self.kind} {self.geometry}".strip())

    @classmethod
    def from_csv(cls, path) -> "TestMatrix":
        values, k, _, geometry, _ = read_matrix_csv(path)
        kind, _, desc = (geometry or "segment").partition(" ")
        return cls(values, kind, k, desc)


def _angles(N, angles):
    if angles is None:
        if N % 2:
            raise InvalidArgumentError(f"direction count N must be even, got {N}")
        return directions(N)
    angles = np.asarray(angles, dtype=float)
    return np.stack([np.cos(angles), np.sin(angles)], axis=-1)


def segment_gram_values(centers, direction, length: float, k: float, N: int,
                        angles=None) -> np.ndarray:
    """Vectorized segment Gram matrices for several probe centers.

    ``centers`` has shape ``(P, 2)``; returns ``(P, N, N)``. Entry ``(l, m)`` is

        (2 pi / N) * L * exp(ik (theta_m - x_l).c) * sinc(k L a / (2 pi)),
        a = (theta_m - x_l).d,

    with ``sinc(x) = sin(pi x) / (pi x)``.
    """
    if not length > 0:
        raise InvalidArgumentError(f"probe length must be positive, got {length}")
    dirs = _angles(N, angles)
    N = len(dirs)
    centers = np.atleast_2d(np.asarray(centers, dtype=float))
    diff = dirs[None, :, :] - dirs[:, None, :]          # [l, m] = theta_m - x_l
    a = diff @ np.asarray(direction, dtype=float)
    envelope = (2 * np.pi / N) * length * np.sinc(k * length * a / (2 * np.pi))
    phase = np.einsum("lmk,pk->plm", diff, centers)
    return envelope[None] * np.exp(1j * k * phase)


def segment_gram(probe: ProbeSegment, k: float, N: int, angles=None) -> TestMatrix:
    """Closed-form ``H*H`` for a straight probe segment.

    ``angles`` overrides the default directions ``2 pi l / N`` (used for
    rotated direction sets); the weight stays ``2 pi / N``.
    """
    values = segment_gram_values([probe.center], probe.direction, probe.length, k, N, angles)[0]
    geometry = "c=({:.17g},{:.17g}) d=({:.17g},{:.17g}) L={:.17g}".format(
        *probe.center, *probe.direction, probe.length)
    return TestMatrix(values, "segment", k, geometry)


def boundary_gram(curve: ClosedCurve, k: float, N: int, q: int = 256) -> TestMatrix:
    """Trapezoid-rule ``H*H`` over a closed curve, in the L2 pairing.

    Written as ``(2 pi / N) A^H W A`` with ``A[p, m] = exp(ik b(t_p).theta_m)``
    and ``W`` the trapezoid weights ``(2 pi / q) |b'(t_p)|``; that form is
    Hermitian PSD by construction.
    """
    if not isinstance(curve, ClosedCurve):
        raise InvalidArgumentError("boundary_gram needs a ClosedCurve")
    if int(q) != q or q < 16 or q % 2:
        raise InvalidArgumentError(f"quadrature size q must be even and >= 16, got {q}")
    dirs = _angles(N, None)
    t = np.linspace(0.0, 2 * np.pi, int(q), endpoint=False)
    pts = curve(t)
    w = (2 * np.pi / q) * np.linalg.norm(curve.tangent(t), axis=-1)
    A = np.exp(1j * k * (pts @ dirs.T))
    values = (2 * np.pi / N) * (A.conj().T * w) @ A
    # entry (l, m) = sum_p w_p exp(ik b_p.(theta_m - x_l)); symmetrize roundoff
    values = 0.5 * (values + values.conj().T)
    return TestMatrix(values, "boundary", k, curve.name)
