"""Negative-eigenvalue counting and the two monotonicity tests.

Inner test (probe segments): a probe ``sigma`` lying on the crack makes
``-Re(F) - H*H`` have few negative eigenvalues, probes away from it make
that count grow. Outer test (closed curves): ``H*H + Re(F)`` has few
negative eigenvalues when the curve encloses the crack.

In finite dimensions "finitely many" is replaced by the raw count, so only
the contrast between probes is meaningful.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from crackmono.errors import InvalidArgumentError, NumericalFailureError
from crackmono.forward import FarFieldMatrix
from crackmono.geometry import ClosedCurve, ProbeSegment
from crackmono.operators import boundary_gram, segment_gram

HERMITIAN_TOL = 1e-10


@dataclass(frozen=True)
class EigenReport:
    """Ascending eigenvalues and the count of those strictly below ``-delta``."""

    eigenvalues: np.ndarray
    count: int
    delta: float

    def smallest(self, how_many: int = 5) -> np.ndarray:
        return self.eigenvalues[:how_many]

    def csv_row(self, probe: ProbeSegment | None = None) -> list:
        """``cx, cy, dx, dy, L, delta, count, ev1..ev5`` (probe fields blank if absent)."""
        if probe is None:
            head = [""] * 5
        else:
            head = [*map(repr, probe.center), *map(repr, probe.direction), repr(probe.length)]
        evs = [repr(float(v)) for v in self.smallest(5)]
        evs += [""] * (5 - len(evs))
        return head + [repr(self.delta), str(self.count)] + evs


EIGEN_CSV_HEADER = ["cx", "cy", "dx", "dy", "L", "delta", "count",
                    "ev1", "ev2", "ev3", "ev4", "ev5"]


def re_part(A) -> np.ndarray:
    """``(A + A^H) / 2``."""
    A = np.asarray(A)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise InvalidArgumentError(f"re_part needs a square matrix, got shape {A.shape}")
    return 0.5 * (A + A.conj().T)


def _check_delta(delta):
    if not (delta >= 0 and np.isfinite(delta)):
        raise InvalidArgumentError(f"eigenvalue threshold delta must be >= 0, got {delta}")


def eigvalsh_stack(H: np.ndarray) -> np.ndarray:
    """Ascending eigenvalues of a Hermitian matrix or a stack of them."""
    try:
        ev = np.linalg.eigvalsh(H)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailureError(f"Hermitian eigensolver did not converge: {exc}") from exc
    if not np.all(np.isfinite(ev)):
        raise NumericalFailureError("Hermitian eigensolver returned non-finite values")
    return ev


def symmetrize(H: np.ndarray) -> np.ndarray:
    """``(H + H^H) / 2`` over the last two axes."""
    return 0.5 * (H + np.swapaxes(H, -1, -2).conj())


def count_below(H: np.ndarray, delta: float = 0.0) -> np.ndarray:
    """Number of eigenvalues ``< -delta`` for each matrix of a ``(..., N, N)`` stack.

    Matrices are symmetrized first, exactly as in :func:`negative_eigenvalue_count`,
    so single and batched evaluation agree bit for bit.
    """
    return np.sum(eigvalsh_stack(symmetrize(H)) < -delta, axis=-1)


def negative_eigenvalue_count(H, delta: float = 0.0) -> EigenReport:
    _check_delta(delta)
    H = np.asarray(H)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise InvalidArgumentError(f"expected a square matrix, got shape {H.shape}")
    scale = max(1.0, float(np.max(np.abs(H)))) if H.size else 1.0
    if np.max(np.abs(H - H.conj().T), initial=0.0) > HERMITIAN_TOL * scale:
        raise InvalidArgumentError("matrix is not Hermitian")
    ev = eigvalsh_stack(symmetrize(H))
    return EigenReport(ev, int(np.sum(ev < -delta)), float(delta))


def inner_base(F: FarFieldMatrix) -> np.ndarray:
    """``-Re(w U)``, the data term of the inner test."""
    return -re_part(F.operator())


def _matching(F: FarFieldMatrix, k: float, N: int):
    if not np.isclose(F.k, k, rtol=1e-14, atol=0.0) or F.N != N:
        raise InvalidArgumentError(
            f"far field (k={F.k}, N={F.N}) and test operator (k={k}, N={N}) disagree")


def indicator_segment(F: FarFieldMatrix, probe: ProbeSegment, delta: float = 0.0,
                      k: float | None = None, N: int | None = None) -> int:
    """Negative eigenvalue count of ``-Re(w U) - H*H`` for a probe segment.

    ``k`` and ``N`` default to those of ``F``; passing them explicitly checks
    that the probe operator is built on the same grid.
    """
    k = F.k if k is None else k
    N = F.N if N is None else N
    _matching(F, k, N)
    gram = segment_gram(probe, k, N).values
    return negative_eigenvalue_count(inner_base(F) - gram, delta).count


def indicator_domain(F: FarFieldMatrix, curve: ClosedCurve, delta: float = 0.0,
                     q: int = 256, k: float | None = None, N: int | None = None) -> int:
    """Negative eigenvalue count of ``H*H + Re(w U)`` for a closed curve."""
    k = F.k if k is None else k
    N = F.N if N is None else N
    _matching(F, k, N)
    gram = boundary_gram(curve, k, N, q).values
    return negative_eigenvalue_count(gram + re_part(F.operator()), delta).count
