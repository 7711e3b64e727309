"""Forward solver for plane-wave scattering by a sound-soft open arc.

The scattered field is represented as a single-layer potential

    u_s(x) = int_Gamma phi(y) Phi(x, y) ds(y),   Phi = (i/4) H0(k|x - y|),

and the density solves the first-kind equation ``S phi = -exp(ik theta.x)``
on the arc. The density has inverse square-root singularities at the arc
ends, so the equation is rewritten with ``s = cos(t)``:

    psi(t) = |sin t| |z'(cos t)| phi(z(cos t)),

which is smooth, even and 2*pi-periodic. The kernel has logarithmic
singularities at ``tau = t`` and ``tau = -t``; both are split off as

    K(t, tau) = M1 [log(4 sin^2((t-tau)/2)) + log(4 sin^2((t+tau)/2))] + M2

with ``M1 = -J0(k r) / (4 pi)`` and ``M2`` analytic. Because ``psi`` is even
the two logarithms contribute equally, and the discretization uses the
trapezoid rule on ``t_j = (2j - 1) pi / (2n)`` with the standard
logarithm-weighted trapezoid weights for the singular part. Unknowns are the
``n`` values of ``psi`` on ``(0, pi)``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy import linalg as sla

from crackmono import special
from crackmono.errors import InvalidArgumentError, NumericalFailureError
from crackmono.geometry import ParametricArc
from crackmono.matrixio import read_matrix_csv, write_matrix_csv

logger = logging.getLogger(__name__)

#: Linear systems whose condition estimate exceeds this are rejected.
MAX_CONDITION = 1e12


@dataclass(frozen=True)
class SolverConfig:
    """Wavenumber ``k``, quadrature size ``n`` and direction count ``N``."""

    k: float = 1.0
    n: int = 128
    N: int = 60

    def __post_init__(self):
        if not (self.k > 0 and np.isfinite(self.k)):
            raise InvalidArgumentError(f"wavenumber must be positive, got {self.k}")
        if int(self.n) != self.n or self.n < 8 or self.n % 2:
            raise InvalidArgumentError(f"quadrature size n must be even and >= 8, got {self.n}")
        if int(self.N) != self.N or self.N < 4 or self.N % 2:
            raise InvalidArgumentError(f"direction count N must be even and >= 4, got {self.N}")
        object.__setattr__(self, "k", float(self.k))
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "N", int(self.N))


def directions(N: int, offset: float = 0.0) -> np.ndarray:
    """Unit vectors at angles ``2 pi l / N + offset`` for ``l = 1..N``; shape ``(N, 2)``."""
    ang = 2 * np.pi * np.arange(1, N + 1) / N + offset
    return np.stack([np.cos(ang), np.sin(ang)], axis=-1)


def log_weights(n: int) -> np.ndarray:
    """Weights of ``int_0^{2pi} log(4 sin^2((t_i - tau)/2)) f(tau) dtau`` on ``2n`` nodes.

    Returns the ``(2n, 2n)`` matrix ``R[i, j] = R(t_i - t_j)`` where

        R(d) = -(2 pi / n) sum_{m=1}^{n-1} cos(m d) / m - (pi / n^2) cos(n d).
    """
    d = np.arange(2 * n) * np.pi / n
    m = np.arange(1, n)
    r = -(2 * np.pi / n) * (np.cos(np.outer(d, m)) @ (1.0 / m)) - (np.pi / n**2) * np.cos(n * d)
    j = np.arange(2 * n)
    return r[(j[:, None] - j[None, :]) % (2 * n)]


@dataclass
class _NystromSystem:
    arc: ParametricArc
    k: float
    n: int
    t: np.ndarray         # (n,) nodes in (0, pi)
    points: np.ndarray    # (n, 2) z(cos t_j)
    speed: np.ndarray     # (n,) |z'(cos t_j)|
    matrix: np.ndarray    # (n, n)
    condition: float
    _lu: tuple = field(default=None, repr=False)

    def solve(self, rhs: np.ndarray) -> np.ndarray:
        if self._lu is None:
            self._lu = sla.lu_factor(self.matrix, check_finite=False)
        return sla.lu_solve(self._lu, rhs, check_finite=False)


def _assemble(arc: ParametricArc, k: float, n: int) -> _NystromSystem:
    t_all = (2 * np.arange(1, 2 * n + 1) - 1) * np.pi / (2 * n)
    s_all = np.cos(t_all)
    pts_all = arc(s_all)
    speed_all = np.linalg.norm(arc.tangent(s_all), axis=-1)

    ti = t_all[:n, None]
    tj = t_all[None, :]
    delta = pts_all[:n, None, :] - pts_all[None, :, :]
    r2 = np.einsum("ijk,ijk->ij", delta, delta)
    prod = 16.0 * np.sin(0.5 * (ti - tj)) ** 2 * np.sin(0.5 * (ti + tj)) ** 2

    rows = np.arange(n)
    mirror = 2 * n - 1 - rows  # index of the node 2*pi - t_i
    coincide = np.zeros((n, 2 * n), dtype=bool)
    coincide[rows, rows] = True
    coincide[rows, mirror] = True
    # r^2 / prod is analytic; at coincident nodes it tends to |z'|^2 / 4
    ratio = r2 / np.where(coincide, 1.0, prod)
    ratio[rows, rows] = 0.25 * speed_all[:n] ** 2
    ratio[rows, mirror] = 0.25 * speed_all[:n] ** 2

    kr = k * np.sqrt(r2)
    bj0 = special.j0(kr)
    m1 = -bj0 / (4 * np.pi)
    m2 = (0.25j * bj0 - 0.25 * special.y0_regular(kr)
          - bj0 / (2 * np.pi) * (np.log(0.5 * k) + 0.5 * np.log(ratio)))

    full = log_weights(n)[:n] * m1 + (np.pi / (2 * n)) * m2
    if not np.all(np.isfinite(full)):
        raise NumericalFailureError("non-finite kernel values (Hankel evaluation failed)")
    # psi is even: fold column 2n-1-j onto unknown j
    matrix = full[:, :n] + full[:, mirror]

    cond = float(np.linalg.cond(matrix))
    if not np.isfinite(cond) or cond > MAX_CONDITION:
        raise NumericalFailureError(
            f"single-layer system is ill-conditioned (cond ~ {cond:.3e})", condition=cond
        )
    return _NystromSystem(arc, k, n, t_all[:n], pts_all[:n], speed_all[:n], matrix, cond)


@dataclass(frozen=True, eq=False)
class Density:
    """Transformed single-layer density ``psi`` at the nodes ``t_j`` in ``(0, pi)``."""

    values: np.ndarray
    arc: ParametricArc
    k: float
    t: np.ndarray

    def __post_init__(self):
        if not np.all(np.isfinite(self.values)):
            raise NumericalFailureError("density has non-finite entries")
        if self.values.shape != self.t.shape:
            raise InvalidArgumentError("density length does not match the quadrature grid")

    @property
    def n(self) -> int:
        return len(self.values)

    def physical(self) -> np.ndarray:
        """Density ``phi`` on the arc at ``z(cos t_j)`` (undoes the substitution)."""
        speed = np.linalg.norm(self.arc.tangent(np.cos(self.t)), axis=-1)
        return self.values / (np.sin(self.t) * speed)


def _check_direction(v, what):
    v = np.asarray(v, dtype=float)
    if v.shape != (2,) or abs(np.hypot(*v) - 1.0) > 1e-12:
        raise InvalidArgumentError(f"{what} must be a unit 2-vector, got {v}")
    return v


def plane_wave_data(system: _NystromSystem, theta, amplitude=1.0) -> np.ndarray:
    """Boundary values ``-amplitude * exp(ik theta.x)`` at the nodes; ``theta`` may be ``(m, 2)``."""
    theta = np.asarray(theta, dtype=float)
    phase = system.points @ theta.T
    return -amplitude * np.exp(1j * system.k * phase)


def solve_single_layer(arc: ParametricArc, cfg: SolverConfig, data) -> Density:
    """Solve ``S phi = f`` for boundary values ``f`` given at ``z(cos t_j)``."""
    system = _assemble(arc, cfg.k, cfg.n)
    data = np.asarray(data, dtype=complex)
    if data.shape != (cfg.n,):
        raise InvalidArgumentError(f"boundary data must have length {cfg.n}")
    return Density(system.solve(data), arc, cfg.k, system.t)


def solve_density(arc: ParametricArc, cfg: SolverConfig, incident_direction,
                  amplitude: complex = 1.0) -> Density:
    """Density of the scattered field for the incident wave ``amplitude * exp(ik theta.x)``."""
    theta = _check_direction(incident_direction, "incident direction")
    system = _assemble(arc, cfg.k, cfg.n)
    return Density(system.solve(plane_wave_data(system, theta, amplitude)), arc, cfg.k, system.t)


def far_field_constant(k: float) -> complex:
    """``exp(i pi/4) / sqrt(8 pi k)``, matching ``u_s ~ exp(ikr)/sqrt(r) u_inf``."""
    return np.exp(0.25j * np.pi) / np.sqrt(8 * np.pi * k)


def _far_field_operator(points, t_count, k, observations) -> np.ndarray:
    """Matrix mapping nodal ``psi`` to far field values at ``observations``."""
    phase = np.asarray(observations, dtype=float) @ points.T
    return far_field_constant(k) * (np.pi / t_count) * np.exp(-1j * k * phase)


def far_field(arc: ParametricArc, cfg: SolverConfig, density: Density, observation) -> complex:
    """Far field pattern ``u_inf(x_hat)`` of the single-layer potential with ``density``."""
    if density.arc is not arc or density.k != cfg.k or density.n != cfg.n:
        raise InvalidArgumentError("density was not computed for this arc/configuration")
    xhat = _check_direction(observation, "observation direction")
    points = arc(np.cos(density.t))
    row = _far_field_operator(points, cfg.n, cfg.k, xhat[None, :])
    return complex((row @ density.values)[0])


@dataclass(frozen=True, eq=False)
class FarFieldMatrix:
    """Samples ``U[l, m] = u_inf(x_hat_l, theta_m)``, ``l`` observation, ``m`` incidence.

    Both direction sets are ``2 pi l / N``, ``l = 1..N``. Entries are stored
    unweighted; the discrete far field operator is ``weight * values``.
    """

    values: np.ndarray
    k: float
    arc_name: str = "custom"
    n: int | None = None

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex)
        if v.ndim != 2 or v.shape[0] != v.shape[1]:
            raise InvalidArgumentError(f"far field matrix must be square, got {v.shape}")
        if not np.all(np.isfinite(v)):
            raise NumericalFailureError("far field matrix has non-finite entries")
        object.__setattr__(self, "values", v)

    @property
    def N(self) -> int:
        return self.values.shape[0]

    @property
    def weight(self) -> float:
        return 2 * np.pi / self.N

    def operator(self) -> np.ndarray:
        return self.weight * self.values

    def to_csv(self, path) -> Path:
        meta = {"arc": self.arc_name}
        if self.n is not None:
            meta["n"] = self.n
        return write_matrix_csv(path, self.values, self.k, self.weight, meta=meta)

    @classmethod
    def from_csv(cls, path) -> "FarFieldMatrix":
        values, k, weight, _, meta = read_matrix_csv(path)
        if weight != 2 * np.pi / values.shape[0]:
            raise InvalidArgumentError(f"{path}: weight {weight} does not match N={values.shape[0]}")
        n = int(meta["n"]) if "n" in meta else None
        return cls(values, k, meta.get("arc", "custom"), n)


def far_field_matrix(arc: ParametricArc, cfg: SolverConfig) -> FarFieldMatrix:
    """Full bistatic far field matrix on ``N`` equispaced directions.

    The system matrix does not depend on the incident direction, so it is
    factored once and all ``N`` right-hand sides are solved together.
    """
    system = _assemble(arc, cfg.k, cfg.n)
    dirs = directions(cfg.N)
    psi = system.solve(plane_wave_data(system, dirs))
    bad = ~np.all(np.isfinite(psi), axis=0)
    if np.any(bad):
        m = int(np.argmax(bad)) + 1
        raise NumericalFailureError(f"density solve failed for incident direction m={m}",
                                    condition=system.condition)
    values = _far_field_operator(system.points, cfg.n, cfg.k, dirs) @ psi
    logger.debug("far field matrix %s k=%g n=%d N=%d cond=%.3e",
                 arc.name, cfg.k, cfg.n, cfg.N, system.condition)
    return FarFieldMatrix(values, cfg.k, arc.name, cfg.n)


def reciprocity_residual(F: FarFieldMatrix) -> float:
    """``max |U[l, m] - U[m + N/2, l + N/2]|`` (indices mod N).

    Reciprocity ``u_inf(x, theta) = u_inf(-theta, -x)`` with equispaced
    directions maps ``-theta_m`` to index ``m + N/2``.
    """
    N = F.N
    idx = (np.arange(N) + N // 2) % N
    swapped = F.values[np.ix_(idx, idx)].T
    return float(np.max(np.abs(F.values - swapped)))


def add_noise(F: FarFieldMatrix, level: float, seed: int = 0) -> FarFieldMatrix:
    """Add complex Gaussian noise of size ``level * ||U||_F / N`` per entry."""
    if not level >= 0:
        raise InvalidArgumentError(f"noise level must be >= 0, got {level}")
    if level == 0:
        return FarFieldMatrix(F.values.copy(), F.k, F.arc_name, F.n)
    rng = np.random.default_rng(seed)
    N = F.N
    xi = rng.standard_normal((N, N)) + 1j * rng.standard_normal((N, N))
    scale = level * np.linalg.norm(F.values) / N
    return FarFieldMatrix(F.values + scale * xi, F.k, F.arc_name, F.n)
