"""Open arcs, closed curves and straight probe segments in the plane.

Arcs are given analytically as a position map ``s -> z(s)`` on ``[-1, 1]``
together with its derivative. Both maps are vectorized: an array of
parameters of shape ``(...)`` yields points of shape ``(..., 2)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.spatial.distance import cdist

from crackmono.errors import InvalidArgumentError

CurveMap = Callable[[np.ndarray], np.ndarray]

#: Sample count for the regularity / simplicity checks.
VALIDATION_SAMPLES = 2000
MIN_SPEED = 1e-6

BENCHMARK_NAMES = {"gamma1": 1, "gamma2": 2, "gamma3": 3}


def _check_regular_simple(points: np.ndarray, speed: np.ndarray, closed: bool, what: str) -> None:
    if not np.all(np.isfinite(points)):
        raise InvalidArgumentError(f"{what}: non-finite sample points")
    if np.min(speed) < MIN_SPEED:
        raise InvalidArgumentError(f"{what}: derivative vanishes (min |z'| = {np.min(speed):.3e})")

    steps = np.linalg.norm(np.diff(points, axis=0), axis=1)
    if closed:
        steps = np.append(steps, np.linalg.norm(points[0] - points[-1]))
    h = steps.max()
    # cumulative arc length, used to skip pairs that are close along the curve
    s = np.concatenate([[0.0], np.cumsum(steps)])
    length = s[-1]
    pos = s[: len(points)]

    gap = np.abs(pos[:, None] - pos[None, :])
    if closed:
        gap = np.minimum(gap, length - gap)
    dist = cdist(points, points)
    # Two branches crossing each other put samples within h of one another
    # while being far apart along the curve.
    bad = (gap > 4.0 * h) & (dist < 0.5 * h)
    if np.any(bad):
        i, j = np.argwhere(bad)[0]
        raise InvalidArgumentError(
            f"{what}: curve is not simple (samples {i} and {j} are {dist[i, j]:.3e} apart)"
        )


@dataclass(frozen=True, eq=False)
class ParametricArc:
    """Smooth open arc ``z : [-1, 1] -> R^2``.

    Parameters
    ----------
    position, derivative : callable
        Vectorized maps returning arrays of shape ``(..., 2)``.
    name : str
        Label used in file headers and cache keys.
    validate : bool
        Run the sample-based regularity and simplicity checks.
    """

    position: CurveMap
    derivative: CurveMap
    name: str = "custom"
    validate: bool = field(default=True, repr=False)

    def __post_init__(self):
        if self.validate:
            s = np.linspace(-1.0, 1.0, VALIDATION_SAMPLES)
            pts = np.asarray(self.position(s), dtype=float)
            speed = np.linalg.norm(np.asarray(self.derivative(s), dtype=float), axis=-1)
            if pts.shape != (VALIDATION_SAMPLES, 2):
                raise InvalidArgumentError(f"arc position map returned shape {pts.shape}")
            _check_regular_simple(pts, speed, closed=False, what=f"arc {self.name!r}")

    def __call__(self, s):
        return np.asarray(self.position(np.asarray(s, dtype=float)), dtype=float)

    def tangent(self, s):
        return np.asarray(self.derivative(np.asarray(s, dtype=float)), dtype=float)

    def sample(self, count: int = 10_000) -> np.ndarray:
        """Dense polyline through ``count`` equispaced parameter values."""
        return self(np.linspace(-1.0, 1.0, count))

    def length(self, count: int = 10_000) -> float:
        pts = self.sample(count)
        return float(np.sum(np.linalg.norm(np.diff(pts, axis=0), axis=1)))

    def distance_to(self, points, count: int = 10_000) -> np.ndarray:
        """Distance from each point (shape ``(..., 2)``) to the sampled arc."""
        pts = np.asarray(points, dtype=float)
        poly = self.sample(count)
        flat = pts.reshape(-1, 2)
        out = np.empty(len(flat))
        # chunked to keep the (chunk, count) distance table small
        for start in range(0, len(flat), 512):
            chunk = flat[start:start + 512]
            d2 = ((chunk[:, None, :] - poly[None, :, :]) ** 2).sum(axis=-1)
            out[start:start + 512] = np.sqrt(d2.min(axis=1))
        return out.reshape(pts.shape[:-1])

    def reflected(self) -> "ParametricArc":
        """Mirror image across the diagonal ``y = x``."""
        pos, der = self.position, self.derivative
        return ParametricArc(
            lambda s: np.asarray(pos(s))[..., ::-1],
            lambda s: np.asarray(der(s))[..., ::-1],
            name=f"{self.name}-reflected",
            validate=self.validate,
        )


@dataclass(frozen=True, eq=False)
class ClosedCurve:
    """Smooth closed curve ``b : [0, 2*pi) -> R^2``, periodic."""

    position: CurveMap
    derivative: CurveMap
    name: str = "curve"
    validate: bool = field(default=True, repr=False)

    def __post_init__(self):
        if not self.validate:
            return
        t = np.linspace(0.0, 2 * np.pi, VALIDATION_SAMPLES, endpoint=False)
        pts = np.asarray(self.position(t), dtype=float)
        speed = np.linalg.norm(np.asarray(self.derivative(t), dtype=float), axis=-1)
        ends = np.asarray(self.position(np.array([0.0, 2 * np.pi])), dtype=float)
        scale = max(1.0, float(np.max(np.abs(pts))))
        if np.linalg.norm(ends[0] - ends[1]) > 1e-10 * scale:
            raise InvalidArgumentError(f"curve {self.name!r} is not periodic")
        _check_regular_simple(pts, speed, closed=True, what=f"curve {self.name!r}")

    def __call__(self, t):
        return np.asarray(self.position(np.asarray(t, dtype=float)), dtype=float)

    def tangent(self, t):
        return np.asarray(self.derivative(np.asarray(t, dtype=float)), dtype=float)

    def length(self, q: int = 4096) -> float:
        t = np.linspace(0.0, 2 * np.pi, q, endpoint=False)
        return float(2 * np.pi / q * np.sum(np.linalg.norm(self.tangent(t), axis=-1)))


def circle(center=(0.0, 0.0), radius: float = 1.0) -> ClosedCurve:
    """Counter-clockwise circle."""
    if not radius > 0:
        raise InvalidArgumentError(f"circle radius must be positive, got {radius}")
    cx, cy = (float(c) for c in center)
    r = float(radius)

    def pos(t):
        t = np.asarray(t, dtype=float)
        return np.stack([cx + r * np.cos(t), cy + r * np.sin(t)], axis=-1)

    def der(t):
        t = np.asarray(t, dtype=float)
        return np.stack([-r * np.sin(t), r * np.cos(t)], axis=-1)

    return ClosedCurve(pos, der, name=f"circle({cx:g},{cy:g};{r:g})")


@dataclass(frozen=True)
class ProbeSegment:
    """Straight segment of length ``length`` centered at ``center`` along ``direction``."""

    center: tuple
    direction: tuple
    length: float

    def __post_init__(self):
        c = tuple(float(v) for v in self.center)
        d = tuple(float(v) for v in self.direction)
        if len(c) != 2 or len(d) != 2:
            raise InvalidArgumentError("probe center and direction must be 2-vectors")
        if abs(math.hypot(*d) - 1.0) > 1e-12:
            raise InvalidArgumentError(f"probe direction {d} is not a unit vector")
        if not (self.length > 0 and math.isfinite(self.length)):
            raise InvalidArgumentError(f"probe length must be positive, got {self.length}")
        object.__setattr__(self, "center", c)
        object.__setattr__(self, "direction", d)
        object.__setattr__(self, "length", float(self.length))

    @classmethod
    def at_angle(cls, center, angle_deg: float, length: float) -> "ProbeSegment":
        a = math.radians(angle_deg)
        return cls(center, (math.cos(a), math.sin(a)), length)


def probe_endpoints(p: ProbeSegment):
    c = np.asarray(p.center)
    d = np.asarray(p.direction)
    half = 0.5 * p.length * d
    return c - half, c + half


def arc_point(arc: ParametricArc, s: float) -> np.ndarray:
    if not -1.0 <= s <= 1.0:
        raise InvalidArgumentError(f"arc parameter must lie in [-1, 1], got {s}")
    return arc(s)


def _gamma1():
    return ParametricArc(
        lambda s: np.stack([s, s], axis=-1),
        lambda s: np.stack([np.ones_like(s), np.ones_like(s)], axis=-1),
        name="gamma1",
    )


def _sine_y(s):
    return np.sin(np.pi / 4 + (1 + s) * 3 * np.pi / 4)


def _sine_dy(s):
    return 3 * np.pi / 4 * np.cos(np.pi / 4 + (1 + s) * 3 * np.pi / 4)


def _gamma2():
    def pos(s):
        return np.stack([2 * np.sin(np.pi / 8 + (1 + s) * 3 * np.pi / 8) - 2 / 3, _sine_y(s)], axis=-1)

    def der(s):
        return np.stack([3 * np.pi / 4 * np.cos(np.pi / 8 + (1 + s) * 3 * np.pi / 8), _sine_dy(s)], axis=-1)

    return ParametricArc(pos, der, name="gamma2")


def _gamma3():
    return ParametricArc(
        lambda s: np.stack([s, _sine_y(s)], axis=-1),
        lambda s: np.stack([np.ones_like(s), _sine_dy(s)], axis=-1),
        name="gamma3",
    )


_BENCHMARKS = {1: _gamma1, 2: _gamma2, 3: _gamma3}


def benchmark_arc(arc_id) -> ParametricArc:
    """One of the three benchmark cracks.

    1: the diagonal segment ``(s, s)``;
    2: ``(2 sin(pi/8 + (1+s) 3pi/8) - 2/3, sin(pi/4 + (1+s) 3pi/4))``;
    3: ``(s, sin(pi/4 + (1+s) 3pi/4))``.

    ``arc_id`` may also be one of the names ``"gamma1"``..``"gamma3"``.
    """
    if isinstance(arc_id, str):
        key = BENCHMARK_NAMES.get(arc_id.lower())
    else:
        key = arc_id if arc_id in _BENCHMARKS else None
    if key is None:
        raise InvalidArgumentError(f"unknown benchmark arc {arc_id!r}; expected 1, 2 or 3")
    return _BENCHMARKS[key]()
