"""Sweep probe segments over a sampling square and collect indicator values."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from crackmono.errors import InvalidArgumentError, NumericalFailureError
from crackmono.forward import FarFieldMatrix, add_noise
from crackmono.geometry import ParametricArc
from crackmono.indicator import _check_delta, count_below, inner_base
from crackmono.operators import segment_gram_values

ORIENTATION_ANGLES = {"ver": 90.0, "vertical": 90.0, "hor": 0.0, "horizontal": 0.0}


def parse_orientation(spec) -> float:
    """Probe angle in degrees from ``"ver"``, ``"hor"``, ``"angle:<deg>"`` or a number."""
    if isinstance(spec, (int, float)):
        angle = float(spec)
    else:
        key = str(spec).strip().lower()
        if key in ORIENTATION_ANGLES:
            return ORIENTATION_ANGLES[key]
        if key.startswith("angle:"):
            key = key[len("angle:"):]
        try:
            angle = float(key)
        except ValueError:
            raise InvalidArgumentError(f"bad orientation {spec!r}; use ver, hor or angle:<deg>") from None
    if not math.isfinite(angle):
        raise InvalidArgumentError(f"orientation angle must be finite, got {spec!r}")
    return angle


def probe_direction(angle_deg: float) -> tuple:
    # exact axis directions for the two standard modes
    if angle_deg == 90.0:
        return (0.0, 1.0)
    if angle_deg == 0.0:
        return (1.0, 0.0)
    a = math.radians(angle_deg)
    return (math.cos(a), math.sin(a))


@dataclass(frozen=True)
class ScanConfig:
    """Sampling square ``[-R, R]^2`` with step and probe length ``R / M``."""

    R: float = 1.5
    M: int = 40
    orientation: str = "ver"
    delta: float = 0.0
    noise: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if not (self.R > 0 and math.isfinite(self.R)):
            raise InvalidArgumentError(f"R must be positive, got {self.R}")
        if int(self.M) != self.M or self.M < 1:
            raise InvalidArgumentError(f"M must be a positive integer, got {self.M}")
        object.__setattr__(self, "M", int(self.M))
        parse_orientation(self.orientation)
        _check_delta(self.delta)
        if not self.noise >= 0:
            raise InvalidArgumentError(f"noise level must be >= 0, got {self.noise}")

    @property
    def step(self) -> float:
        return self.R / self.M

    @property
    def probe_length(self) -> float:
        return self.R / self.M

    @property
    def angle(self) -> float:
        return parse_orientation(self.orientation)

    @property
    def direction(self) -> tuple:
        return probe_direction(self.angle)

    def axis(self) -> np.ndarray:
        """Center coordinates ``R i / M`` for ``i = -M..M``."""
        return self.R * np.arange(-self.M, self.M + 1) / self.M


@dataclass(frozen=True, eq=False)
class IndicatorGrid:
    """Indicator counts; ``counts[i + M, j + M]`` belongs to center ``(R i/M, R j/M)``."""

    counts: np.ndarray
    config: ScanConfig
    k: float
    N: int

    def __post_init__(self):
        size = 2 * self.config.M + 1
        if self.counts.shape != (size, size):
            raise InvalidArgumentError(f"grid shape {self.counts.shape} does not match M={self.config.M}")

    def centers(self) -> np.ndarray:
        ax = self.config.axis()
        X, Y = np.meshgrid(ax, ax, indexing="ij")
        return np.stack([X, Y], axis=-1)

    def to_csv(self, path) -> Path:
        cfg = self.config
        ax = cfg.axis()
        lines = [f"# {key}={val}" for key, val in asdict(cfg).items()]
        lines += [f"# k={self.k!r}", f"# N={self.N}", "i,j,x,y,count"]
        for a, i in enumerate(range(-cfg.M, cfg.M + 1)):
            for b, j in enumerate(range(-cfg.M, cfg.M + 1)):
                lines.append(f"{i},{j},{ax[a]!r},{ax[b]!r},{int(self.counts[a, b])}")
        path = Path(path)
        path.write_text("\n".join(lines) + "\n")
        return path

    @classmethod
    def from_csv(cls, path) -> "IndicatorGrid":
        meta = {}
        rows = []
        for line in Path(path).read_text().splitlines():
            if line.startswith("#"):
                key, _, val = line[1:].strip().partition("=")
                meta[key] = val
            elif line and not line.startswith("i,"):
                i, j, _, _, c = line.split(",")
                rows.append((int(i), int(j), int(c)))
        cfg = ScanConfig(float(meta["R"]), int(meta["M"]), meta["orientation"],
                         float(meta["delta"]), float(meta["noise"]), int(meta["seed"]))
        counts = np.zeros((2 * cfg.M + 1, 2 * cfg.M + 1), dtype=int)
        for i, j, c in rows:
            counts[i + cfg.M, j + cfg.M] = c
        return cls(counts, cfg, float(meta["k"]), int(meta["N"]))

    def image(self) -> np.ndarray:
        """8-bit grayscale, min-max normalized, low counts dark, +y up."""
        c = self.counts.astype(float)
        lo, hi = c.min(), c.max()
        scaled = np.zeros_like(c) if hi == lo else (c - lo) / (hi - lo)
        img = np.round(255.0 * scaled).astype(np.uint8)
        return img.T[::-1].copy()

    def to_pgm(self, path) -> Path:
        img = self.image()
        h, w = img.shape
        path = Path(path)
        path.write_bytes(f"P5\n{w} {h}\n255\n".encode("ascii") + img.tobytes())
        return path

    def to_png(self, path) -> Path:
        from PIL import Image  # optional dependency

        path = Path(path)
        Image.fromarray(self.image()).save(path)
        return path


def _row_counts(base, centers, direction, length, k, N, delta):
    grams = segment_gram_values(centers, direction, length, k, N)
    return count_below(base[None] - grams, delta)


def scan(F: FarFieldMatrix, cfg: ScanConfig, workers: int = 1) -> IndicatorGrid:
    """Indicator value of every probe of the sampling grid.

    Rows of the grid (fixed ``i``) are independent; with ``workers > 1`` they
    are evaluated on a thread pool. Each row is computed by the same call in
    both modes, so the result does not depend on ``workers``.
    """
    if cfg.noise > 0:
        F = add_noise(F, cfg.noise, cfg.seed)
    base = inner_base(F)
    ax = cfg.axis()
    direction = cfg.direction

    def row(a):
        centers = np.stack([np.full_like(ax, ax[a]), ax], axis=-1)
        try:
            return _row_counts(base, centers, direction, cfg.probe_length, F.k, F.N, cfg.delta)
        except (InvalidArgumentError, NumericalFailureError) as exc:
            raise type(exc)(f"scan failed at i={a - cfg.M}: {exc}") from exc

    size = len(ax)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(row, range(size)))
    else:
        rows = [row(a) for a in range(size)]
    return IndicatorGrid(np.vstack(rows).astype(int), cfg, F.k, F.N)


def contrast_statistics(grid: IndicatorGrid, arc: ParametricArc, near_distance: float,
                        far_distance: float):
    """Mean indicator near the arc and far from it.

    Returns ``(mean_near, mean_far)`` over centers with distance to the arc
    ``<= near_distance`` and ``> far_distance`` respectively.
    """
    if not 0 < near_distance < far_distance:
        raise InvalidArgumentError("need 0 < near_distance < far_distance")
    dist = arc.distance_to(grid.centers())
    near = dist <= near_distance
    far = dist > far_distance
    if not near.any() or not far.any():
        raise InvalidArgumentError("no grid centers in the near or far set")
    return float(grid.counts[near].mean()), float(grid.counts[far].mean())
