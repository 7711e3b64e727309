"""Command line entry point: ``crackmono {forward,scan,domain-test,selftest}``.

Settings come from an optional ``key = value`` config file (``--config``)
and are overridden by command line flags.

Exit codes: 0 success, 1 self-test failure, 2 bad configuration or I/O
error, 3 solver failure.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import logging
import sys
import time
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

import numpy as np

from crackmono.errors import InvalidArgumentError, NumericalFailureError
from crackmono.forward import FarFieldMatrix, SolverConfig, far_field_matrix, reciprocity_residual
from crackmono.geometry import benchmark_arc, circle
from crackmono.indicator import indicator_domain
from crackmono.scan import ScanConfig, contrast_statistics, parse_orientation, scan

logger = logging.getLogger("crackmono")

COMMANDS = ("forward", "scan", "domain-test", "selftest")


class ConfigError(InvalidArgumentError):
    pass


@dataclass
class RunConfig:
    command: str = "selftest"
    arc: str = "gamma1"
    k: float = 1.0
    N: int = 60
    n: int = 128
    R: float = 1.5
    M: int = 40
    orientation: str = "ver"
    delta: float = 0.0
    noise: float = 0.0
    seed: int = 0
    out: str = "out"
    cache: str = ""
    workers: int = 1
    q: int = 256
    near: float = 0.05
    far: float = 0.5
    png: bool = False
    circles: list = field(default_factory=list)

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}")
        try:
            benchmark_arc(self.arc)
            self.solver_config()
            self.scan_config()
            for c in self.circles:
                circle(c[:2], c[2])
        except InvalidArgumentError as exc:
            raise ConfigError(str(exc)) from exc
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        if not 0 < self.near < self.far:
            raise ConfigError("need 0 < near < far")

    def solver_config(self) -> SolverConfig:
        return SolverConfig(self.k, self.n, self.N)

    def scan_config(self) -> ScanConfig:
        return ScanConfig(self.R, self.M, self.orientation, self.delta, self.noise, self.seed)

    def to_text(self) -> str:
        lines = []
        for key, val in asdict(self).items():
            if key == "circles":
                val = ";".join(",".join(repr(float(x)) for x in c) for c in val)
            elif isinstance(val, float):
                val = repr(val)
            lines.append(f"{key} = {val}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str, base: "RunConfig | None" = None) -> "RunConfig":
        cfg = base or cls()
        for raw in text.splitlines():
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"config line without '=': {raw!r}")
            key, val = (part.strip() for part in line.split("=", 1))
            cfg.set(key, val)
        return cfg

    def set(self, key: str, value) -> None:
        types = {f.name: f.type for f in fields(self)}
        key = key.replace("-", "_")
        if key not in types:
            raise ConfigError(f"unknown config key {key!r}")
        if key == "circles":
            value = parse_circles(value) if isinstance(value, str) else list(value)
        elif types[key] == "bool":
            value = value if isinstance(value, bool) else str(value).lower() in ("1", "true", "yes")
        elif types[key] in ("int", "float"):
            try:
                value = {"int": int, "float": float}[types[key]](value)
            except ValueError:
                raise ConfigError(f"{key}: cannot parse {value!r}") from None
        setattr(self, key, value)


def parse_circles(text: str) -> list:
    """``"cx,cy,r;cx,cy,r"`` -> list of ``(cx, cy, r)``."""
    out = []
    for item in text.split(";"):
        if item.strip():
            try:
                cx, cy, r = (float(v) for v in item.split(","))
            except ValueError:
                raise ConfigError(f"bad circle {item!r}; expected cx,cy,r") from None
            out.append((cx, cy, r))
    return out


# -- far field cache --------------------------------------------------------

def cache_key(arc: str, k: float, N: int, n: int) -> str:
    return hashlib.sha256(f"{arc}|{float(k)!r}|{int(N)}|{int(n)}".encode()).hexdigest()[:16]


def cache_path(cache_dir, arc, k, N, n) -> Path:
    return Path(cache_dir) / f"farfield-{arc}-{cache_key(arc, k, N, n)}.csv"


def obtain_far_field(cfg: RunConfig) -> FarFieldMatrix:
    """Load the far field matrix from the cache, or compute (and store) it."""
    path = cache_path(cfg.cache, cfg.arc, cfg.k, cfg.N, cfg.n) if cfg.cache else None
    if path is not None and path.exists():
        logger.info("loading cached far field %s", path)
        return FarFieldMatrix.from_csv(path)
    F = far_field_matrix(benchmark_arc(cfg.arc), cfg.solver_config())
    if path is not None:
        path.parent.mkdir(parents=True, exist_ok=True)
        F.to_csv(path)
    return F


def _tag(cfg: RunConfig) -> str:
    return f"{cfg.arc}_k{cfg.k:g}_N{cfg.N}_n{cfg.n}"


# -- subcommands ------------------------------------------------------------

def run_forward(cfg: RunConfig) -> Path:
    F = obtain_far_field(cfg)
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    path = F.to_csv(out / f"farfield_{_tag(cfg)}.csv")
    fine = far_field_matrix(benchmark_arc(cfg.arc), SolverConfig(cfg.k, 2 * cfg.n, cfg.N))
    print(f"wrote {path} ({F.N * F.N} entries)")
    print(f"reciprocity residual: {reciprocity_residual(F):.3e}")
    print(f"self-convergence |U(n) - U(2n)|_max: {np.max(np.abs(F.values - fine.values)):.3e}")
    return path


def run_scan(cfg: RunConfig) -> tuple:
    F = obtain_far_field(cfg)
    sc = cfg.scan_config()
    start = time.perf_counter()
    grid = scan(F, sc, workers=cfg.workers)
    elapsed = time.perf_counter() - start
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    orient = str(cfg.orientation).replace(":", "")
    stem = out / f"grid_{_tag(cfg)}_{orient}_M{cfg.M}"
    csv_path = grid.to_csv(stem.with_suffix(".csv"))
    pgm_path = grid.to_pgm(stem.with_suffix(".pgm"))
    if cfg.png:
        grid.to_png(stem.with_suffix(".png"))
    print(f"wrote {csv_path} and {pgm_path} ({grid.counts.shape[0]}x{grid.counts.shape[1]}, {elapsed:.1f}s)")
    try:
        near, far = contrast_statistics(grid, benchmark_arc(cfg.arc), cfg.near, cfg.far)
    except InvalidArgumentError as exc:
        # coarse grids may have no center close to the arc
        print(f"contrast not available: {exc}")
        return csv_path, pgm_path
    print(f"mean indicator near (<= {cfg.near:g}): {near:.3f}")
    print(f"mean indicator far  (>  {cfg.far:g}): {far:.3f}")
    print(f"contrast far - near: {far - near:.3f}")
    return csv_path, pgm_path


DOMAIN_HEADER = ["cx", "cy", "radius", "contains", "count"]


def run_domain_test(cfg: RunConfig) -> Path:
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    path = out / f"domain_{_tag(cfg)}.csv"
    rows = []
    if cfg.circles:
        F = obtain_far_field(cfg)
        pts = benchmark_arc(cfg.arc).sample()
        for cx, cy, r in cfg.circles:
            count = indicator_domain(F, circle((cx, cy), r), cfg.delta, cfg.q)
            contains = bool(np.max(np.hypot(pts[:, 0] - cx, pts[:, 1] - cy)) < r)
            rows.append([repr(cx), repr(cy), repr(r), int(contains), count])
            print(f"circle ({cx:g}, {cy:g}) r={r:g}: contains={contains} count={count}")
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(DOMAIN_HEADER)
        writer.writerows(rows)
    print(f"wrote {path}")
    return path


def run_selftest(cfg: RunConfig) -> bool:
    from crackmono.selftest import run_checks

    results = run_checks(cfg)
    for name, ok, detail in results:
        print(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
    failed = [name for name, ok, _ in results if not ok]
    if failed:
        print(f"self-test failed: {', '.join(failed)}")
    return not failed


# -- argument parsing -------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key = value config file")
    common.add_argument("--arc", choices=["gamma1", "gamma2", "gamma3"])
    common.add_argument("--k", type=float)
    common.add_argument("--N", type=int, help="number of directions")
    common.add_argument("--n", type=int, help="quadrature size of the forward solver")
    common.add_argument("--R", type=float, help="half-width of the sampling square")
    common.add_argument("--M", type=int, help="grid resolution; probe length R/M")
    common.add_argument("--orientation", help="ver | hor | angle:<deg>")
    common.add_argument("--delta", type=float, help="eigenvalue threshold (count < -delta)")
    common.add_argument("--noise", type=float, help="relative noise level")
    common.add_argument("--seed", type=int)
    common.add_argument("--out", help="output directory")
    common.add_argument("--cache", help="far field cache directory")
    common.add_argument("--workers", type=int, help="threads used by scan")
    common.add_argument("--q", type=int, help="quadrature points on closed curves")
    common.add_argument("--near", type=float)
    common.add_argument("--far", type=float)
    common.add_argument("--png", action="store_true", default=None)
    common.add_argument("--circle", action="append", dest="circle_list", metavar="CX,CY,R")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="crackmono", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def config_from_args(args) -> RunConfig:
    cfg = RunConfig()
    if args.config:
        cfg = RunConfig.from_text(Path(args.config).read_text(), cfg)
    cfg.command = args.command
    for f in fields(RunConfig):
        val = getattr(args, f.name, None)
        if f.name != "command" and val is not None:
            cfg.set(f.name, val)
    if args.circle_list:
        cfg.circles = [c for item in args.circle_list for c in parse_circles(item)]
    if cfg.orientation is not None:
        try:
            parse_orientation(cfg.orientation)
        except InvalidArgumentError as exc:
            raise ConfigError(str(exc)) from exc
    cfg.validate()
    return cfg


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = config_from_args(args)
    except (ConfigError, OSError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    try:
        if cfg.command == "forward":
            run_forward(cfg)
        elif cfg.command == "scan":
            run_scan(cfg)
        elif cfg.command == "domain-test":
            run_domain_test(cfg)
        else:
            return 0 if run_selftest(cfg) else 1
    except NumericalFailureError as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return 3
    except (OSError, InvalidArgumentError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
