"""Oracle checks run by ``crackmono selftest``."""

import numpy as np

from crackmono import oracles
from crackmono.forward import SolverConfig, far_field_matrix, reciprocity_residual
from crackmono.geometry import ProbeSegment, benchmark_arc, circle
from crackmono.indicator import negative_eigenvalue_count
from crackmono.operators import boundary_gram, segment_gram

SINC_TOL = 1e-10
RECIPROCITY_TOL = 1e-6
CONVERGENCE_TOL = 1e-8


def check_sinc(seed=0, probes=10):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(probes):
        ang = rng.uniform(0, 2 * np.pi)
        p = ProbeSegment(rng.uniform(-2, 2, 2), (np.cos(ang), np.sin(ang)), rng.uniform(0.01, 0.5))
        k = float(rng.choice([1.0, 5.0]))
        diff = segment_gram(p, k, 8).values - oracles.segment_gram_bruteforce(p, k, 8)
        worst = max(worst, float(np.max(np.abs(diff))))
    return worst <= SINC_TOL, f"max |closed form - quadrature| = {worst:.2e}"


def check_reciprocity(F):
    res = reciprocity_residual(F)
    return res <= RECIPROCITY_TOL, f"residual {res:.2e} (tol {RECIPROCITY_TOL:g})"


def check_convergence(arc_name, k, N, n):
    arc = benchmark_arc(arc_name)
    coarse = far_field_matrix(arc, SolverConfig(k, n, N))
    fine = far_field_matrix(arc, SolverConfig(k, 2 * n, N))
    diff = float(np.max(np.abs(coarse.values - fine.values)))
    return diff <= CONVERGENCE_TOL, f"|U(n={n}) - U(n={2 * n})|_max = {diff:.2e}"


def check_gram_invariants(k, N, q):
    mats = [
        segment_gram(ProbeSegment((0.3, -0.2), (0.6, 0.8), 0.2), k, N),
        boundary_gram(circle((0.1, 0.0), 2.0), k, N, q),
    ]
    worst_h = max(m.hermitian_defect() for m in mats)
    worst_psd = 0.0
    for m in mats:
        ev = np.linalg.eigvalsh(m.values)
        worst_psd = max(worst_psd, -ev[0] / ev[-1])
    ok = worst_h <= 1e-12 and worst_psd <= 1e-10
    return ok, f"hermitian defect {worst_h:.1e}, relative min eigenvalue {-worst_psd:.1e}"


def check_sturm(seed=0, trials=50):
    rng = np.random.default_rng(seed)
    mismatches = 0
    for _ in range(trials):
        size = int(rng.integers(4, 17))
        A = rng.standard_normal((size, size)) + 1j * rng.standard_normal((size, size))
        H = 0.5 * (A + A.conj().T)
        if negative_eigenvalue_count(H).count != oracles.sturm_negative_count(H):
            mismatches += 1
    return mismatches == 0, f"{mismatches} mismatches in {trials} random matrices"


def run_checks(cfg):
    """Run every check; returns ``[(name, ok, detail), ...]``."""
    from crackmono.cli import obtain_far_field

    results = []

    def record(name, fn, *args):
        try:
            ok, detail = fn(*args)
        except Exception as exc:  # a crashing check is a failed check
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        results.append((name, bool(ok), detail))

    record("sinc closed form", check_sinc, cfg.seed)
    try:
        F = obtain_far_field(cfg)
        record("reciprocity", check_reciprocity, F)
    except Exception as exc:
        results.append(("reciprocity", False, f"{type(exc).__name__}: {exc}"))
    record("self-convergence", check_convergence, cfg.arc, cfg.k, cfg.N, cfg.n)
    record("hermitian/psd gram", check_gram_invariants, cfg.k, cfg.N, cfg.q)
    record("sturm count", check_sturm, cfg.seed)
    return results
