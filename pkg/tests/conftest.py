import pytest

from crackmono import SolverConfig, benchmark_arc, far_field_matrix

K = 1.0
N_DIRS = 60
N_QUAD = 128


@pytest.fixture(scope="session")
def solver_cfg():
    return SolverConfig(K, N_QUAD, N_DIRS)


@pytest.fixture(scope="session")
def far_fields(solver_cfg):
    """Far field matrices of the three benchmark arcs, computed once per session."""
    return {a: far_field_matrix(benchmark_arc(a), solver_cfg) for a in (1, 2, 3)}


ACCEPTANCE_LINES = []


@pytest.fixture
def acceptance():
    """Record one PASS/FAIL line per acceptance criterion, then assert it."""

    def report(name, ok, detail):
        line = f"{'PASS' if ok else 'FAIL'}  {name}: {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        assert ok, line

    return report


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
