import numpy as np
import pytest

from entropic_ricci.chain import build_srw, from_kernel, generate

ACCEPTANCE_LINES: list[str] = []


def srw(family, n):
    return build_srw(generate(family, n))


def birth_death_kernel():
    """Lazy, non-uniform reversible chain on 4 states (not a simple random walk)."""
    return from_kernel([
        [0.5, 0.5, 0.0, 0.0],
        [0.2, 0.3, 0.5, 0.0],
        [0.0, 0.4, 0.1, 0.5],
        [0.0, 0.0, 0.6, 0.4],
    ])


SMALL_GRAPHS = [
    ("hypercube", 1), ("path", 3), ("path", 4), ("path", 5), ("path", 6),
    ("cycle", 3), ("cycle", 4), ("cycle", 5), ("cycle", 6),
    ("complete", 3), ("complete", 4), ("complete", 5), ("hypercube", 2),
]


@pytest.fixture(params=[("hypercube", 1), ("path", 4), ("cycle", 5), ("hypercube", 3), "birth_death"],
                ids=lambda p: p if isinstance(p, str) else f"{p[0]}{p[1]}")
def chain(request):
    if request.param == "birth_death":
        return birth_death_kernel()
    return srw(*request.param)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


_REPORTS = {}


def entropic_report(family, n, kind="log"):
    """Default-settings curvature report, computed once per session."""
    from entropic_ricci.curvature import entropic_curvature_lower_bound

    key = (family, n, kind)
    if key not in _REPORTS:
        _REPORTS[key] = entropic_curvature_lower_bound(srw(family, n), kind)
    return _REPORTS[key]
