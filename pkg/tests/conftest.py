import pytest
from hypothesis import strategies as st

from sumsetlab.intset import BoundedIntSet
from sumsetlab.ranksum import SetFamily


@st.composite
def bounded_sets(draw, max_g=12, g=None):
    if g is None:
        g = draw(st.integers(1, max_g))
    return BoundedIntSet(g, draw(st.integers(0, (1 << g) - 1)) << 1)


@st.composite
def families(draw, max_g=8, max_n=4, min_n=1):
    g = draw(st.integers(1, max_g))
    n = draw(st.integers(min_n, max_n))
    return SetFamily(g, tuple(draw(bounded_sets(g=g)) for _ in range(n)))


def pytest_configure(config):
    config.acceptance_lines = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "acceptance_lines", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)


@pytest.fixture
def record_criterion(request):
    """Record one summary line per acceptance criterion."""

    def record(number: int, ok: bool, summary: str) -> None:
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {summary}"
        request.config.acceptance_lines.append(line)
        print(line)

    return record
