import math
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from risradar.layout import paper_layout  # noqa: E402

LAMBDA_TABLE = 0.214284


@pytest.fixture
def aligned_dual():
    return paper_layout(r1=250.0, r_ris=50.0, r2=100.0, cells=10)


@pytest.fixture
def oblique_small():
    return paper_layout(r1=60.0, r_ris=30.0, r2=25.0, cells=(4, 5),
                        radar_angle=math.radians(25), ris2_angle=math.radians(10))


@pytest.fixture
def configs_dir():
    return Path(__file__).resolve().parent.parent / "configs"


_ACCEPTANCE = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_ACCEPTANCE] = []


@pytest.fixture
def acceptance_log(request):
    """Record one PASS/FAIL line per acceptance criterion for the summary."""
    lines = request.config.stash[_ACCEPTANCE]

    def record(criterion, ok, detail):
        line = f"[{'PASS' if ok else 'FAIL'}] {criterion}: {detail}"
        lines.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)
