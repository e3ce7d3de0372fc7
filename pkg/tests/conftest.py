from __future__ import annotations

from pathlib import Path

import pytest

from minorstars.formats import parse_planar_code
from minorstars.generate import Corpus, GenConfig, icosahedron

DATA = Path(__file__).parent / "data"
CLOSURE_FILE = DATA / "closure_12_20.pc"

# every triangulation with minimum degree 5 on 12..20 vertices, by vertex count
CLOSURE_COUNTS = {12: 1, 13: 0, 14: 1, 15: 1, 16: 3, 17: 4, 18: 12, 19: 23, 20: 73}

ACCEPTANCE_KEY = pytest.StashKey[dict]()


@pytest.fixture(scope="session")
def icosa():
    return icosahedron()


@pytest.fixture(scope="session")
def small_corpus():
    return list(Corpus(GenConfig(seed=1, count=100, min_n=12, max_n=50)))


@pytest.fixture(scope="session")
def wide_corpus():
    """Larger graphs with a wide degree spread (Delta up to ~30)."""
    return list(Corpus(GenConfig(seed=7, count=60, min_n=60, max_n=200)))


@pytest.fixture(scope="session")
def closure_graphs():
    return parse_planar_code(CLOSURE_FILE.read_bytes())


@pytest.fixture(scope="session")
def acceptance_log(request):
    return request.config.stash.setdefault(ACCEPTANCE_KEY, {})


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    log = config.stash.get(ACCEPTANCE_KEY, None)
    if not log:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(log):
        ok, detail = log[key]
        terminalreporter.write_line(f"criterion {key}: {'PASS' if ok else 'FAIL'}  {detail}")
