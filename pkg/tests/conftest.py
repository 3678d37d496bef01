import random

import pytest
from hypothesis import settings
from hypothesis import strategies as st

from prbg.obg import OBG

settings.register_profile("default", deadline=None, derandomize=True, max_examples=100)
settings.load_profile("default")


@st.composite
def obgs(draw, max_side=6, min_side=0):
    nu = draw(st.integers(min_side, max_side))
    nv = draw(st.integers(min_side, max_side))
    cells = [(u, v) for u in range(nu) for v in range(nv)]
    mask = draw(st.lists(st.booleans(), min_size=len(cells), max_size=len(cells)))
    return OBG(nu, nv, frozenset(c for c, keep in zip(cells, mask) if keep))


def random_obg(rng: random.Random, max_total: int = 20, density: float | None = None) -> OBG:
    nu = rng.randint(1, max_total - 1)
    nv = rng.randint(1, max_total - nu)
    p = rng.uniform(0.1, 0.9) if density is None else density
    return OBG(nu, nv, frozenset((u, v) for u in range(nu) for v in range(nv) if rng.random() < p))


@pytest.fixture
def k22():
    return OBG(2, 2, frozenset({(0, 0), (0, 1), (1, 0), (1, 1)}))


# one summary line per acceptance criterion, printed after the run
ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_sessionstart(session):
    import time

    session.config._prbg_started = time.perf_counter()


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[k])


def pytest_collection_modifyitems(items):
    # acceptance runs last so its time budget covers the whole suite
    items.sort(key=lambda item: item.nodeid.startswith("tests/test_acceptance.py"))
