import math
import random

import pytest

from aawrangle import SEMIRING_NAMES

INF = math.inf

# per-semiring value pools; small integers keep float products exact
VALUE_POOLS = {
    "plus_times": [-3, -2, -1, 1, 2, 3, 4, 0.5],
    "max_plus": [-INF, -3, -1, 0, 1, 2, 5, INF],
    "min_plus": [-INF, -3, -1, 0, 1, 2, 5, INF],
    "max_times": [0, 0.5, 1, 2, 3, 4, 7, INF],
    "min_times": [0, 0.5, 1, 2, 3, 4, 7, INF],
    "max_min": [0, 0.5, 1, 2, 3, 4, 7, INF],
    "min_max": [0, 0.5, 1, 2, 3, 4, 7, INF],
    "union_intersection": [frozenset(s) for s in
                           ({"a"}, {"b"}, {"a", "b"}, {"b", "c"}, {"a", "c", "d"},
                            {"d"}, {"a", "b", "c", "d"}, set())],
}

KEY_POOL = [1, 2, 3, 5, 8, "a", "b", "c", "d", "e", "f", "g", "h"]


def random_triples(rng, name, nrows=None, ncols=None, density=None, rows=None, cols=None):
    """Random COO triples with at most 10x10 keys and density <= 0.5."""
    rows = rows or rng.sample(KEY_POOL, nrows or rng.randint(1, 10))
    cols = cols or rng.sample(KEY_POOL, ncols or rng.randint(1, 10))
    density = rng.uniform(0.05, 0.5) if density is None else density
    pool = VALUE_POOLS[name]
    cells = [(r, c) for r in rows for c in cols]
    picked = rng.sample(cells, max(1, int(len(cells) * density)))
    return [(r, c, rng.choice(pool)) for r, c in picked]


@pytest.fixture
def rng():
    return random.Random(20240917)


@pytest.fixture(params=SEMIRING_NAMES)
def sr_name(request):
    return request.param


# -- acceptance reporting ----------------------------------------------------

_ACCEPTANCE = []


def pytest_configure(config):
    config.addinivalue_line(
        "markers", "acceptance(number, title): acceptance criterion test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None or report.when != "call":
        return
    num, title = marker.args
    _ACCEPTANCE.append((num, title, report.passed, report.duration))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num, title, passed, dur in sorted(_ACCEPTANCE):
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"[{status}] {num:>2}. {title} ({dur:.2f}s)")
