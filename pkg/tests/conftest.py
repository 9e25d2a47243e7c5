from __future__ import annotations

import sys

import numpy as np
import pytest
from hypothesis import HealthCheck, settings, strategies as st

from nervecheck.fixtures import boundary_of_tetrahedron, cycle_graph
from nervecheck.simplicial import Chain, build_complex

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

SMALL_PRIMES = [2, 3, 5, 7]
primes = st.sampled_from(SMALL_PRIMES)


@st.composite
def matrices(draw, max_rows: int = 6, max_cols: int = 6):
    p = draw(primes)
    r = draw(st.integers(0, max_rows))
    c = draw(st.integers(1, max_cols))
    vals = draw(st.lists(st.integers(0, p - 1), min_size=r * c, max_size=r * c))
    return p, np.array(vals, dtype=np.int64).reshape(r, c)


# complexes used across the suite, keyed by a name for failure messages
COMPLEXES = {
    "C3": cycle_graph(3),
    "C9": cycle_graph(9),
    "dTetra": boundary_of_tetrahedron(),
    "Delta3": build_complex([[0, 1, 2, 3]]),
    "two_triangles": build_complex([[0, 1, 2], [1, 2, 3], [3, 4]]),
}


def random_chain(K, n, p, rng) -> Chain:
    return Chain.from_vector(K, n, rng.integers(0, p, size=K.count(n)), p)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
