import sys

import numpy as np
import pytest
from hypothesis import strategies as st

from finring.constructions import compile_spec, direct_product, poly_quotient, zero_mul_ring, zmod

COLUMN = "closure(matrix:zmod:2:2; E11,E21)"
UPPER = "closure(matrix:zmod:2:2; E11,E12,E22)"


@pytest.fixture(scope="session")
def column_ring():
    return compile_spec(COLUMN)


@pytest.fixture(scope="session")
def upper_ring():
    return compile_spec(UPPER)


POOL_SPECS = [
    "zmod:1", "zmod:2", "zmod:4", "zmod:6", "zmod:8", "zmod:9", "zmod:12",
    COLUMN, UPPER, "closure(matrix:zmod:2:2; E11,E12)", "closure(matrix:zmod:2:2; E12)",
    "poly:2:x^2", "poly:2:x^2+x+1", "poly:3:x^2", "poly:2:x^3+x", "poly:2:x^3",
    "product(zmod:2, zmod:2)", "product(zmod:2, zmod:4)", "product(zmod:3, poly:2:x^2)",
    "zeromul:2,2", "zeromul:4", "zeromul:2,4",
]

_cache = {}


def pool_ring(spec):
    if spec not in _cache:
        _cache[spec] = compile_spec(spec)
    return _cache[spec]


@st.composite
def relabelled(draw, specs=POOL_SPECS):
    """A pool ring together with a random relabelling that fixes 0."""
    R = pool_ring(draw(st.sampled_from(specs)))
    rest = draw(st.permutations(range(1, R.order)))
    perm = [0] + list(rest)
    return R, perm


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(mod.RESULTS, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
        terminalreporter.write_line(line)
