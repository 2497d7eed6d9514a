import numpy as np
import pytest
from hypothesis import strategies as st

from diverse_committees import ApprovalProfile


@pytest.fixture
def four_voters():
    # voters: {0}, {0,1}, {1}, {2}
    return ApprovalProfile.from_sets([{0}, {0, 1}, {1}, {2}], m=3)


@st.composite
def profiles(draw, max_n=12, max_m=8, min_n=1, min_m=1):
    n = draw(st.integers(min_n, max_n))
    m = draw(st.integers(min_m, max_m))
    bits = draw(st.lists(st.booleans(), min_size=n * m, max_size=n * m))
    return ApprovalProfile(np.array(bits, dtype=bool).reshape(n, m))


@st.composite
def profile_and_committee(draw, **kw):
    prof = draw(profiles(**kw))
    w = draw(st.lists(st.integers(0, prof.m - 1), unique=True, max_size=prof.m))
    return prof, w


def random_profile(rng, n, m, p):
    return ApprovalProfile(rng.random((n, m)) < p)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[num])
