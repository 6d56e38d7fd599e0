import numpy as np
import pytest
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

ACCEPTANCE_KEY = pytest.StashKey[list]()


def random_sym(rng, p, scale=1.0):
    a = rng.standard_normal((p, p)) * scale
    return 0.5 * (a + a.T)


def random_cov(rng, p, ridge=0.1):
    m = rng.standard_normal((p, p))
    return m.T @ m / p + ridge * np.eye(p)


@st.composite
def sym_matrices(draw, min_p=1, max_p=6, bound=10.0):
    p = draw(st.integers(min_p, max_p))
    a = draw(hnp.arrays(np.float64, (p, p),
                        elements=st.floats(-bound, bound, allow_nan=False, allow_subnormal=False)))
    return 0.5 * (a + a.T)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def acceptance_log(request):
    return request.config.stash.setdefault(ACCEPTANCE_KEY, [])


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(ACCEPTANCE_KEY, [])
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for line in lines:
        terminalreporter.write_line(line)
