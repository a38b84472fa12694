import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from fschannel.channels import (GilbertElliotSpec, SlidingWindowSpec, build_bursty,
                                build_gilbert_elliot, build_guard_space, build_no_consecutive,
                                build_noiseless, build_sliding_window_erasure,
                                build_sliding_window_symmetric)
from fschannel.graph import Kind, validate

from oracles import ring_machine

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@st.composite
def machines(draw, max_states=6, kinds=(Kind.ERASURE, Kind.ADDITIVE), qs=(2, 3)):
    """Valid machines: a clear ring through every state plus random error edges."""
    n = draw(st.integers(1, max_states))
    kind = draw(st.sampled_from(kinds))
    q = draw(st.sampled_from(qs))
    labels = [1] if kind is Kind.ERASURE else list(range(1, q))
    extras = []
    for s in range(n):
        for v in labels:
            if draw(st.booleans()):
                extras.append((s, draw(st.integers(0, n - 1)), v))
    return validate(ring_machine(n, extras, q, kind))


@pytest.fixture
def fig2():
    return build_no_consecutive(2)


@pytest.fixture
def fig4():
    return build_sliding_window_erasure(SlidingWindowSpec(3, 1, 2))


@pytest.fixture
def fig5():
    return build_sliding_window_symmetric(SlidingWindowSpec(3, 1, 3))


@pytest.fixture
def noiseless():
    return build_noiseless(2)


def example_machines():
    """Every figure machine plus a spread of family members."""
    out = [build_no_consecutive(2), build_no_consecutive(2, Kind.ADDITIVE), build_noiseless(2),
           build_sliding_window_erasure(SlidingWindowSpec(3, 1)),
           build_sliding_window_symmetric(SlidingWindowSpec(3, 1, 3)),
           build_bursty(3, 2), build_guard_space(2, 4), build_guard_space(2, 3),
           build_gilbert_elliot(GilbertElliotSpec(1, 3, 4)),
           build_sliding_window_erasure(SlidingWindowSpec(5, 2)),
           build_sliding_window_symmetric(SlidingWindowSpec(4, 1, 2))]
    return out


def pytest_terminal_summary(terminalreporter):
    import sys
    module = sys.modules.get("test_acceptance")
    if module is not None and module.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in module.RESULTS:
            terminalreporter.write_line(line)
