import pytest
from hypothesis import strategies as st

from rmtkit.adversary import normalize
from rmtkit.generate import path_instance, three_path_instance, two_path_instance

UNIVERSE = "abcdef"

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def path():
    return path_instance()


@pytest.fixture(scope="session")
def two_path():
    return two_path_instance()


@pytest.fixture(scope="session")
def three_path():
    return three_path_instance()


@st.composite
def structures(draw, universe=UNIVERSE, min_ground=0):
    ground = draw(st.sets(st.sampled_from(universe), min_size=min_ground))
    family = draw(
        st.lists(st.sets(st.sampled_from(sorted(ground))) if ground else st.just(set()), max_size=4)
    )
    return normalize(ground, family)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
