import pytest

from ctsrw import graph as G

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def k3():
    return G.parse_edge_list("a b\nb c\nc a")


@pytest.fixture
def c4():
    return G.parse_edge_list("1 2\n2 3\n3 4\n4 1")


@pytest.fixture
def c5():
    return G.cycle(5)


@pytest.fixture
def path3():
    return G.parse_edge_list("a b\nb c")


@pytest.fixture
def star4():
    return G.star(4)


@pytest.fixture
def weighted_triangle():
    return G.parse_edge_list("a b 1\nb c 2\nc a 3")
