from fractions import Fraction

import pytest

from metricblocks import validate_metric

FIG1_LABELS = ("a", "b", "c", "d", "e")
FIG1_TABLE = [
    [0, 3, 6, 9, 5],
    [3, 0, 5, 8, 4],
    [6, 5, 0, 3, 5],
    [9, 8, 3, 0, 4],
    [5, 4, 5, 4, 0],
]

# block splits of the five-point example, with their isolation indices
FIG1_SPLITS = {
    frozenset({"a"}): Fraction(2),
    frozenset({"b"}): Fraction(1),
    frozenset({"d"}): Fraction(1),
    frozenset({"a", "b"}): Fraction(1),
}

FIG1_INTERIOR = [
    (2, 1, 4, 7, 3),
    (3, 2, 3, 6, 2),
    (8, 7, 2, 1, 3),
]


@pytest.fixture(scope="session")
def fig1():
    return validate_metric(FIG1_LABELS, FIG1_TABLE)


@pytest.fixture(scope="session")
def fig1_minus_c(fig1):
    return fig1.restrict(("a", "b", "d", "e"))


@pytest.fixture(scope="session")
def four_cycle():
    table = [[0, 1, 2, 1], [1, 0, 1, 2], [2, 1, 0, 1], [1, 2, 1, 0]]
    return validate_metric(("a", "b", "c", "d"), table)


@pytest.fixture(scope="session")
def two_point():
    t = Fraction(3, 2)
    return validate_metric(("x", "y"), [[0, t], [t, 0]])


@pytest.fixture(scope="session")
def star3():
    # three leaves hanging off an unlabeled center at weight 1 each
    return validate_metric(("x", "y", "z"), [[0, 2, 2], [2, 0, 2], [2, 2, 0]])
