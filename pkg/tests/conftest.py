import pytest

from mlsm import Matching, build_instance


@pytest.fixture
def ex1():
    """Four agents, three layers: the running example fixture.

    Layer 1: a-b, c-d mutual.  Layer 2: a-b, a-d mutual, c approves b.
    Layer 3: a-b, b-c mutual, c approves d, d approves a.
    """
    return build_instance(
        4,
        3,
        [
            [{1}, {0}, {3}, {2}],
            [{1, 3}, {0}, {1}, {0}],
            [{1}, {0, 2}, {1, 3}, {0}],
        ],
        names=["a", "b", "c", "d"],
    )


@pytest.fixture
def m1():
    return Matching.from_pairs([(0, 1), (2, 3)])


@pytest.fixture
def m2():
    return Matching.from_pairs([(0, 3), (1, 2)])


@pytest.fixture
def ex2():
    """a1/a2 approve each other in layer one only; a3/a4 in layer two only."""
    return build_instance(
        4,
        2,
        [
            [{1}, {0}, set(), set()],
            [set(), set(), {3}, {2}],
        ],
        names=["a1", "a2", "a3", "a4"],
    )


@pytest.fixture
def ex2_modified():
    """ex2 plus mutual a1-a3 approvals in both layers."""
    return build_instance(
        4,
        2,
        [
            [{1, 2}, {0}, {0}, set()],
            [{2}, set(), {0, 3}, {2}],
        ],
        names=["a1", "a2", "a3", "a4"],
    )


@pytest.fixture
def triangle():
    """Three agents all approving each other in a single layer."""
    return build_instance(3, 1, [[{1, 2}, {0, 2}, {0, 1}]])
